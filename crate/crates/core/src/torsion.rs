//! Torsion subcomplexes of the orbit space: extraction, reduction, and the
//! classification of reduced components.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactchar::{legal_variants, torsion_block, EmbeddingLabel, Prime, StabilizerType, Variant};
use crate::intmat::{chain_homology, AbelianGroup, IntegerMatrix};
use crate::qcomplex::{Endpoint, QuotientComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("{count} component(s) of the reduced {ell}-torsion subcomplex have a shape outside the known list")]
    UnknownComponent { ell: Prime, count: usize },
    #[error("unknown component type {0:?}")]
    UnknownTag(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionVertex {
    pub id: String,
    pub stab: StabilizerType,
}

/// An edge of the torsion graph; its stabilizer is always `C_ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionEdge {
    pub id: String,
    pub origin: Endpoint,
    pub end: Endpoint,
}

impl TorsionEdge {
    pub fn is_loop(&self) -> bool {
        self.origin.vertex == self.end.vertex
    }

    fn reversed(&self) -> TorsionEdge {
        TorsionEdge { id: self.id.clone(), origin: self.end, end: self.origin }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionGraph {
    pub ell: Prime,
    pub vertices: Vec<TorsionVertex>,
    pub edges: Vec<TorsionEdge>,
}

impl TorsionGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of edge ends at vertex `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.origin.vertex == v) + usize::from(e.end.vertex == v))
            .sum()
    }

    /// Vertex sets of the connected components, in order of first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.origin.vertex), find(&mut parent, e.end.vertex));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Indices of the edges inside the component with the given vertices.
    pub fn component_edges(&self, vertices: &[usize]) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| vertices.contains(&self.edges[i].origin.vertex)).collect()
    }

    fn remove_vertex(&mut self, v: usize) {
        debug_assert!(self.edges.iter().all(|e| e.origin.vertex != v && e.end.vertex != v));
        self.vertices.remove(v);
        for e in &mut self.edges {
            for p in [&mut e.origin, &mut e.end] {
                if p.vertex > v {
                    p.vertex -= 1;
                }
            }
        }
    }
}

impl fmt::Display for TorsionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}-torsion graph: {} vertices, {} edges", self.ell, self.vertices.len(), self.edges.len())?;
        for v in &self.vertices {
            writeln!(f, "  vertex {} [{}]", v.id, v.stab)?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "  edge {}: {} [{}] -> {} [{}]",
                e.id,
                self.vertices[e.origin.vertex].id,
                e.origin.emb.variant(),
                self.vertices[e.end.vertex].id,
                e.end.emb.variant()
            )?;
        }
        Ok(())
    }
}

/// The cells whose stabilizer order is divisible by `ell`.
pub fn extract(c: &QuotientComplex, ell: Prime) -> TorsionGraph {
    let mut index = vec![None; c.vertices().len()];
    let mut vertices = Vec::new();
    for (i, v) in c.vertices().iter().enumerate() {
        if v.stab.has_torsion(ell) {
            index[i] = Some(vertices.len());
            vertices.push(TorsionVertex { id: v.id.clone(), stab: v.stab });
        }
    }
    let remap = |p: &Endpoint| Endpoint {
        vertex: index[p.vertex].expect("a vertex contains its edge stabilizers"),
        emb: p.emb,
    };
    let edges = c
        .edges()
        .iter()
        .filter(|e| e.stab.has_torsion(ell))
        .map(|e| TorsionEdge { id: e.id.clone(), origin: remap(&e.origin), end: remap(&e.end) })
        .collect();
    TorsionGraph { ell, vertices, edges }
}

/// Whether the inclusion of `C_ell` into a vertex group of this type is an
/// isomorphism on the `ell`-torsion part of the representation ring.
pub fn satisfies_condition_b(stab: StabilizerType, ell: Prime) -> bool {
    matches!(
        (stab, ell),
        (StabilizerType::C2, Prime::Two)
            | (StabilizerType::S3, Prime::Two)
            | (StabilizerType::C3, Prime::Three)
            | (StabilizerType::A4, Prime::Three)
    )
}

/// How embedding labels compose when two edges are merged through a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelPolicy {
    /// Carry the twist between the two labels at the removed vertex over to
    /// the far end, so the torsion homology is unchanged.
    #[default]
    Compose,
    /// Keep the far-end labels as they are. Agrees with `Compose` whenever
    /// bases have been chosen so that all blocks at the merged vertices are
    /// identities.
    Keep,
}

fn block(emb: &EmbeddingLabel, ell: Prime) -> IntegerMatrix {
    torsion_block(emb, ell).expect("torsion graph edges carry C_ell stabilizers")
}

/// The label at the same inclusion whose block is `block(emb) * swap`.
fn twisted(emb: &EmbeddingLabel, ell: Prime) -> EmbeddingLabel {
    let b = block(emb, ell);
    let swap = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
    let target = &b * &swap;
    legal_variants(emb.sub(), emb.over())
        .iter()
        .map(|&v| EmbeddingLabel::new(emb.sub(), emb.over(), v).expect("listed as legal"))
        .find(|e| block(e, ell) == target)
        .expect("every C3 inclusion admits the twisted label")
}

pub fn reduce(g: &TorsionGraph) -> TorsionGraph {
    reduce_with(g, LabelPolicy::default())
}

/// Cuts terminal edges and merges edge pairs through vertices satisfying
/// Condition B until neither applies, then canonicalizes circles.
pub fn reduce_with(g: &TorsionGraph, policy: LabelPolicy) -> TorsionGraph {
    let mut g = g.clone();
    let ell = g.ell;
    'outer: loop {
        for v in 0..g.vertices.len() {
            if !satisfies_condition_b(g.vertices[v].stab, ell) {
                continue;
            }
            let at_v: Vec<usize> = (0..g.edges.len())
                .filter(|&i| g.edges[i].origin.vertex == v || g.edges[i].end.vertex == v)
                .collect();
            match (at_v.as_slice(), g.degree(v)) {
                (&[e], 1) => {
                    g.edges.remove(e);
                    g.remove_vertex(v);
                    continue 'outer;
                }
                (&[e1, e2], 2) => {
                    merge(&mut g, v, e1, e2, policy);
                    continue 'outer;
                }
                _ => {}
            }
        }
        break;
    }
    canonicalize_circles(&mut g);
    g
}

fn merge(g: &mut TorsionGraph, v: usize, e1: usize, e2: usize, policy: LabelPolicy) {
    let ell = g.ell;
    let first = if g.edges[e1].end.vertex == v { g.edges[e1].clone() } else { g.edges[e1].reversed() };
    let second = if g.edges[e2].origin.vertex == v { g.edges[e2].clone() } else { g.edges[e2].reversed() };
    let mut origin = first.origin;
    if policy == LabelPolicy::Compose && block(&first.end.emb, ell) != block(&second.origin.emb, ell) {
        origin.emb = twisted(&origin.emb, ell);
    }
    g.edges[e1] = TorsionEdge { id: format!("{}*{}", first.id, second.id), origin, end: second.end };
    g.edges.remove(e2);
    g.remove_vertex(v);
}

/// A lone vertex with a single untwisted loop becomes `C_ell` with identity labels.
fn canonicalize_circles(g: &mut TorsionGraph) {
    let ell = g.ell;
    for comp in g.components() {
        let edges = g.component_edges(&comp);
        if let (&[v], &[e]) = (comp.as_slice(), edges.as_slice()) {
            let edge = &g.edges[e];
            if satisfies_condition_b(g.vertices[v].stab, ell)
                && block(&edge.origin.emb, ell) == block(&edge.end.emb, ell)
            {
                let c = ell.cyclic();
                let emb = EmbeddingLabel::new(c, c, Variant::Id).expect("identity inclusion");
                g.vertices[v].stab = c;
                g.edges[e].origin.emb = emb;
                g.edges[e].end.emb = emb;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentType {
    #[serde(alias = "Circle3")]
    Circle,
    Edge2,
    Theta,
    Rho,
    Edge3,
    Unknown,
}

impl ComponentType {
    pub fn tag(self) -> &'static str {
        match self {
            ComponentType::Circle => "Circle",
            ComponentType::Edge2 => "Edge2",
            ComponentType::Theta => "Theta",
            ComponentType::Rho => "Rho",
            ComponentType::Edge3 => "Edge3",
            ComponentType::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ComponentType {
    type Err = TorsionError;
    fn from_str(s: &str) -> Result<Self, TorsionError> {
        use ComponentType::*;
        [Circle, Edge2, Theta, Rho, Edge3, Unknown]
            .into_iter()
            .find(|t| t.tag() == s)
            .or((s == "Circle3").then_some(Circle))
            .ok_or_else(|| TorsionError::UnknownTag(s.to_string()))
    }
}

/// Classifies one component given by its vertex and edge indices.
pub fn classify_component(g: &TorsionGraph, vertices: &[usize], edges: &[usize]) -> ComponentType {
    use StabilizerType::*;
    let stab = |v: usize| g.vertices[v].stab;
    let e = |i: usize| &g.edges[i];
    // the V4 ends at vertex v use each of the three involutions exactly once
    let all_involutions = |v: usize| {
        let mut seen: Vec<Variant> = edges
            .iter()
            .flat_map(|&i| [e(i).origin, e(i).end])
            .filter(|p| p.vertex == v)
            .map(|p| p.emb.variant())
            .collect();
        seen.sort();
        seen == [Variant::A, Variant::B, Variant::Ab]
    };
    match (vertices, edges) {
        (&[v], &[i]) if satisfies_condition_b(stab(v), g.ell) => {
            if block(&e(i).origin.emb, g.ell) == block(&e(i).end.emb, g.ell) {
                ComponentType::Circle
            } else {
                ComponentType::Unknown
            }
        }
        (&[v, w], &[i]) if !e(i).is_loop() => match (g.ell, stab(v), stab(w)) {
            (Prime::Two, A4, A4) => ComponentType::Edge2,
            (Prime::Three, S3, S3) => ComponentType::Edge3,
            _ => ComponentType::Unknown,
        },
        (&[v, w], &[_, _, _])
            if g.ell == Prime::Two
                && stab(v) == V4
                && stab(w) == V4
                && edges.iter().all(|&i| !e(i).is_loop())
                && all_involutions(v)
                && all_involutions(w) =>
        {
            ComponentType::Theta
        }
        (&[v, w], &[_, _]) if g.ell == Prime::Two => {
            let (x, y) = if stab(v) == V4 { (v, w) } else { (w, v) };
            let loops = edges.iter().filter(|&&i| e(i).is_loop() && e(i).origin.vertex == x).count();
            if stab(x) == V4 && stab(y) == A4 && loops == 1 && all_involutions(x) {
                ComponentType::Rho
            } else {
                ComponentType::Unknown
            }
        }
        _ => ComponentType::Unknown,
    }
}

/// Component types with multiplicities, in type order.
pub fn classify(g: &TorsionGraph) -> Vec<(ComponentType, usize)> {
    let mut counts: BTreeMap<ComponentType, usize> = BTreeMap::new();
    for comp in g.components() {
        let edges = g.component_edges(&comp);
        *counts.entry(classify_component(g, &comp, &edges)).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Counting invariants of the reduced torsion subcomplexes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionInventory {
    pub o2: u64,
    pub iota2: u64,
    pub theta: u64,
    pub rho: u64,
    pub z2: u64,
    pub d2: u64,
    pub o3: u64,
    pub iota3: u64,
}

impl TorsionInventory {
    /// Builds the counts from component lists for the primes 2 and 3.
    pub fn from_components(c2: &[ComponentType], c3: &[ComponentType]) -> Result<Self, TorsionError> {
        use ComponentType::*;
        let mut inv = TorsionInventory::default();
        let mut unknown2 = 0;
        for t in c2 {
            match t {
                Circle => inv.o2 += 1,
                Edge2 => inv.iota2 += 1,
                Theta => inv.theta += 1,
                Rho => inv.rho += 1,
                Edge3 | Unknown => unknown2 += 1,
            }
        }
        if unknown2 > 0 {
            return Err(TorsionError::UnknownComponent { ell: Prime::Two, count: unknown2 });
        }
        let mut unknown3 = 0;
        for t in c3 {
            match t {
                Circle => inv.o3 += 1,
                Edge3 => inv.iota3 += 1,
                _ => unknown3 += 1,
            }
        }
        if unknown3 > 0 {
            return Err(TorsionError::UnknownComponent { ell: Prime::Three, count: unknown3 });
        }
        inv.z2 = inv.o2 + inv.iota2 + 3 * inv.theta + 2 * inv.rho;
        inv.d2 = 2 * (inv.iota2 + inv.theta + inv.rho);
        Ok(inv)
    }

    /// Components of type `Circle` ... `Rho` for 2, and `Circle`, `Edge3` for 3.
    pub fn components(&self, ell: Prime) -> Vec<ComponentType> {
        use ComponentType::*;
        let rep = |t: ComponentType, n: u64| std::iter::repeat(t).take(n as usize);
        match ell {
            Prime::Two => rep(Circle, self.o2)
                .chain(rep(Edge2, self.iota2))
                .chain(rep(Theta, self.theta))
                .chain(rep(Rho, self.rho))
                .collect(),
            Prime::Three => rep(Circle, self.o3).chain(rep(Edge3, self.iota3)).collect(),
        }
    }
}

fn expand(counts: &[(ComponentType, usize)]) -> Vec<ComponentType> {
    counts.iter().flat_map(|&(t, n)| std::iter::repeat(t).take(n)).collect()
}

pub fn inventory(c: &QuotientComplex) -> Result<TorsionInventory, TorsionError> {
    let c2 = expand(&classify(&reduce(&extract(c, Prime::Two))));
    let c3 = expand(&classify(&reduce(&extract(c, Prime::Three))));
    TorsionInventory::from_components(&c2, &c3)
}

/// `Psi_1` restricted to the `ell`-torsion blocks: rows are vertex block
/// coordinates, columns edge block coordinates, each column `end - origin`.
pub fn torsion_differential(g: &TorsionGraph) -> IntegerMatrix {
    let ell = g.ell;
    let mut row_start = Vec::with_capacity(g.vertices.len());
    let mut rows = 0;
    for v in &g.vertices {
        row_start.push(rows);
        rows += v.stab.torsion_rank(ell);
    }
    let width = ell.cyclic().torsion_rank(ell);
    let mut d = IntegerMatrix::zeros(rows, width * g.edges.len());
    for (j, e) in g.edges.iter().enumerate() {
        d.add_block(row_start[e.end.vertex], j * width, &block(&e.end.emb, ell), 1);
        d.add_block(row_start[e.origin.vertex], j * width, &block(&e.origin.emb, ell), -1);
    }
    d
}

/// `(H0, H1)` of the two-term torsion complex.
pub fn torsion_homology(g: &TorsionGraph) -> (AbelianGroup, AbelianGroup) {
    let d = torsion_differential(g);
    let h0 = chain_homology(&IntegerMatrix::zeros(0, d.rows()), &d).expect("shapes agree");
    let h1 = chain_homology(&d, &IntegerMatrix::zeros(d.cols(), 0)).expect("shapes agree");
    (h0, h1)
}
