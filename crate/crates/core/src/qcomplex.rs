//! Quotients of proper 2-dimensional cell complexes with Klein-list
//! stabilizers: JSON document format, validation, and cellular homology of
//! the orbit space.
//!
//! Orientation convention: an edge runs from `origin` to `end`, so its
//! cellular boundary is `end - origin`; a face's boundary is the signed
//! edge combination listed in the document.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactchar::{EmbeddingLabel, StabilizerType, Variant};
use crate::intmat::{chain_homology, AbelianGroup, IntegerMatrix};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub faces: Vec<FaceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub stab: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointDoc {
    pub v: String,
    pub emb: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub stab: String,
    pub origin: EndpointDoc,
    pub end: EndpointDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub id: String,
    /// Optional; when present it must be `"1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stab: Option<String>,
    #[serde(default)]
    pub boundary: Vec<BoundaryTermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryTermDoc {
    pub e: String,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId { kind: &'static str, id: String },
    UnknownStabilizer { cell: String, tag: String },
    UnknownVariant { edge: String, tag: String },
    EdgeStabilizerNotCyclic { edge: String, stab: StabilizerType },
    FaceNotTrivial { face: String, tag: String },
    UnknownVertex { edge: String, vertex: String },
    UnknownEdge { face: String, edge: String },
    IllegalEmbedding {
        edge: String,
        side: &'static str,
        sub: StabilizerType,
        over: StabilizerType,
        variant: Variant,
    },
    BoundaryNotClosed { face: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { kind, id } => write!(f, "duplicate {kind} id {id:?}"),
            Violation::UnknownStabilizer { cell, tag } => {
                write!(f, "cell {cell:?}: unknown stabilizer type {tag:?}")
            }
            Violation::UnknownVariant { edge, tag } => {
                write!(f, "edge {edge:?}: unknown embedding variant {tag:?}")
            }
            Violation::EdgeStabilizerNotCyclic { edge, stab } => {
                write!(f, "edge {edge:?}: stabilizer {stab} is not cyclic of order at most 3")
            }
            Violation::FaceNotTrivial { face, tag } => {
                write!(f, "face {face:?}: stabilizer {tag:?} is not trivial")
            }
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge:?}: unknown vertex {vertex:?}")
            }
            Violation::UnknownEdge { face, edge } => {
                write!(f, "face {face:?}: unknown edge {edge:?}")
            }
            Violation::IllegalEmbedding { edge, side, sub, over, variant } => write!(
                f,
                "edge {edge:?} {side}: IllegalEmbedding {sub} -> {over} with variant {variant}"
            ),
            Violation::BoundaryNotClosed { face } => {
                write!(f, "face {face:?}: boundary is not a cycle (d1 * d2 != 0)")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid complex: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub stab: StabilizerType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Endpoint {
    pub vertex: usize,
    pub emb: EmbeddingLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub stab: StabilizerType,
    pub origin: Endpoint,
    pub end: Endpoint,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.origin.vertex == self.end.vertex
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    /// `(edge index, coefficient)` in document order.
    pub boundary: Vec<(usize, i64)>,
}

/// A validated quotient complex. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientComplex {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
}

pub fn parse(text: &str) -> Result<QuotientComplex, ComplexError> {
    let doc: ComplexDocument = serde_json::from_str(text).map_err(|e| ComplexError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    QuotientComplex::from_document(&doc)
}

pub fn serialize(c: &QuotientComplex) -> String {
    serde_json::to_string_pretty(&c.to_document()).expect("documents always serialize")
}

fn check_unique<'a>(kind: &'static str, ids: impl Iterator<Item = &'a String>, out: &mut Vec<Violation>) {
    let mut seen = HashMap::new();
    for id in ids {
        if seen.insert(id.as_str(), ()).is_some() {
            out.push(Violation::DuplicateId { kind, id: id.clone() });
        }
    }
}

impl QuotientComplex {
    /// Validates a document, reporting every violated invariant at once.
    pub fn from_document(doc: &ComplexDocument) -> Result<Self, ComplexError> {
        let mut errs = Vec::new();
        check_unique("vertex", doc.vertices.iter().map(|v| &v.id), &mut errs);
        check_unique("edge", doc.edges.iter().map(|e| &e.id), &mut errs);
        check_unique("face", doc.faces.iter().map(|f| &f.id), &mut errs);

        let mut vertices = Vec::with_capacity(doc.vertices.len());
        let mut vertex_index = HashMap::new();
        let mut bad_vertex = Vec::with_capacity(doc.vertices.len());
        for v in &doc.vertices {
            let stab = match v.stab.parse::<StabilizerType>() {
                Ok(s) => s,
                Err(_) => {
                    errs.push(Violation::UnknownStabilizer { cell: v.id.clone(), tag: v.stab.clone() });
                    StabilizerType::Trivial
                }
            };
            bad_vertex.push(v.stab.parse::<StabilizerType>().is_err());
            vertex_index.entry(v.id.as_str()).or_insert(vertices.len());
            vertices.push(Vertex { id: v.id.clone(), stab });
        }

        let mut edges = Vec::with_capacity(doc.edges.len());
        let mut edge_index = HashMap::new();
        for e in &doc.edges {
            let stab = match e.stab.parse::<StabilizerType>() {
                Ok(s) if s.is_cyclic() => Some(s),
                Ok(s) => {
                    errs.push(Violation::EdgeStabilizerNotCyclic { edge: e.id.clone(), stab: s });
                    None
                }
                Err(_) => {
                    errs.push(Violation::UnknownStabilizer { cell: e.id.clone(), tag: e.stab.clone() });
                    None
                }
            };
            let mut resolve = |side: &'static str, p: &EndpointDoc| -> Option<Endpoint> {
                let vi = match vertex_index.get(p.v.as_str()) {
                    Some(&i) => i,
                    None => {
                        errs.push(Violation::UnknownVertex { edge: e.id.clone(), vertex: p.v.clone() });
                        return None;
                    }
                };
                let variant = match p.emb.parse::<Variant>() {
                    Ok(v) => v,
                    Err(_) => {
                        errs.push(Violation::UnknownVariant { edge: e.id.clone(), tag: p.emb.clone() });
                        return None;
                    }
                };
                let sub = stab?;
                if bad_vertex[vi] {
                    return None;
                }
                let over = vertices[vi].stab;
                match EmbeddingLabel::new(sub, over, variant) {
                    Ok(emb) => Some(Endpoint { vertex: vi, emb }),
                    Err(_) => {
                        errs.push(Violation::IllegalEmbedding {
                            edge: e.id.clone(),
                            side,
                            sub,
                            over,
                            variant,
                        });
                        None
                    }
                }
            };
            let origin = resolve("origin", &e.origin);
            let end = resolve("end", &e.end);
            if let (Some(stab), Some(origin), Some(end)) = (stab, origin, end) {
                edge_index.entry(e.id.as_str()).or_insert(edges.len());
                edges.push(Edge { id: e.id.clone(), stab, origin, end });
            }
        }

        let mut faces = Vec::with_capacity(doc.faces.len());
        for f in &doc.faces {
            if let Some(tag) = &f.stab {
                if tag != StabilizerType::Trivial.tag() {
                    errs.push(Violation::FaceNotTrivial { face: f.id.clone(), tag: tag.clone() });
                }
            }
            let mut boundary = Vec::with_capacity(f.boundary.len());
            let mut ok = true;
            for t in &f.boundary {
                match edge_index.get(t.e.as_str()) {
                    Some(&i) => boundary.push((i, t.c)),
                    None => {
                        ok = false;
                        // a known but invalid edge has already been reported
                        if !doc.edges.iter().any(|e| e.id == t.e) {
                            errs.push(Violation::UnknownEdge { face: f.id.clone(), edge: t.e.clone() });
                        }
                    }
                }
            }
            if ok {
                faces.push(Face { id: f.id.clone(), boundary });
            }
        }

        if errs.is_empty() {
            let c = QuotientComplex { vertices, edges, faces };
            for f in &c.faces {
                let mut col = vec![0i64; c.vertices.len()];
                for &(e, k) in &f.boundary {
                    let edge = &c.edges[e];
                    col[edge.end.vertex] += k;
                    col[edge.origin.vertex] -= k;
                }
                if col.iter().any(|&x| x != 0) {
                    errs.push(Violation::BoundaryNotClosed { face: f.id.clone() });
                }
            }
            if errs.is_empty() {
                return Ok(c);
            }
        }
        Err(ComplexError::Validation(errs))
    }

    pub fn to_document(&self) -> ComplexDocument {
        let endpoint = |p: &Endpoint| EndpointDoc {
            v: self.vertices[p.vertex].id.clone(),
            emb: p.emb.variant().tag().to_string(),
        };
        ComplexDocument {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), stab: v.stab.tag().to_string() })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    stab: e.stab.tag().to_string(),
                    origin: endpoint(&e.origin),
                    end: endpoint(&e.end),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceDoc {
                    id: f.id.clone(),
                    stab: None,
                    boundary: f
                        .boundary
                        .iter()
                        .map(|&(e, c)| BoundaryTermDoc { e: self.edges[e].id.clone(), c })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn builder() -> ComplexBuilder {
        ComplexBuilder::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Number of connected components of the orbit space.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.vertices.len();
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.origin.vertex), find(&mut parent, e.end.vertex));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// Convenience constructor; `build` runs full validation.
#[derive(Debug, Default, Clone)]
pub struct ComplexBuilder {
    doc: ComplexDocument,
}

impl ComplexBuilder {
    pub fn vertex(mut self, id: &str, stab: StabilizerType) -> Self {
        self.doc.vertices.push(VertexDoc { id: id.into(), stab: stab.tag().into() });
        self
    }

    pub fn edge(
        mut self,
        id: &str,
        stab: StabilizerType,
        origin: (&str, Variant),
        end: (&str, Variant),
    ) -> Self {
        self.doc.edges.push(EdgeDoc {
            id: id.into(),
            stab: stab.tag().into(),
            origin: EndpointDoc { v: origin.0.into(), emb: origin.1.tag().into() },
            end: EndpointDoc { v: end.0.into(), emb: end.1.tag().into() },
        });
        self
    }

    /// Edge with the trivial stabilizer.
    pub fn trivial_edge(self, id: &str, origin: &str, end: &str) -> Self {
        self.edge(
            id,
            StabilizerType::Trivial,
            (origin, Variant::Canonical),
            (end, Variant::Canonical),
        )
    }

    pub fn face(mut self, id: &str, boundary: &[(&str, i64)]) -> Self {
        self.doc.faces.push(FaceDoc {
            id: id.into(),
            stab: None,
            boundary: boundary.iter().map(|&(e, c)| BoundaryTermDoc { e: e.into(), c }).collect(),
        });
        self
    }

    pub fn document(&self) -> &ComplexDocument {
        &self.doc
    }

    pub fn build(self) -> Result<QuotientComplex, ComplexError> {
        QuotientComplex::from_document(&self.doc)
    }
}

/// Cellular chain complex of the orbit space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitChainComplex {
    pub d1: IntegerMatrix,
    pub d2: IntegerMatrix,
}

pub fn orbit_chain_complex(c: &QuotientComplex) -> OrbitChainComplex {
    let mut d1 = IntegerMatrix::zeros(c.vertices.len(), c.edges.len());
    for (j, e) in c.edges.iter().enumerate() {
        d1[(e.end.vertex, j)] += 1;
        d1[(e.origin.vertex, j)] -= 1;
    }
    let mut d2 = IntegerMatrix::zeros(c.edges.len(), c.faces.len());
    for (j, f) in c.faces.iter().enumerate() {
        for &(e, k) in &f.boundary {
            d2[(e, j)] += k;
        }
    }
    assert!((&d1 * &d2).is_zero(), "orbit boundary maps do not compose to zero");
    OrbitChainComplex { d1, d2 }
}

/// `(H0, H1, H2)` of the orbit space with integer coefficients.
pub fn quotient_homology(c: &QuotientComplex) -> [AbelianGroup; 3] {
    let OrbitChainComplex { d1, d2 } = orbit_chain_complex(c);
    let d0 = IntegerMatrix::zeros(0, d1.rows());
    let d3 = IntegerMatrix::zeros(d2.cols(), 0);
    [
        chain_homology(&d0, &d1).expect("valid complex"),
        chain_homology(&d1, &d2).expect("valid complex"),
        chain_homology(&d2, &d3).expect("valid complex"),
    ]
}

/// `-1` when every stabilizer is trivial, `0` when only vertices carry
/// nontrivial stabilizers, `1` when some edge does.
pub fn singular_dimension(c: &QuotientComplex) -> i8 {
    if c.edges.iter().any(|e| e.stab != StabilizerType::Trivial) {
        1
    } else if c.vertices.iter().any(|v| v.stab != StabilizerType::Trivial) {
        0
    } else {
        -1
    }
}
