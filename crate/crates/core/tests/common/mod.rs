//! Shared fixtures for the integration tests: the bundled complexes and a
//! random generator of complexes whose reduced torsion components all lie
//! in the known list.
#![allow(dead_code)]

use std::path::PathBuf;

use bredon_core::exactchar::torsion_block;
use bredon_core::qcomplex::{parse, ComplexBuilder};
use bredon_core::{EmbeddingLabel, IntegerMatrix, Prime, QuotientComplex, StabilizerType, Variant};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use StabilizerType::*;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("fixtures")
}

pub fn load(name: &str) -> QuotientComplex {
    let path = fixtures_dir().join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every bundled fixture, by file stem, in name order.
pub fn all_fixtures() -> Vec<(String, QuotientComplex)> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names.into_iter().map(|n| {
        let c = load(&n);
        (n, c)
    }).collect()
}

/// Bundled fixtures whose torsion parts reduce to known component types.
pub const CLASSIFIABLE: &[&str] = &[
    "point",
    "circle",
    "sphere",
    "klein_bottle",
    "rp2",
    "circle2",
    "circle3",
    "theta",
    "theta_whiskers",
    "m2_like",
    "edge2",
    "edge2_whisker",
    "edge3",
    "m7_like",
];

/// Fixtures with no nontrivial edge stabilizers.
pub const ZERO_DIMENSIONAL: &[&str] = &["fc_s3", "fc_a4_pair", "fc_mixed", "fc_loop", "fc_sphere", "point", "circle"];

/// Fixtures that exercise terminal-edge cutting.
pub const WHISKERED: &[&str] = &["edge2_whisker", "theta_whiskers"];

fn swaps(emb: &EmbeddingLabel) -> bool {
    torsion_block(emb, Prime::Three).unwrap() != IntegerMatrix::identity(2)
}

fn flip3(v: Variant) -> Variant {
    match v {
        Variant::Id => Variant::Inv,
        Variant::Inv => Variant::Id,
        Variant::C123 => Variant::C132,
        Variant::C132 => Variant::C123,
        other => other,
    }
}

type Cycle = Vec<(String, i64)>;

struct Planned {
    stab: StabilizerType,
    origin: (String, StabilizerType, Variant),
    end: (String, StabilizerType, Variant),
}

struct Gen {
    rng: StdRng,
    b: ComplexBuilder,
    counter: usize,
    cycles: Vec<Cycle>,
    two: Vec<(String, StabilizerType)>,
    three: Vec<(String, StabilizerType)>,
    anchors: Vec<String>,
}

impl Gen {
    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn vertex(&mut self, stab: StabilizerType) -> String {
        let id = self.fresh("v");
        self.b = std::mem::take(&mut self.b).vertex(&id, stab);
        if stab.has_torsion(Prime::Two) {
            self.two.push((id.clone(), stab));
        }
        if stab.has_torsion(Prime::Three) {
            self.three.push((id.clone(), stab));
        }
        id
    }

    /// Adds the edge, randomly reversed; returns its id and the sign with
    /// which it runs from the planned origin to the planned end.
    fn commit(&mut self, p: Planned) -> (String, i64) {
        let id = self.fresh("e");
        let (mut o, mut e, mut sign) = (p.origin, p.end, 1);
        if self.rng.gen_bool(0.5) {
            std::mem::swap(&mut o, &mut e);
            sign = -1;
        }
        self.b = std::mem::take(&mut self.b).edge(&id, p.stab, (&o.0, o.2), (&e.0, e.2));
        (id, sign)
    }

    fn label(&mut self, sub: StabilizerType, over: StabilizerType) -> Variant {
        let legal = bredon_core::exactchar::legal_variants(sub, over);
        *legal.choose(&mut self.rng).unwrap()
    }

    /// A chain of `C_ell` edges from `from` to `to` through `mids` fresh
    /// `C_ell` vertices; the end labels are given.
    fn plan_path(
        &mut self,
        ell: Prime,
        from: (String, StabilizerType, Variant),
        to: (String, StabilizerType, Variant),
        mids: usize,
    ) -> Vec<Planned> {
        let c = ell.cyclic();
        let mut out = Vec::new();
        let mut prev = from;
        for _ in 0..mids {
            let m = self.vertex(c);
            let (l1, l2) = (self.label(c, c), self.label(c, c));
            out.push(Planned { stab: c, origin: prev, end: (m.clone(), c, l1) });
            prev = (m, c, l2);
        }
        out.push(Planned { stab: c, origin: prev, end: to });
        out
    }

    fn commit_all(&mut self, plan: Vec<Planned>) -> Cycle {
        plan.into_iter().map(|p| self.commit(p)).collect()
    }

    /// Commits a closed chain of C3 edges, repairing the labels so that the
    /// reduced loop is untwisted.
    fn commit_cycle3(&mut self, mut plan: Vec<Planned>) {
        let twist = plan
            .iter()
            .flat_map(|p| [(&p.origin), (&p.end)])
            .filter(|(_, over, v)| swaps(&EmbeddingLabel::new(C3, *over, *v).unwrap()))
            .count();
        if twist % 2 == 1 {
            let last = plan.last_mut().unwrap();
            last.end.2 = flip3(last.end.2);
        }
        let cycle = self.commit_all(plan);
        self.cycles.push(cycle);
    }

    fn circle2(&mut self) {
        let k = self.rng.gen_range(1..=3);
        let start = self.vertex(C2);
        self.anchors.push(start.clone());
        let plan = self.plan_path(Prime::Two, (start.clone(), C2, Variant::Id), (start, C2, Variant::Id), k - 1);
        let cycle = self.commit_all(plan);
        self.cycles.push(cycle);
    }

    /// A 3-torsion circle, through `anchor` (an A4 vertex) if given.
    fn circle3(&mut self, anchor: Option<String>) {
        let (start, stab) = match anchor {
            Some(a) => (a, A4),
            None => {
                let v = self.vertex(C3);
                self.anchors.push(v.clone());
                (v, C3)
            }
        };
        let mids = self.rng.gen_range(0..=2);
        let (l1, l2) = (self.label(C3, stab), self.label(C3, stab));
        let plan = self.plan_path(Prime::Three, (start.clone(), stab, l1), (start, stab, l2), mids);
        self.commit_cycle3(plan);
    }

    fn edge2(&mut self) {
        let (v, w) = (self.vertex(A4), self.vertex(A4));
        self.anchors.push(v.clone());
        let mids = self.rng.gen_range(0..=2);
        let plan = self.plan_path(Prime::Two, (v.clone(), A4, Variant::Canonical), (w.clone(), A4, Variant::Canonical), mids);
        self.commit_all(plan);
        if self.rng.gen_bool(0.5) {
            self.circle3(Some(v));
            self.circle3(Some(w));
        } else {
            let (a, b, c, d) = (self.label(C3, A4), self.label(C3, A4), self.label(C3, A4), self.label(C3, A4));
            let (m1, m2) = (self.rng.gen_range(0..=1), self.rng.gen_range(0..=1));
            let mut plan = self.plan_path(Prime::Three, (v.clone(), A4, a), (w.clone(), A4, b), m1);
            plan.extend(self.plan_path(Prime::Three, (w, A4, c), (v, A4, d), m2));
            self.commit_cycle3(plan);
        }
    }

    fn involutions(&mut self) -> Vec<Variant> {
        let mut v = vec![Variant::A, Variant::B, Variant::Ab];
        v.shuffle(&mut self.rng);
        v
    }

    fn theta(&mut self) {
        let (x, y) = (self.vertex(V4), self.vertex(V4));
        self.anchors.push(x.clone());
        let (px, py) = (self.involutions(), self.involutions());
        let mut paths = Vec::new();
        for i in 0..3 {
            let mids = self.rng.gen_range(0..=1);
            let plan = self.plan_path(Prime::Two, (x.clone(), V4, px[i]), (y.clone(), V4, py[i]), mids);
            paths.push(self.commit_all(plan));
        }
        for i in 0..2 {
            let mut cycle = paths[i].clone();
            cycle.extend(paths[i + 1].iter().map(|(e, s)| (e.clone(), -s)));
            self.cycles.push(cycle);
        }
    }

    fn rho(&mut self) {
        let (x, y) = (self.vertex(V4), self.vertex(A4));
        self.anchors.push(x.clone());
        let p = self.involutions();
        let mids = self.rng.gen_range(0..=2);
        let plan = self.plan_path(Prime::Two, (x.clone(), V4, p[0]), (x.clone(), V4, p[1]), mids);
        let cycle = self.commit_all(plan);
        self.cycles.push(cycle);
        let mids = self.rng.gen_range(0..=1);
        let plan = self.plan_path(Prime::Two, (x, V4, p[2]), (y.clone(), A4, Variant::Canonical), mids);
        self.commit_all(plan);
        self.circle3(Some(y));
    }

    fn edge3(&mut self) {
        let (s, t) = (self.vertex(S3), self.vertex(S3));
        self.anchors.push(s.clone());
        let mids = self.rng.gen_range(0..=2);
        let c = Variant::Canonical;
        let plan = self.plan_path(Prime::Three, (s.clone(), S3, c), (t.clone(), S3, c), mids);
        self.commit_all(plan);
        if self.rng.gen_bool(0.5) {
            let (m1, m2) = (self.rng.gen_range(0..=1), self.rng.gen_range(0..=1));
            let mut plan = self.plan_path(Prime::Two, (s.clone(), S3, c), (t.clone(), S3, c), m1);
            plan.extend(self.plan_path(Prime::Two, (t, S3, c), (s, S3, c), m2));
            let cycle = self.commit_all(plan);
            self.cycles.push(cycle);
        } else {
            for v in [s, t] {
                let mids = self.rng.gen_range(0..=1);
                let plan = self.plan_path(Prime::Two, (v.clone(), S3, c), (v, S3, c), mids);
                let cycle = self.commit_all(plan);
                self.cycles.push(cycle);
            }
        }
    }

    /// A dangling chain of `C_ell` vertices hanging off an existing vertex.
    fn whisker(&mut self, ell: Prime) {
        let pool = match ell {
            Prime::Two => self.two.clone(),
            Prime::Three => self.three.clone(),
        };
        let Some((v, stab)) = pool.choose(&mut self.rng).cloned() else { return };
        let c = ell.cyclic();
        let tip = self.vertex(c);
        let (lv, lt) = (self.label(c, stab), self.label(c, c));
        let mids = self.rng.gen_range(0..=1);
        let plan = self.plan_path(ell, (v, stab, lv), (tip, c, lt), mids);
        self.commit_all(plan);
    }
}

/// A connected complex built from randomly chosen known component types,
/// randomly subdivided, whiskered, oriented and partly filled with faces.
pub fn random_classifiable(seed: u64) -> QuotientComplex {
    let mut g = Gen {
        rng: StdRng::seed_from_u64(seed),
        b: QuotientComplex::builder(),
        counter: 0,
        cycles: Vec::new(),
        two: Vec::new(),
        three: Vec::new(),
        anchors: Vec::new(),
    };
    let hub = g.vertex(Trivial);
    for _ in 0..g.rng.gen_range(0..=3) {
        match g.rng.gen_range(0..6) {
            0 => g.circle2(),
            1 => g.circle3(None),
            2 => g.edge2(),
            3 => g.theta(),
            4 => g.rho(),
            _ => g.edge3(),
        }
    }
    for _ in 0..g.rng.gen_range(0..=2) {
        let ell = if g.rng.gen_bool(0.5) { Prime::Two } else { Prime::Three };
        g.whisker(ell);
    }
    for a in g.anchors.clone() {
        let id = g.fresh("t");
        g.b = std::mem::take(&mut g.b).trivial_edge(&id, &hub, &a);
    }
    for _ in 0..g.rng.gen_range(0..=2) {
        let id = g.fresh("t");
        g.b = std::mem::take(&mut g.b).trivial_edge(&id, &hub, &hub);
        g.cycles.push(vec![(id, 1)]);
    }
    for cycle in g.cycles.clone() {
        let boundary: Vec<(&str, i64)> = cycle.iter().map(|(e, s)| (e.as_str(), *s)).collect();
        let roll: f64 = g.rng.gen();
        let copies: &[i64] = if roll < 0.4 {
            &[]
        } else if roll < 0.75 {
            &[1]
        } else if roll < 0.88 {
            &[2]
        } else {
            &[1, -1]
        };
        for &k in copies {
            let id = g.fresh("f");
            let scaled: Vec<(&str, i64)> = boundary.iter().map(|&(e, s)| (e, k * s)).collect();
            g.b = std::mem::take(&mut g.b).face(&id, &scaled);
        }
    }
    g.b.build().unwrap_or_else(|e| panic!("seed {seed}: {e}"))
}
