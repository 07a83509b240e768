//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p bredon-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bredon_core::dataset::{bundled, evaluate_row};
use bredon_core::bredon::{bredon_homology, h_fin_via_fc};
use bredon_core::exactchar::{restrict, split_matrix, EisensteinInt as E};
use bredon_core::formulas::{corollary_k, k_from_bredon, split_from_complex, BianchiSummary};
use bredon_core::intmat::{elementary_divisors, snf};
use bredon_core::qcomplex::singular_dimension;
use bredon_core::torsion::{
    classify, extract, reduce, satisfies_condition_b, torsion_differential, torsion_homology, ComponentType, TorsionEdge, TorsionGraph,
    TorsionVertex,
};
use bredon_core::qcomplex::Endpoint;
use bredon_core::{AbelianGroup, EmbeddingLabel, IntegerMatrix, Prime, QuotientComplex, StabilizerType, Variant};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use StabilizerType::*;

const RANDOM_COMPLEXES: u64 = 300;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail }
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        Outcome { ok: false, detail: format!("{detail}; {} failure(s): {}", failures.len(), shown.join(" | ")) }
    }
}

fn ag(s: &str) -> AbelianGroup {
    s.parse().unwrap()
}

fn divisors(m: &IntegerMatrix) -> Vec<i64> {
    elementary_divisors(m).iter().map(|d| i64::try_from(d).unwrap()).collect()
}

fn inventory_table() -> Outcome {
    let rows = bundled();
    let mut failures = Vec::new();
    for row in &rows {
        match evaluate_row(row) {
            Ok(r) if r.matches() => {}
            Ok(r) => failures.push(format!(
                "{}: got {} / {}, expected {} / {}",
                r.label, r.h0, r.h1, r.expected_h0, r.expected_h1
            )),
            Err(e) => failures.push(format!("{}: {e}", row.label)),
        }
    }
    if rows.len() != 25 {
        failures.push(format!("dataset has {} rows", rows.len()));
    }
    let matched = rows.len() - failures.len().min(rows.len());
    outcome(&failures, format!("{matched}/{} rows match", rows.len()))
}

struct SplittingTable {
    emb: (StabilizerType, StabilizerType, Variant),
    restricted: Vec<Vec<E>>,
    products: Vec<Vec<i64>>,
}

fn int_row(xs: &[i64]) -> Vec<E> {
    xs.iter().map(|&x| E::int(x)).collect()
}

fn splitting_tables() -> Vec<SplittingTable> {
    let jm1 = E::new(-1, 1); // j - 1
    let j2m1 = E::new(-2, -1); // j^2 - 1
    let zero = E::ZERO;
    let one = E::ONE;
    let v4 = |v: Variant, zero_row: usize| {
        let mut restricted = vec![int_row(&[1, 1])];
        let mut products = vec![vec![1, 0]];
        for r in 1..4 {
            if r == zero_row {
                restricted.push(int_row(&[0, 0]));
                products.push(vec![0, 0]);
            } else {
                restricted.push(int_row(&[0, -2]));
                products.push(vec![0, 1]);
            }
        }
        SplittingTable { emb: (C2, V4, v), restricted, products }
    };
    vec![
        SplittingTable {
            emb: (C2, S3, Variant::Canonical),
            restricted: vec![int_row(&[1, 1]), int_row(&[0, -2]), int_row(&[0, 0])],
            products: vec![vec![1, 0], vec![0, 1], vec![0, 0]],
        },
        SplittingTable {
            emb: (C3, S3, Variant::Canonical),
            restricted: vec![int_row(&[1, 1, 1]), int_row(&[0, 0, 0]), int_row(&[0, -3, -3])],
            products: vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 1, 1]],
        },
        v4(Variant::A, 3),
        v4(Variant::B, 2),
        v4(Variant::Ab, 1),
        SplittingTable {
            emb: (C2, A4, Variant::Canonical),
            restricted: vec![int_row(&[1, 1]), int_row(&[0, -4]), int_row(&[0, 0]), int_row(&[0, 0])],
            products: vec![vec![1, 0], vec![0, 2], vec![0, 0], vec![0, 0]],
        },
        SplittingTable {
            emb: (C3, A4, Variant::C123),
            restricted: vec![vec![one, one, one], vec![zero, zero, zero], vec![zero, jm1, j2m1], vec![zero, j2m1, jm1]],
            products: vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        },
        SplittingTable {
            emb: (C3, A4, Variant::C132),
            restricted: vec![vec![one, one, one], vec![zero, zero, zero], vec![zero, j2m1, jm1], vec![zero, jm1, j2m1]],
            products: vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
        },
    ]
}

fn splitting() -> Outcome {
    let mut failures = Vec::new();
    let tables = splitting_tables();
    let mut cells = 0;
    for t in &tables {
        let (sub, over, v) = t.emb;
        let emb = EmbeddingLabel::new(sub, over, v).unwrap();
        let basis = over.basis_transform().class_functions();
        for (i, phi) in basis.iter().enumerate() {
            let got = restrict(phi, &emb).unwrap();
            cells += got.len();
            if got != t.restricted[i] {
                failures.push(format!("{emb} restriction row {i}: {got:?}"));
            }
        }
        match split_matrix(&emb) {
            Ok(s) => {
                let got = s.matrix.to_i64_rows().unwrap();
                cells += got.iter().map(Vec::len).sum::<usize>();
                if got != t.products {
                    failures.push(format!("{emb} scalar products {got:?}"));
                }
            }
            Err(e) => failures.push(format!("{emb}: {e}")),
        }
    }
    // every splittable inclusion, tabulated or not, must be block diagonal
    let mut checked = 0;
    for emb in EmbeddingLabel::all() {
        if emb.sub() != Trivial {
            checked += 1;
            if let Err(e) = split_matrix(&emb) {
                failures.push(format!("{emb}: {e}"));
            }
        }
    }
    outcome(
        &failures,
        format!("{} reference tables, {cells} cells; {checked} inclusions block diagonal", tables.len()),
    )
}

fn ep(vertex: usize, sub: StabilizerType, over: StabilizerType, v: Variant) -> Endpoint {
    Endpoint { vertex, emb: EmbeddingLabel::new(sub, over, v).unwrap() }
}

fn graph(ell: Prime, stabs: &[StabilizerType], edges: &[((usize, Variant), (usize, Variant))]) -> TorsionGraph {
    let c = ell.cyclic();
    TorsionGraph {
        ell,
        vertices: stabs.iter().enumerate().map(|(i, &s)| TorsionVertex { id: format!("v{i}"), stab: s }).collect(),
        edges: edges
            .iter()
            .enumerate()
            .map(|(i, &((a, va), (b, vb)))| TorsionEdge {
                id: format!("e{i}"),
                origin: ep(a, c, stabs[a], va),
                end: ep(b, c, stabs[b], vb),
            })
            .collect(),
    }
}

/// Same matrix up to permuting rows and columns.
fn same_up_to_permutation(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let cols = b.first().map_or(0, Vec::len);
    if a.len() != b.len() || a.iter().any(|r| r.len() != cols) {
        return false;
    }
    let mut sorted_b = b.to_vec();
    sorted_b.sort();
    permutations(cols).into_iter().any(|p| {
        let mut rows: Vec<Vec<i64>> = a.iter().map(|r| p.iter().map(|&j| r[j]).collect()).collect();
        rows.sort();
        rows == sorted_b
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn two_torsion_components() -> Outcome {
    use Variant::*;
    let mut failures = Vec::new();
    let theta = graph(Prime::Two, &[V4, V4], &[((0, A), (1, A)), ((0, B), (1, B)), ((0, Ab), (1, Ab))]);
    let rho = graph(Prime::Two, &[V4, A4], &[((0, A), (0, B)), ((0, Ab), (1, Canonical))]);
    let edge = graph(Prime::Two, &[A4, A4], &[((0, Canonical), (1, Canonical))]);
    let circle = graph(Prime::Two, &[C2], &[((0, Id), (0, Id))]);

    let reference_theta = [[-1, -1, 0], [-1, 0, -1], [0, -1, -1], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
    let reference_theta: Vec<Vec<i64>> = reference_theta.iter().map(|r| r.to_vec()).collect();
    let theta_d = torsion_differential(&theta);
    if !same_up_to_permutation(&theta_d.to_i64_rows().unwrap(), &reference_theta) {
        failures.push(format!("theta matrix {theta_d}"));
    }
    for (name, g, want) in [("theta", &theta, vec![1, 1, 2]), ("rho", &rho, vec![1, 2])] {
        let got = divisors(&torsion_differential(g));
        if got != want {
            failures.push(format!("{name} divisors {got:?}"));
        }
    }
    let expect = [
        ("theta", &theta, ComponentType::Theta, ("Z^3 (+) Z/2", "0")),
        ("rho", &rho, ComponentType::Rho, ("Z^2 (+) Z/2", "0")),
        ("edge", &edge, ComponentType::Edge2, ("Z (+) Z/2", "0")),
        ("circle", &circle, ComponentType::Circle, ("Z", "Z")),
    ];
    for (name, g, kind, (h0, h1)) in expect {
        let got = torsion_homology(g);
        if got != (ag(h0), ag(h1)) {
            failures.push(format!("{name}: ({}, {})", got.0, got.1));
        }
        if classify(g) != vec![(kind, 1)] {
            failures.push(format!("{name} classified as {:?}", classify(g)));
        }
    }
    let d_edge = torsion_differential(&edge).to_i64_rows().unwrap();
    if d_edge != vec![vec![-2], vec![2]] {
        failures.push(format!("edge column {d_edge:?}"));
    }
    if !torsion_differential(&circle).is_zero() {
        failures.push("circle differential nonzero".into());
    }
    outcome(&failures, "theta (1,1,2), rho (1,2), edge (Z (+) Z/2, 0), circle (Z, Z)".into())
}

fn three_torsion_components() -> Outcome {
    use Variant::*;
    let mut failures = Vec::new();
    let circles = [
        graph(Prime::Three, &[C3], &[((0, Id), (0, Id))]),
        graph(Prime::Three, &[C3], &[((0, Inv), (0, Inv))]),
        graph(Prime::Three, &[A4], &[((0, C123), (0, C123))]),
    ];
    for g in &circles {
        if torsion_homology(g) != (ag("Z^2"), ag("Z^2")) || classify(g) != vec![(ComponentType::Circle, 1)] {
            failures.push(format!("circle {:?}", torsion_homology(g)));
        }
    }
    let edge = graph(Prime::Three, &[S3, S3], &[((0, Canonical), (1, Canonical))]);
    if torsion_homology(&edge) != (ag("Z"), ag("Z")) || classify(&edge) != vec![(ComponentType::Edge3, 1)] {
        failures.push(format!("edge {:?}", torsion_homology(&edge)));
    }
    outcome(&failures, "circle (Z^2, Z^2), edge (Z, Z)".into())
}

fn classifiable_pool() -> Vec<(String, QuotientComplex)> {
    let mut pool: Vec<(String, QuotientComplex)> =
        common::CLASSIFIABLE.iter().map(|&n| (n.to_string(), common::load(n))).collect();
    pool.extend((0..RANDOM_COMPLEXES).map(|s| (format!("random#{s}"), common::random_classifiable(s))));
    pool
}

fn direct_vs_split(pool: &[(String, QuotientComplex)]) -> Outcome {
    let mut failures = Vec::new();
    let mut nontrivial = 0;
    for (name, c) in pool {
        let direct = bredon_homology(c);
        let split = split_from_complex(c);
        match (direct, split) {
            (Ok(d), Ok(s)) if d == s => {
                if singular_dimension(c) == 1 {
                    nontrivial += 1;
                }
            }
            (d, s) => failures.push(format!("{name}: direct {d:?} vs split {s:?}")),
        }
    }
    outcome(
        &failures,
        format!("{} complexes ({} bundled, {nontrivial} with 1-dimensional singular part)", pool.len(), common::CLASSIFIABLE.len()),
    )
}

fn reduction(pool: &[(String, QuotientComplex)]) -> Outcome {
    let mut failures = Vec::new();
    let mut cut = 0;
    let mut cases = 0;
    let bundled = common::all_fixtures();
    for (name, c) in bundled.iter().chain(pool.iter().skip(common::CLASSIFIABLE.len())) {
        for ell in [Prime::Two, Prime::Three] {
            let g = extract(c, ell);
            let r = reduce(&g);
            cases += 1;
            if torsion_homology(&g) != torsion_homology(&r) {
                failures.push(format!("{name} ell={ell}"));
            }
            if reduce(&r) != r {
                failures.push(format!("{name} ell={ell}: not idempotent"));
            }
            if g.components().len() != r.components().len() {
                failures.push(format!("{name} ell={ell}: component count changed"));
            }
        }
    }
    for name in common::WHISKERED {
        let g = extract(&common::load(name), Prime::Two);
        let r = reduce(&g);
        // leaves can only disappear by cutting
        let leaves = |g: &TorsionGraph| {
            (0..g.vertices.len())
                .filter(|&v| g.degree(v) == 1 && satisfies_condition_b(g.vertices[v].stab, g.ell))
                .count()
        };
        if leaves(&g) == 0 || leaves(&r) != 0 {
            failures.push(format!("{name}: expected terminal edges to be cut"));
        } else {
            cut += 1;
        }
    }
    outcome(&failures, format!("{cases} torsion graphs; {cut} whiskered fixtures cut"))
}

fn fc_shortcut() -> Outcome {
    let mut failures = Vec::new();
    for name in common::ZERO_DIMENSIONAL {
        let c = common::load(name);
        match (h_fin_via_fc(&c), bredon_homology(&c)) {
            (Ok(fc), Ok(d)) if fc.as_array() == d => {}
            (fc, d) => failures.push(format!("{name}: {fc:?} vs {d:?}")),
        }
    }
    outcome(&failures, format!("{} zero-dimensional fixtures", common::ZERO_DIMENSIONAL.len()))
}

fn random_matrix(rng: &mut StdRng) -> IntegerMatrix {
    let (r, c) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    IntegerMatrix::from_rows_with_cols(&rows, c)
}

fn snf_contracts() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    for k in 0..1000 {
        let a = random_matrix(&mut rng);
        let s = snf(&a);
        if &(&s.u * &s.d) * &s.v != a {
            failures.push(format!("#{k}: U*D*V != A"));
        }
        if !s.u.is_unimodular() || !s.v.is_unimodular() {
            failures.push(format!("#{k}: certificate not unimodular"));
        }
        let (r, c) = a.shape();
        let mut diag: Vec<BigInt> = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let x = &s.d[(i, j)];
                if i != j && !x.is_zero() {
                    failures.push(format!("#{k}: off-diagonal entry"));
                } else if i == j {
                    diag.push(x.clone());
                }
            }
        }
        if diag.iter().any(|x| x.is_negative()) {
            failures.push(format!("#{k}: negative divisor"));
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            if !ok {
                failures.push(format!("#{k}: divisibility {} / {}", w[0], w[1]));
            }
        }
    }
    outcome(&failures, "1000 random matrices up to 12x12, entries in [-9, 9]".into())
}

fn corollary(pool: &[(String, QuotientComplex)]) -> Outcome {
    let mut failures = Vec::new();
    let mut rows = 0;
    for row in bundled() {
        match evaluate_row(&row) {
            Ok(r) if r.k_consistent() => rows += 1,
            Ok(r) => failures.push(format!("{}: {:?} vs {:?}", r.label, r.k, r.k_corollary)),
            Err(e) => failures.push(format!("{}: {e}", row.label)),
        }
    }
    let mut complexes = 0;
    for (name, c) in pool {
        let chained = split_from_complex(c).and_then(|h| k_from_bredon(&h));
        let closed = BianchiSummary::from_complex(c).and_then(|s| corollary_k(&s));
        match (chained, closed) {
            (Ok(a), Ok(b)) if a == b => complexes += 1,
            (a, b) => failures.push(format!("{name}: {a:?} vs {b:?}")),
        }
    }
    outcome(&failures, format!("{rows} table rows, {complexes} complexes"))
}

fn report(n: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            o.ok = false;
            o.detail = format!("{}; exceeded {:?}", o.detail, limit);
        }
    }
    let status = if o.ok { "PASS" } else { "FAIL" };
    println!("{status} [{n}] {name}: {} ({:.1} ms)", o.detail, elapsed.as_secs_f64() * 1e3);
    o.ok
}

fn main() -> ExitCode {
    let pool_start = Instant::now();
    let pool = classifiable_pool();
    let pool_time = pool_start.elapsed();
    let second = Some(Duration::from_secs(1));
    let ten = Some(Duration::from_secs(10));
    let results = [
        report(1, "Bianchi inventory table reproduction", second, inventory_table),
        report(2, "representation ring splitting tables", second, splitting),
        report(3, "2-torsion component matrices", None, two_torsion_components),
        report(4, "3-torsion component homology", None, three_torsion_components),
        report(5, "direct Bredon homology equals the split formula", ten.map(|t| t - pool_time), || direct_vs_split(&pool)),
        report(6, "reduction invariance", None, || reduction(&pool)),
        report(7, "finite-order conjugacy class shortcut", None, fc_shortcut),
        report(8, "Smith normal form certificates", ten, snf_contracts),
        report(9, "K-homology closed formula consistency", None, || corollary(&pool)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
