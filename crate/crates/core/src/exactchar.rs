//! Exact character theory for the six finite groups on Klein's list:
//! character tables over the Eisenstein integers, restriction along
//! embeddings, Frobenius-reciprocity induction matrices and the
//! block-splitting transformed bases.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::IntegerMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("illegal embedding {sub} -> {over} ({variant})")]
    IllegalEmbedding { sub: StabilizerType, over: StabilizerType, variant: Variant },
    #[error("scalar product is not a rational integer: {0}")]
    NonIntegralProduct(String),
    #[error("class function has {got} values but {group} has {expected} classes")]
    ClassCountMismatch { group: StabilizerType, expected: usize, got: usize },
    #[error("cross-block entry ({row}, {col}) of the split matrix for {emb} is nonzero")]
    SplitViolation { emb: EmbeddingLabel, row: usize, col: usize },
    #[error("no block splitting defined for {0}")]
    NotSplittable(EmbeddingLabel),
    #[error("{emb} does not carry {prime}-torsion")]
    PrimeMismatch { emb: EmbeddingLabel, prime: Prime },
}

/// `a + b*j` with `j = exp(2 pi i / 3)`, so that `j^2 = -1 - j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct EisensteinInt {
    pub a: i64,
    pub b: i64,
}

impl EisensteinInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const J: Self = Self::new(0, 1);
    pub const J2: Self = Self::new(-1, -1);

    pub const fn new(a: i64, b: i64) -> Self {
        EisensteinInt { a, b }
    }

    pub const fn int(a: i64) -> Self {
        Self::new(a, 0)
    }

    /// Complex conjugation sends `j` to `j^2 = -1 - j`.
    pub fn conj(self) -> Self {
        Self::new(self.a - self.b, -self.b)
    }

    pub fn is_rational(self) -> bool {
        self.b == 0
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a + bj)(c + dj) = ac + (ad + bc) j + bd j^2
        let bd = self.b * o.b;
        Self::new(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)
    }
}

impl Mul<EisensteinInt> for i64 {
    type Output = EisensteinInt;
    fn mul(self, o: EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(self * o.a, self * o.b)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "j"),
            (0, b) => write!(f, "{b}j"),
            (a, b) if b < 0 => write!(f, "{a}{b}j"),
            (a, b) => write!(f, "{a}+{b}j"),
        }
    }
}

/// Class function: one value per conjugacy class in the group's frozen order.
pub type ClassFunction = Vec<EisensteinInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Two,
    Three,
}

impl Prime {
    pub fn value(self) -> u64 {
        match self {
            Prime::Two => 2,
            Prime::Three => 3,
        }
    }

    pub fn from_value(p: u64) -> Option<Prime> {
        match p {
            2 => Some(Prime::Two),
            3 => Some(Prime::Three),
            _ => None,
        }
    }

    /// The cyclic group of order `ell`.
    pub fn cyclic(self) -> StabilizerType {
        match self {
            Prime::Two => StabilizerType::C2,
            Prime::Three => StabilizerType::C3,
        }
    }

    pub fn block(self) -> Block {
        match self {
            Prime::Two => Block::Two,
            Prime::Three => Block::Three,
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The finite groups of Klein's classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabilizerType {
    #[serde(rename = "1")]
    Trivial,
    C2,
    C3,
    V4,
    S3,
    A4,
}

use EisensteinInt as E;

const ONE: E = E::ONE;
const J: E = E::J;
const J2: E = E::J2;

impl StabilizerType {
    pub const ALL: [StabilizerType; 6] = [
        StabilizerType::Trivial,
        StabilizerType::C2,
        StabilizerType::C3,
        StabilizerType::V4,
        StabilizerType::S3,
        StabilizerType::A4,
    ];

    pub fn order(self) -> u64 {
        match self {
            StabilizerType::Trivial => 1,
            StabilizerType::C2 => 2,
            StabilizerType::C3 => 3,
            StabilizerType::V4 => 4,
            StabilizerType::S3 => 6,
            StabilizerType::A4 => 12,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            StabilizerType::Trivial => "1",
            StabilizerType::C2 => "C2",
            StabilizerType::C3 => "C3",
            StabilizerType::V4 => "V4",
            StabilizerType::S3 => "S3",
            StabilizerType::A4 => "A4",
        }
    }

    pub fn classes(self) -> &'static [&'static str] {
        match self {
            StabilizerType::Trivial => &["1"],
            StabilizerType::C2 => &["1", "g"],
            StabilizerType::C3 => &["1", "h", "h^2"],
            StabilizerType::V4 => &["1", "a", "b", "ab"],
            StabilizerType::S3 => &["1", "(12)", "(123)"],
            StabilizerType::A4 => &["1", "(12)(34)", "(123)", "(132)"],
        }
    }

    pub fn class_sizes(self) -> &'static [u64] {
        match self {
            StabilizerType::Trivial => &[1],
            StabilizerType::C2 => &[1, 1],
            StabilizerType::C3 => &[1, 1, 1],
            StabilizerType::V4 => &[1, 1, 1, 1],
            StabilizerType::S3 => &[1, 3, 2],
            StabilizerType::A4 => &[1, 3, 4, 4],
        }
    }

    pub fn class_count(self) -> usize {
        self.classes().len()
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, StabilizerType::Trivial | StabilizerType::C2 | StabilizerType::C3)
    }

    pub fn has_torsion(self, ell: Prime) -> bool {
        self.order() % ell.value() == 0
    }

    /// Irreducible characters, one row per character, in the frozen class order.
    pub fn character_rows(self) -> Vec<ClassFunction> {
        let i = E::int;
        match self {
            StabilizerType::Trivial => vec![vec![ONE]],
            StabilizerType::C2 => vec![vec![ONE, ONE], vec![ONE, i(-1)]],
            StabilizerType::C3 => {
                vec![vec![ONE, ONE, ONE], vec![ONE, J, J2], vec![ONE, J2, J]]
            }
            StabilizerType::V4 => vec![
                vec![ONE, ONE, ONE, ONE],
                vec![ONE, i(-1), i(-1), ONE],
                vec![ONE, i(-1), ONE, i(-1)],
                vec![ONE, ONE, i(-1), i(-1)],
            ],
            StabilizerType::S3 => vec![
                vec![ONE, ONE, ONE],
                vec![ONE, i(-1), ONE],
                vec![i(2), i(0), i(-1)],
            ],
            StabilizerType::A4 => vec![
                vec![ONE, ONE, ONE, ONE],
                vec![i(3), i(-1), i(0), i(0)],
                vec![ONE, ONE, J, J2],
                vec![ONE, ONE, J2, J],
            ],
        }
    }

    /// Rows of the block-splitting basis as integer combinations of irreducibles.
    pub fn basis_transform(self) -> BasisTransform {
        let rows: Vec<Vec<i64>> = match self {
            StabilizerType::Trivial => vec![vec![1]],
            StabilizerType::C2 => vec![vec![1, 1], vec![0, 1]],
            StabilizerType::C3 => vec![vec![1, 1, 1], vec![0, 1, 0], vec![0, 0, 1]],
            StabilizerType::V4 => vec![
                vec![1, 0, 0, 0],
                vec![-1, 1, 0, 0],
                vec![-1, 0, 1, 0],
                vec![-1, 0, 0, 1],
            ],
            StabilizerType::S3 => vec![vec![1, 0, 0], vec![-1, 1, 0], vec![-1, -1, 1]],
            StabilizerType::A4 => vec![
                vec![1, 0, 0, 0],
                vec![-1, 1, -1, -1],
                vec![-1, 0, 1, 0],
                vec![-1, 0, 0, 1],
            ],
        };
        BasisTransform { group: self, rows }
    }

    /// Which splitting block each transformed basis vector belongs to.
    pub fn block_partition(self) -> &'static [Block] {
        use Block::*;
        match self {
            StabilizerType::Trivial => &[Regular],
            StabilizerType::C2 => &[Regular, Two],
            StabilizerType::C3 => &[Regular, Three, Three],
            StabilizerType::V4 => &[Regular, Two, Two, Two],
            StabilizerType::S3 => &[Regular, Two, Three],
            StabilizerType::A4 => &[Regular, Two, Three, Three],
        }
    }

    /// Indices of the transformed basis lying in the given block.
    pub fn block_indices(self, block: Block) -> Vec<usize> {
        self.block_partition()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == block)
            .map(|(i, _)| i)
            .collect()
    }

    /// Rank of the `ell`-torsion block of the representation ring.
    pub fn torsion_rank(self, ell: Prime) -> usize {
        self.block_indices(ell.block()).len()
    }
}

impl fmt::Display for StabilizerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StabilizerType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StabilizerType::ALL
            .into_iter()
            .find(|g| g.tag() == s)
            .ok_or_else(|| format!("unknown stabilizer type {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// Spanned by the trivial (or, for cyclic groups, regular) representation.
    Regular,
    Two,
    Three,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub group: StabilizerType,
    pub rows: Vec<ClassFunction>,
}

pub fn char_table(g: StabilizerType) -> CharacterTable {
    CharacterTable { group: g, rows: g.character_rows() }
}

impl CharacterTable {
    pub fn degrees(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[0].a).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTransform {
    pub group: StabilizerType,
    pub rows: Vec<Vec<i64>>,
}

impl BasisTransform {
    pub fn matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.rows)
    }

    /// Transformed basis written as class functions.
    pub fn class_functions(&self) -> Vec<ClassFunction> {
        let irr = self.group.character_rows();
        self.rows.iter().map(|coeffs| combine(coeffs, &irr)).collect()
    }
}

fn combine(coeffs: &[i64], basis: &[ClassFunction]) -> ClassFunction {
    let n = basis[0].len();
    (0..n)
        .map(|c| coeffs.iter().zip(basis).fold(E::ZERO, |acc, (&k, chi)| acc + k * chi[c]))
        .collect()
}

/// How a cyclic group is embedded into a vertex group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Canonical,
    Id,
    Inv,
    A,
    B,
    Ab,
    C123,
    C132,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::Canonical,
        Variant::Id,
        Variant::Inv,
        Variant::A,
        Variant::B,
        Variant::Ab,
        Variant::C123,
        Variant::C132,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Canonical => "canonical",
            Variant::Id => "id",
            Variant::Inv => "inv",
            Variant::A => "a",
            Variant::B => "b",
            Variant::Ab => "ab",
            Variant::C123 => "c123",
            Variant::C132 => "c132",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| format!("unknown embedding variant {s:?}"))
    }
}

/// Legal embedding variants of `sub` into `over`; empty when none exist.
pub fn legal_variants(sub: StabilizerType, over: StabilizerType) -> &'static [Variant] {
    use StabilizerType::*;
    use Variant::*;
    match (sub, over) {
        (Trivial, _) => &[Canonical],
        (C2, C2) => &[Id],
        (C3, C3) => &[Id, Inv],
        (C2, V4) => &[A, B, Ab],
        (C2, S3) | (C3, S3) | (C2, A4) => &[Canonical],
        (C3, A4) => &[C123, C132],
        _ => &[],
    }
}

/// A legal inclusion of a cyclic stabilizer into a vertex stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddingLabel {
    sub: StabilizerType,
    over: StabilizerType,
    variant: Variant,
}

impl EmbeddingLabel {
    pub fn new(sub: StabilizerType, over: StabilizerType, variant: Variant) -> Result<Self, CharError> {
        if legal_variants(sub, over).contains(&variant) {
            Ok(EmbeddingLabel { sub, over, variant })
        } else {
            Err(CharError::IllegalEmbedding { sub, over, variant })
        }
    }

    /// The default variant: `canonical`, `id`, or the first listed one.
    pub fn default_for(sub: StabilizerType, over: StabilizerType) -> Result<Self, CharError> {
        match legal_variants(sub, over).first() {
            Some(&v) => Ok(EmbeddingLabel { sub, over, variant: v }),
            None => Err(CharError::IllegalEmbedding { sub, over, variant: Variant::Canonical }),
        }
    }

    pub fn all() -> Vec<EmbeddingLabel> {
        let mut out = Vec::new();
        for sub in StabilizerType::ALL {
            for over in StabilizerType::ALL {
                for &variant in legal_variants(sub, over) {
                    out.push(EmbeddingLabel { sub, over, variant });
                }
            }
        }
        out
    }

    pub fn sub(&self) -> StabilizerType {
        self.sub
    }

    pub fn over(&self) -> StabilizerType {
        self.over
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Image of each class of `sub` among the classes of `over`.
    pub fn class_map(&self) -> &'static [usize] {
        use StabilizerType::*;
        use Variant::*;
        match (self.sub, self.over, self.variant) {
            (Trivial, _, _) => &[0],
            (C2, C2, _) => &[0, 1],
            (C3, C3, Id) => &[0, 1, 2],
            (C3, C3, _) => &[0, 2, 1],
            (C2, V4, A) => &[0, 1],
            (C2, V4, B) => &[0, 2],
            (C2, V4, _) => &[0, 3],
            (C2, S3, _) => &[0, 1],
            (C3, S3, _) => &[0, 2, 2],
            (C2, A4, _) => &[0, 1],
            (C3, A4, C123) => &[0, 2, 3],
            (C3, A4, _) => &[0, 3, 2],
            _ => unreachable!("constructor only admits legal embeddings"),
        }
    }
}

impl fmt::Display for EmbeddingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[{}]", self.sub, self.over, self.variant)
    }
}

/// `(1/|G|) * sum over classes of size * f * conj(g)`, required to be a rational integer.
pub fn inner_product(f: &[E], g: &[E], grp: StabilizerType) -> Result<i64, CharError> {
    let n = grp.class_count();
    for len in [f.len(), g.len()] {
        if len != n {
            return Err(CharError::ClassCountMismatch { group: grp, expected: n, got: len });
        }
    }
    let total = grp
        .class_sizes()
        .iter()
        .zip(f.iter().zip(g))
        .fold(E::ZERO, |acc, (&size, (&x, &y))| acc + (size as i64) * (x * y.conj()));
    let order = grp.order() as i64;
    if total.b != 0 || total.a % order != 0 {
        return Err(CharError::NonIntegralProduct(format!("({total})/{order} over {grp}")));
    }
    Ok(total.a / order)
}

/// Restricts a class function on `emb.over()` to `emb.sub()`.
pub fn restrict(chi: &[E], emb: &EmbeddingLabel) -> Result<ClassFunction, CharError> {
    let n = emb.over.class_count();
    if chi.len() != n {
        return Err(CharError::ClassCountMismatch { group: emb.over, expected: n, got: chi.len() });
    }
    Ok(emb.class_map().iter().map(|&c| chi[c]).collect())
}

/// Induction in irreducible bases: entry `(i, j)` is `<Res phi_i, tau_j>`,
/// so column `j` holds the coordinates of `Ind tau_j`.
pub fn induction_matrix_irr(emb: &EmbeddingLabel) -> IntegerMatrix {
    let big = emb.over.character_rows();
    let small = emb.sub.character_rows();
    let mut m = IntegerMatrix::zeros(big.len(), small.len());
    for (i, phi) in big.iter().enumerate() {
        let res = restrict(phi, emb).expect("table rows have the right length");
        for (j, tau) in small.iter().enumerate() {
            let v = inner_product(&res, tau, emb.sub).expect("character tables are consistent");
            m[(i, j)] = v.into();
        }
    }
    m
}

/// Character degrees: coordinates of the regular representation.
pub fn regular_rep_coords(g: StabilizerType) -> Vec<i64> {
    char_table(g).degrees()
}

/// Scalar-product matrix of a proper inclusion in the transformed bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMatrix {
    pub emb: EmbeddingLabel,
    pub matrix: IntegerMatrix,
    pub row_blocks: Vec<Block>,
    pub col_blocks: Vec<Block>,
}

impl SplitMatrix {
    pub fn block(&self, block: Block) -> IntegerMatrix {
        let rows = self.emb.over.block_indices(block);
        let cols = self.emb.sub.block_indices(block);
        self.matrix.select(&rows, &cols)
    }
}

/// Block-diagonal form of an inclusion `C_ell -> G` in the transformed bases.
///
/// For proper inclusions the entries are the scalar products
/// `(phi_i| | tau_j)` of transformed characters. For the identity
/// inclusions `C_ell -> C_ell` the map is the automorphism of the
/// representation ring, written as a permutation of the transformed basis.
/// Inclusions of the trivial group have no block splitting and are
/// rejected.
pub fn split_matrix(emb: &EmbeddingLabel) -> Result<SplitMatrix, CharError> {
    if emb.sub == StabilizerType::Trivial {
        return Err(CharError::NotSplittable(*emb));
    }
    let matrix = if emb.sub == emb.over {
        automorphism_matrix(emb)?
    } else {
        let big = emb.over.basis_transform().class_functions();
        let small = emb.sub.basis_transform().class_functions();
        let mut m = IntegerMatrix::zeros(big.len(), small.len());
        for (i, phi) in big.iter().enumerate() {
            let res = restrict(phi, emb)?;
            for (j, tau) in small.iter().enumerate() {
                m[(i, j)] = inner_product(&res, tau, emb.sub)?.into();
            }
        }
        m
    };
    let row_blocks = emb.over.block_partition().to_vec();
    let col_blocks = emb.sub.block_partition().to_vec();
    for (i, rb) in row_blocks.iter().enumerate() {
        for (j, cb) in col_blocks.iter().enumerate() {
            if rb != cb && matrix.get_i64(i, j) != 0 {
                return Err(CharError::SplitViolation { emb: *emb, row: i, col: j });
            }
        }
    }
    Ok(SplitMatrix { emb: *emb, matrix, row_blocks, col_blocks })
}

fn automorphism_matrix(emb: &EmbeddingLabel) -> Result<IntegerMatrix, CharError> {
    let g = emb.sub;
    let irr = g.character_rows();
    // the automorphism sends tau to tau composed with the class map
    let perm: Vec<usize> = irr
        .iter()
        .map(|tau| {
            let moved: ClassFunction = emb.class_map().iter().map(|&c| tau[c]).collect();
            irr.iter().position(|t| *t == moved).expect("automorphisms permute irreducibles")
        })
        .collect();
    let basis = g.basis_transform().rows;
    let n = basis.len();
    let mut m = IntegerMatrix::zeros(n, n);
    for (j, coeffs) in basis.iter().enumerate() {
        let mut image = vec![0; n];
        for (k, &c) in coeffs.iter().enumerate() {
            image[perm[k]] += c;
        }
        let i = basis.iter().position(|b| *b == image).ok_or(CharError::NotSplittable(*emb))?;
        m[(i, j)] = 1.into();
    }
    Ok(m)
}

/// The `ell`-torsion block of [`split_matrix`]: rows index the vertex
/// group's `ell`-block, columns the edge group's.
pub fn torsion_block(emb: &EmbeddingLabel, ell: Prime) -> Result<IntegerMatrix, CharError> {
    if emb.sub != ell.cyclic() {
        return Err(CharError::PrimeMismatch { emb: *emb, prime: ell });
    }
    Ok(split_matrix(emb)?.block(ell.block()))
}
