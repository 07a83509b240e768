//! Dense arbitrary-precision integer matrices, Smith normal form with
//! transform certificates, and homology of short integral chain complexes.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain complex: composite of the two differentials is nonzero")]
    NotAComplex,
}

/// Row-major dense matrix over the integers. Zero-row and zero-column
/// matrices are ordinary values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit column count,
    /// so that `0 x n` matrices can be written down.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntegerMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, columns: &[C]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Entry as `i64`, panicking on overflow. Convenient in tests.
    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        self[(i, j)].to_i64().expect("entry exceeds i64")
    }

    /// All entries as machine integers, row by row; `None` on overflow.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_i64()).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Copies the sub-block with the given row and column indices.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut m = Self::zeros(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Adds `scale * block` into `self` with the block's top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntegerMatrix, scale: i64) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let s = BigInt::from(scale);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] += &block[(i, j)] * &s;
            }
        }
    }

    pub fn checked_mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        Some(sign * m[(n - 1, n - 1)].clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map_or(false, |d| d.abs().is_one())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix {}x{} {}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `A = U * D * V` together with its certificates.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`, each dividing the next.
    pub fn divisors(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

struct SnfState {
    u: IntegerMatrix,
    d: IntegerMatrix,
    v: IntegerMatrix,
}

impl SnfState {
    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_rows(a, b);
    }

    /// row[dst] += c * row[src] on D, keeping A = U D V.
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row_multiple(dst, src, c);
        let neg = -c;
        self.u.add_col_multiple(src, dst, &neg);
    }

    /// col[dst] += c * col[src] on D, keeping A = U D V.
    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col_multiple(dst, src, c);
        let neg = -c;
        self.v.add_row_multiple(src, dst, &neg);
    }

    fn row_negate(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block; ties go to the
    /// lowest row, then the lowest column.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows {
            for j in t..self.d.cols {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.d.rows.min(self.d.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.d.rows {
                    if self.d[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.d[(i, t)].div_floor(&self.d[(t, t)]);
                    self.row_add(i, t, &-q);
                    if !self.d[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.d.cols {
                    if self.d[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.d[(t, j)].div_floor(&self.d[(t, t)]);
                    self.col_add(j, t, &-q);
                    if !self.d[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared in row or column t
                    let (pi, pj) = self.pivot_in_cross(t);
                    self.row_swap(t, pi);
                    self.col_swap(t, pj);
                    continue;
                }
                // enforce divisibility of the trailing block by the pivot
                let p = self.d[(t, t)].clone();
                let bad = (t + 1..self.d.rows)
                    .find(|&i| (t + 1..self.d.cols).any(|j| !self.d[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.row_negate(t);
            }
        }
    }

    /// Smallest nonzero entry of row t and column t (from position t on).
    fn pivot_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs: Option<BigInt> =
            (!self.d[(t, t)].is_zero()).then(|| self.d[(t, t)].abs());
        let mut consider = |i: usize, j: usize, best: &mut (usize, usize)| {
            let x = self.d[(i, j)].abs();
            if !x.is_zero() && best_abs.as_ref().map_or(true, |b| x < *b) {
                best_abs = Some(x);
                *best = (i, j);
            }
        };
        for i in t + 1..self.d.rows {
            consider(i, t, &mut best);
        }
        for j in t + 1..self.d.cols {
            consider(t, j, &mut best);
        }
        best
    }
}

/// Smith normal form with unimodular certificates: `a = u * d * v`.
///
/// Deterministic for a fixed input: pivots are chosen by minimal absolute
/// value with ties broken by lowest row, then lowest column.
pub fn snf(a: &IntegerMatrix) -> SnfResult {
    let mut st = SnfState {
        u: IntegerMatrix::identity(a.rows),
        d: a.clone(),
        v: IntegerMatrix::identity(a.cols),
    };
    st.run();
    SnfResult { u: st.u, d: st.d, v: st.v }
}

pub fn elementary_divisors(a: &IntegerMatrix) -> Vec<BigInt> {
    snf(a).divisors()
}

pub fn rank(a: &IntegerMatrix) -> usize {
    snf(a).rank()
}

/// Finitely generated abelian group `Z^rank (+) Z/t1 (+) ... (+) Z/tk` with
/// invariant factors `t1 | t2 | ... | tk`, all greater than one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawAbelianGroup", into = "RawAbelianGroup")]
pub struct AbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAbelianGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl TryFrom<RawAbelianGroup> for AbelianGroup {
    type Error = String;
    fn try_from(raw: RawAbelianGroup) -> Result<Self, String> {
        if raw.torsion.contains(&0) {
            return Err("torsion orders must be positive".into());
        }
        Ok(AbelianGroup::new(raw.rank, raw.torsion))
    }
}

impl From<AbelianGroup> for RawAbelianGroup {
    fn from(g: AbelianGroup) -> Self {
        RawAbelianGroup { rank: g.rank, torsion: g.torsion }
    }
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// Builds the group `Z^rank (+) (+)_i Z/orders[i]` and brings it to
    /// invariant-factor form. Orders equal to one are dropped; zero orders
    /// count as free summands.
    pub fn new(rank: usize, orders: impl IntoIterator<Item = u64>) -> Self {
        let mut rank = rank;
        let mut prime_powers: Vec<(u64, u64)> = Vec::new();
        for o in orders {
            if o == 0 {
                rank += 1;
                continue;
            }
            prime_powers.extend(factor_prime_powers(o));
        }
        AbelianGroup { rank, torsion: invariant_factors(prime_powers) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        AbelianGroup::new(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    pub fn sum<'a>(groups: impl IntoIterator<Item = &'a AbelianGroup>) -> AbelianGroup {
        groups.into_iter().fold(AbelianGroup::zero(), |acc, g| acc.direct_sum(g))
    }
}

fn factor_prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

fn invariant_factors(mut prime_powers: Vec<(u64, u64)>) -> Vec<u64> {
    // per prime, largest powers go into the largest invariant factor
    prime_powers.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut factors: Vec<u64> = Vec::new();
    let mut i = 0;
    while i < prime_powers.len() {
        let p = prime_powers[i].0;
        let mut k = 0;
        while i < prime_powers.len() && prime_powers[i].0 == p {
            if factors.len() <= k {
                factors.push(1);
            }
            factors[k] *= prime_powers[i].1;
            k += 1;
            i += 1;
        }
    }
    factors.reverse();
    factors.sort_unstable();
    factors
}

impl fmt::Display for AbelianGroup {
    /// Free part first, then invariant factors ascending: `Z^3 (+) Z/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

impl std::str::FromStr for AbelianGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbelianGroup::zero());
        }
        let mut rank = 0;
        let mut orders = Vec::new();
        for part in s.split("(+)").map(str::trim) {
            if part == "Z" {
                rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.parse::<usize>().map_err(|e| format!("bad rank in {part:?}: {e}"))?;
            } else if let Some(t) = part.strip_prefix("Z/") {
                let t: u64 = t.parse().map_err(|e| format!("bad order in {part:?}: {e}"))?;
                if t == 0 {
                    return Err(format!("bad order in {part:?}"));
                }
                orders.push(t);
            } else {
                return Err(format!("unrecognised summand {part:?}"));
            }
        }
        Ok(AbelianGroup::new(rank, orders))
    }
}

/// Homology `ker d_n / im d_succ` of `... -> C_{n+1} --d_succ--> C_n --d_n--> C_{n-1}`.
///
/// Because `ker d_n` is a direct summand of `C_n`, the torsion of the
/// quotient equals the torsion of `coker d_succ`.
pub fn chain_homology(
    d_n: &IntegerMatrix,
    d_succ: &IntegerMatrix,
) -> Result<AbelianGroup, MatrixError> {
    if d_n.cols() != d_succ.rows() {
        return Err(MatrixError::DimensionMismatch(format!(
            "d_n has {} columns but d_succ has {} rows",
            d_n.cols(),
            d_succ.rows()
        )));
    }
    if !d_n.checked_mul(d_succ)?.is_zero() {
        return Err(MatrixError::NotAComplex);
    }
    let nullity = d_n.cols() - rank(d_n);
    let divisors = elementary_divisors(d_succ);
    let torsion = divisors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("torsion order exceeds u64"));
    Ok(AbelianGroup::new(nullity - divisors.len(), torsion))
}
