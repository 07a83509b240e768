//! The Bredon chain complex with coefficients in the complex representation
//! ring, assembled in irreducible character bases.

use std::ops::Range;

use thiserror::Error;

use crate::exactchar::{induction_matrix_irr, EmbeddingLabel, StabilizerType};
use crate::formulas::h0_from_fc;
use crate::intmat::{chain_homology, AbelianGroup, IntegerMatrix};
use crate::qcomplex::{quotient_homology, singular_dimension, QuotientComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BredonError {
    #[error("Bredon differentials do not compose to zero")]
    NotAComplex,
    #[error("singular part has dimension {0}; the conjugacy-class shortcut needs dimension at most 0")]
    SingularPartTooBig(i8),
    #[error("orbit space has {0} connected components; expected exactly one")]
    Disconnected(usize),
}

/// `0 -> C2 --psi2--> C1 --psi1--> C0 -> 0` with `C_n` the direct sum of the
/// representation rings of the `n`-cell stabilizers.
///
/// Rows and columns follow cell order in the complex, and within a cell the
/// frozen order of irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BredonComplex {
    pub psi1: IntegerMatrix,
    pub psi2: IntegerMatrix,
    pub vertex_ranges: Vec<Range<usize>>,
    pub edge_ranges: Vec<Range<usize>>,
}

impl BredonComplex {
    /// Row of `psi1` holding character `chi` of vertex `v`.
    pub fn vertex_row(&self, v: usize, chi: usize) -> usize {
        let r = &self.vertex_ranges[v];
        assert!(chi < r.len());
        r.start + chi
    }

    /// Column of `psi1` (and row of `psi2`) holding character `chi` of edge `e`.
    pub fn edge_col(&self, e: usize, chi: usize) -> usize {
        let r = &self.edge_ranges[e];
        assert!(chi < r.len());
        r.start + chi
    }

    /// Column of `psi2` for face `f`.
    pub fn face_col(&self, f: usize) -> usize {
        assert!(f < self.psi2.cols());
        f
    }
}

fn ranges(sizes: impl Iterator<Item = usize>) -> Vec<Range<usize>> {
    let mut at = 0;
    sizes
        .map(|n| {
            let r = at..at + n;
            at += n;
            r
        })
        .collect()
}

pub fn assemble(c: &QuotientComplex) -> Result<BredonComplex, BredonError> {
    let vertex_ranges = ranges(c.vertices().iter().map(|v| v.stab.class_count()));
    let edge_ranges = ranges(c.edges().iter().map(|e| e.stab.class_count()));
    let n0 = vertex_ranges.last().map_or(0, |r| r.end);
    let n1 = edge_ranges.last().map_or(0, |r| r.end);

    let mut psi1 = IntegerMatrix::zeros(n0, n1);
    for (j, e) in c.edges().iter().enumerate() {
        let col = edge_ranges[j].start;
        for (p, sign) in [(&e.end, 1), (&e.origin, -1)] {
            let block = induction_matrix_irr(&p.emb);
            psi1.add_block(vertex_ranges[p.vertex].start, col, &block, sign);
        }
    }

    let mut psi2 = IntegerMatrix::zeros(n1, c.faces().len());
    for (f, face) in c.faces().iter().enumerate() {
        for &(e, k) in &face.boundary {
            let stab = c.edges()[e].stab;
            let emb = EmbeddingLabel::new(StabilizerType::Trivial, stab, crate::exactchar::Variant::Canonical)
                .expect("the trivial group embeds everywhere");
            psi2.add_block(edge_ranges[e].start, f, &induction_matrix_irr(&emb), k);
        }
    }

    if !(&psi1 * &psi2).is_zero() {
        return Err(BredonError::NotAComplex);
    }
    Ok(BredonComplex { psi1, psi2, vertex_ranges, edge_ranges })
}

/// `(H0, H1, H2)` of the Bredon complex.
pub fn bredon_homology(c: &QuotientComplex) -> Result<[AbelianGroup; 3], BredonError> {
    let b = assemble(c)?;
    Ok(homology_of(&b))
}

pub fn homology_of(b: &BredonComplex) -> [AbelianGroup; 3] {
    let d0 = IntegerMatrix::zeros(0, b.psi1.rows());
    let d3 = IntegerMatrix::zeros(b.psi2.cols(), 0);
    [
        chain_homology(&d0, &b.psi1).expect("shapes agree"),
        chain_homology(&b.psi1, &b.psi2).expect("checked at assembly"),
        chain_homology(&b.psi2, &d3).expect("shapes agree"),
    ]
}

/// Bredon homology when the singular part is zero-dimensional: `H0` is
/// free on the conjugacy classes of finite-order elements, higher degrees
/// agree with the orbit space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcHomology {
    pub h0: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
}

impl FcHomology {
    pub fn as_array(&self) -> [AbelianGroup; 3] {
        [self.h0.clone(), self.h1.clone(), self.h2.clone()]
    }
}

pub fn h_fin_via_fc(c: &QuotientComplex) -> Result<FcHomology, BredonError> {
    let dim = singular_dimension(c);
    if dim > 0 {
        return Err(BredonError::SingularPartTooBig(dim));
    }
    let components = c.component_count();
    if components != 1 {
        return Err(BredonError::Disconnected(components));
    }
    // identity plus the nontrivial classes of each singular vertex group
    let fc = 1 + c.vertices().iter().map(|v| v.stab.class_count() - 1).sum::<usize>();
    let [_, h1, h2] = quotient_homology(c);
    Ok(FcHomology { h0: h0_from_fc(fc), h1, h2 })
}
