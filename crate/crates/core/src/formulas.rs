//! Closed formulas: the torsion contributions, the splitting of Bredon
//! homology, and the passage to equivariant K-homology.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::AbelianGroup;
use crate::qcomplex::{quotient_homology, QuotientComplex};
use crate::torsion::{inventory, TorsionError, TorsionInventory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("d2 = {0} is odd")]
    OddD2(u64),
    #[error("orbit space is not connected (H0 = {0})")]
    Disconnected(AbelianGroup),
    #[error("H2 = {0} has torsion; the K-homology extension is not determined")]
    TorsionInH2(AbelianGroup),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

pub type Pair = (AbelianGroup, AbelianGroup);

/// Homology of the 2-torsion part: `(Z^z2 (+) (Z/2)^(d2/2), Z^o2)`.
pub fn h_psi2(inv: &TorsionInventory) -> Result<Pair, FormulaError> {
    if inv.d2 % 2 != 0 {
        return Err(FormulaError::OddD2(inv.d2));
    }
    let h0 = AbelianGroup::new(inv.z2 as usize, vec![2; (inv.d2 / 2) as usize]);
    Ok((h0, AbelianGroup::free(inv.o2 as usize)))
}

/// Homology of the 3-torsion part: `Z^(2 o3 + iota3)` in degrees 0 and 1.
pub fn h_psi3(inv: &TorsionInventory) -> Pair {
    let r = AbelianGroup::free((2 * inv.o3 + inv.iota3) as usize);
    (r.clone(), r)
}

/// Degree-wise sum of orbit-space homology and the two torsion parts.
pub fn split_bredon(orbit: &[AbelianGroup; 3], p2: &Pair, p3: &Pair) -> Result<[AbelianGroup; 3], FormulaError> {
    if orbit[0] != AbelianGroup::free(1) {
        return Err(FormulaError::Disconnected(orbit[0].clone()));
    }
    Ok([
        AbelianGroup::sum([&orbit[0], &p2.0, &p3.0]),
        AbelianGroup::sum([&orbit[1], &p2.1, &p3.1]),
        orbit[2].clone(),
    ])
}

/// The split formula evaluated on a complex: orbit homology plus the
/// inventory-driven torsion parts.
pub fn split_from_complex(c: &QuotientComplex) -> Result<[AbelianGroup; 3], FormulaError> {
    let inv = inventory(c)?;
    split_bredon(&quotient_homology(c), &h_psi2(&inv)?, &h_psi3(&inv))
}

/// `K_0` and `K_1`; the rest follows by 2-periodicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KHomology {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

/// `K_0 = H_0 (+) H_2`, `K_1 = H_1`, valid when `H_2` is free.
pub fn k_from_bredon(h: &[AbelianGroup; 3]) -> Result<KHomology, FormulaError> {
    if !h[2].is_torsion_free() {
        return Err(FormulaError::TorsionInH2(h[2].clone()));
    }
    Ok(KHomology { k0: h[0].direct_sum(&h[2]), k1: h[1].clone() })
}

/// Orbit-space Betti numbers together with the torsion inventory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BianchiSummary {
    pub beta1: u64,
    pub beta2: u64,
    #[serde(default)]
    pub h1_orbit_torsion: Vec<u64>,
    pub inventory: TorsionInventory,
}

impl BianchiSummary {
    /// For genuine Bianchi data, where the naive Euler characteristic
    /// vanishes and so `beta2 = beta1 - 1`.
    pub fn bianchi(beta1: u64, inventory: TorsionInventory) -> Self {
        assert!(beta1 >= 1, "Bianchi orbit spaces have beta1 >= 1");
        BianchiSummary { beta1, beta2: beta1 - 1, h1_orbit_torsion: Vec::new(), inventory }
    }

    pub fn from_complex(c: &QuotientComplex) -> Result<Self, FormulaError> {
        let [_, h1, h2] = quotient_homology(c);
        Ok(BianchiSummary {
            beta1: h1.rank() as u64,
            beta2: h2.rank() as u64,
            h1_orbit_torsion: h1.torsion().to_vec(),
            inventory: inventory(c)?,
        })
    }

    /// `(Z, Z^beta1 (+) torsion, Z^beta2)`.
    pub fn orbit_homology(&self) -> [AbelianGroup; 3] {
        [
            AbelianGroup::free(1),
            AbelianGroup::new(self.beta1 as usize, self.h1_orbit_torsion.iter().copied()),
            AbelianGroup::free(self.beta2 as usize),
        ]
    }
}

pub fn corollary_k(s: &BianchiSummary) -> Result<KHomology, FormulaError> {
    let inv = &s.inventory;
    if inv.d2 % 2 != 0 {
        return Err(FormulaError::OddD2(inv.d2));
    }
    let three = 2 * inv.o3 + inv.iota3;
    let k0 = AbelianGroup::new((1 + s.beta2 + inv.z2 + three) as usize, vec![2; (inv.d2 / 2) as usize]);
    let k1 = AbelianGroup::new((s.beta1 + inv.o2 + three) as usize, s.h1_orbit_torsion.iter().copied());
    Ok(KHomology { k0, k1 })
}

/// `Z[FC]`: free on the conjugacy classes of elements of finite order.
pub fn h0_from_fc(count_fc: usize) -> AbelianGroup {
    assert!(count_fc >= 1, "the identity class is always present");
    AbelianGroup::free(count_fc)
}
