//! Inventory-level data for Bianchi groups and its evaluation through the
//! closed formulas.

use serde::{Deserialize, Serialize};

use crate::formulas::{corollary_k, h_psi2, h_psi3, k_from_bredon, split_bredon, BianchiSummary, FormulaError, KHomology};
use crate::intmat::AbelianGroup;
use crate::torsion::{ComponentType, TorsionInventory};

const BUNDLED: &str = include_str!("../data/bianchi_table.json");

/// One row of the table: orbit-space data, reduced torsion components,
/// and the expected Bredon homology. The expected `H1` is
/// `Z^h1_extra_rank (+) Z^beta1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InventoryRow {
    pub label: String,
    pub class_number: u32,
    pub beta1: u64,
    pub c2: Vec<ComponentType>,
    pub c3: Vec<ComponentType>,
    pub h0: AbelianGroup,
    pub h1_extra_rank: u64,
}

impl InventoryRow {
    pub fn inventory(&self) -> Result<TorsionInventory, FormulaError> {
        Ok(TorsionInventory::from_components(&self.c2, &self.c3)?)
    }

    pub fn summary(&self) -> Result<BianchiSummary, FormulaError> {
        Ok(BianchiSummary::bianchi(self.beta1, self.inventory()?))
    }

    pub fn expected_h1(&self) -> AbelianGroup {
        AbelianGroup::free((self.h1_extra_rank + self.beta1) as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub label: String,
    pub inventory: TorsionInventory,
    pub h0: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    pub expected_h0: AbelianGroup,
    pub expected_h1: AbelianGroup,
    pub k: KHomology,
    /// K-homology straight from the closed formula; must equal `k`.
    pub k_corollary: KHomology,
}

impl RowResult {
    pub fn matches(&self) -> bool {
        self.h0 == self.expected_h0 && self.h1 == self.expected_h1
    }

    pub fn k_consistent(&self) -> bool {
        self.k == self.k_corollary
    }
}

pub fn evaluate_row(row: &InventoryRow) -> Result<RowResult, FormulaError> {
    let summary = row.summary()?;
    let inv = summary.inventory;
    let [h0, h1, h2] = split_bredon(&summary.orbit_homology(), &h_psi2(&inv)?, &h_psi3(&inv))?;
    let bredon = [h0, h1, h2];
    let k = k_from_bredon(&bredon)?;
    let k_corollary = corollary_k(&summary)?;
    let [h0, h1, h2] = bredon;
    Ok(RowResult {
        label: row.label.clone(),
        inventory: inv,
        h0,
        h1,
        h2,
        expected_h0: row.h0.clone(),
        expected_h1: row.expected_h1(),
        k,
        k_corollary,
    })
}

pub fn parse_dataset(text: &str) -> Result<Vec<InventoryRow>, serde_json::Error> {
    serde_json::from_str(text)
}

/// The 25 rows shipped with the crate.
pub fn bundled() -> Vec<InventoryRow> {
    parse_dataset(BUNDLED).expect("bundled dataset is well-formed")
}
