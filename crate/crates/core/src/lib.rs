//! Bredon homology with coefficients in the complex representation ring,
//! and equivariant K-homology, for groups acting on 2-dimensional cell
//! complexes whose cell stabilizers lie on Klein's list (trivial, Z/2,
//! Z/3, Klein four, S3, A4).
//!
//! Two pipelines are provided: [`bredon::bredon_homology`] assembles the
//! chain complex in irreducible character bases and takes Smith normal
//! forms; [`formulas::split_from_complex`] reduces the torsion subcomplexes
//! and evaluates closed formulas. They are expected to agree.

pub mod dataset;
pub mod bredon;
pub mod exactchar;
pub mod formulas;
pub mod intmat;
pub mod qcomplex;
pub mod torsion;

pub use bredon::{bredon_homology, BredonError};
pub use exactchar::{EmbeddingLabel, Prime, StabilizerType, Variant};
pub use formulas::{FormulaError, KHomology};
pub use intmat::{AbelianGroup, IntegerMatrix};
pub use qcomplex::{ComplexError, QuotientComplex};
pub use torsion::{ComponentType, TorsionInventory};
