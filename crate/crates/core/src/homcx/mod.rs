//! Bounded complexes of free graded modules over a polynomial ring.
//!
//! Every complex carries two gradings: a cohomological position (an integer, or a parity for
//! Z/2-folded complexes) and the auxiliary weight of the ring. Differentials raise weight by a
//! fixed `shift`, so each `(position, weight)` slice is a finite-dimensional vector space once
//! all variables have positive weight. Sign conventions live in [`signs`].

mod cohomology;
mod complex;
mod homotopy;
mod json;
mod matrix;
mod ops;
pub mod signs;
#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::exactalg::AlgError;

pub use cohomology::{cohomology_window, slice_basis, CohomologyTable, SliceBasis};
pub use complex::{
    check_complex, koszul, koszul_dual, subsets, FiniteComplex, FreeModule, Grading, ModuleMap,
    Offense, ValidationReport,
};
pub use homotopy::{find_null_homotopy, Homotopy};
pub use json::{complex_from_json, complex_to_json, ComplexJson, RingSpec};
pub use matrix::PolyMatrix;
pub use ops::{
    cone, fold_z2, hom_complex, hom_differential, hom_element, shift, strip_laurent, tensor,
    ChainMap, HomComplex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("entry {entry} at position {position} ({row},{col}) is not homogeneous of weight {expected}")]
    NotHomogeneous {
        position: i64,
        row: usize,
        col: usize,
        entry: String,
        expected: i64,
    },
    #[error("d∘d ≠ 0 at position {}: entry ({},{}) = {}", .0.position, .0.row, .0.col, .0.value)]
    NotAComplex(Offense),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("complexes live over different rings")]
    AmbientMismatch,
    #[error("differential shifts differ: {0} vs {1}")]
    ShiftMismatch(i64, i64),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("target is not a cycle in the endomorphism complex")]
    NotACycle,
    #[error("curved complex has no cohomology")]
    Curved,
    #[error(transparent)]
    Alg(#[from] AlgError),
}
