//! Finite quantum groups from structure constants: axioms, Haar state, the
//! Kac–Takesaki operator, duals, antipodes and block decompositions.

mod blocks;
mod classify;
mod data;
mod dual;
pub mod examples;
mod haar;
mod quantum_group;
mod unitary;
mod validate;

use thiserror::Error;

pub use blocks::{wedderburn, AlgebraBlocks, Block, BlockDecomposition};
pub use classify::{classify_l2_implementation, Classification, ClassificationReport};
pub use data::{HopfData, Tensor3, TensorElement};
pub use dual::{
    antipode_consistency, antipode_from_w, biduality, dual_hopf, isomorphism_residual, solve_antipode,
    solve_counit, Biduality, DualHopf,
};
pub use haar::{haar_state, HaarData};
pub use quantum_group::QuantumGroup;
pub use unitary::{
    expand_first_leg, expand_second_leg, gns_operators, multiplicative_unitary, pentagon_residual,
    sum_of_tensors, unitarity_residual, Flavor, UnitaryTensor,
};
pub use validate::{validate_hopf, Axiom, AxiomCheck, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("dimension mismatch in `{field}`: expected {expected}, found {found}")]
    DimensionMismatch { field: &'static str, expected: usize, found: usize },
    #[error("axiom `{axiom}` violated with residual {residual:.3e}")]
    AxiomViolation { axiom: Axiom, residual: f64 },
    #[error("no invariant state solves the invariance system")]
    NoInvariantState,
    #[error("invariant states form a space of dimension {dimension}")]
    NonUniqueInvariantState { dimension: usize },
    #[error("invariance residual {residual:.3e} exceeds tolerance")]
    InvarianceFailure { residual: f64 },
    #[error("Gram matrix has eigenvalue {min_eigenvalue:.3e} below -tolerance")]
    NotPositive { min_eigenvalue: f64 },
    #[error("Haar state is not faithful (smallest Gram eigenvalue {min_eigenvalue:.3e})")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("Haar state is not tracial (residual {residual:.3e})")]
    NotTracial { residual: f64 },
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("pentagon equation fails (residual {residual:.3e})")]
    PentagonFailure { residual: f64 },
    #[error("slice space is not closed (residual {residual:.3e})")]
    SpanNotClosed { residual: f64 },
    #[error("antipode from slices disagrees (residual {residual:.3e})")]
    InconsistentAntipode { residual: f64 },
    #[error("no isomorphism found (residual {residual:.3e})")]
    NoIsomorphism { residual: f64 },
    #[error("membership and centralizer tests disagree: {detail}")]
    EquivalenceViolation { detail: String },
    #[error("block decomposition failed: {0}")]
    Decomposition(String),
}
