//! Brute-force oracle inside `U(gl_n)`.
//!
//! Everything here is exact and small-rank: PBW straightening against the
//! commutation relations, the explicit quadratic Casimir, truncated Verma
//! modules in weight-graded blocks, the split Casimir on `M ⊗ V` and
//! `M ⊗ V*`, and the weight combinatorics of `S^r V ⊗ S^s V*`. The module
//! exists to check identities the rest of the crate relies on, so each
//! operator comes with an independently computed counterpart to compare
//! against.

mod element;
mod tensor;
mod verma;
mod weights;

pub use element::{casimir2, rho, straighten, Gen, Monomial, Straightener, UEAElement};
pub use tensor::{
    casimir_coproduct_defect, omega_operator, omega_spectrum_check, BlockCheck, BlockOperator, OmegaReport,
    TensorBlockMatrix, TensorFactor,
};
pub use verma::{casimir_scalar_check, verma_action, CasimirReport, VermaBlockMatrix, VermaOperator, VermaTruncation};
pub use weights::{tensor_weight_multiset, witness_weight_check, WeightMultiset};

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvelopingError {
    InvalidGenerator { row: usize, col: usize, rank: usize },
    NonGenericWeight,
    RankMismatch { left: usize, right: usize },
}

impl fmt::Display for EnvelopingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvelopingError::InvalidGenerator { row, col, rank } => {
                write!(f, "generator E_{{{row},{col}}} is out of range for gl_{rank}")
            }
            EnvelopingError::NonGenericWeight => {
                write!(f, "weight has repeated coordinates; the tensor decomposition hypothesis fails")
            }
            EnvelopingError::RankMismatch { left, right } => {
                write!(f, "weights have different ranks ({left} vs {right})")
            }
        }
    }
}

impl std::error::Error for EnvelopingError {}
