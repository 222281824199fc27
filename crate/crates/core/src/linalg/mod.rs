//! Exact sparse linear algebra over prime fields.
//!
//! Matrices are immutable after construction and shareable across workers;
//! elimination of a single matrix is single-threaded and deterministic.
//! Pivot columns are always chosen smallest-first, which makes echelon forms
//! and pivot sets reproducible across runs.

mod echelon;
mod exact;
mod field;
mod matrix;

pub use echelon::{PushOutcome, RowEchelon, Workspace};
pub use exact::bareiss_rank;
pub use field::PrimeField;
pub use matrix::{
    echelonize, multi_prime_rank, nullspace, rank, EchelonForm, MultiPrimeRank, SparseMatrix,
};

/// Sparse vector: sorted `(index, value)` pairs, no zeros.
pub type SparseVec = alloc::vec::Vec<(u32, u64)>;

use alloc::string::String;
use core::fmt;

/// Errors from field construction and exact elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// The requested modulus is not an odd prime in the supported range.
    BadModulus(u64),
    /// Division by zero in a field operation.
    DivisionByZero,
    /// A matrix exceeded the configured bound for exact rational elimination.
    ExactBoundExceeded { rows: usize, cols: usize, bound: usize },
    /// Matrix dimensions disagree with the operation.
    Shape(String),
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::BadModulus(p) => {
                write!(f, "modulus {p} is not an odd prime below 2^31")
            }
            LinalgError::DivisionByZero => write!(f, "division by zero in prime field"),
            LinalgError::ExactBoundExceeded { rows, cols, bound } => write!(
                f,
                "exact elimination refused: min({rows}, {cols}) exceeds bound {bound}"
            ),
            LinalgError::Shape(msg) => write!(f, "shape mismatch: {msg}"),
        }
    }
}

impl core::error::Error for LinalgError {}
