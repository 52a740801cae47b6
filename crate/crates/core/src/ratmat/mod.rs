//! Exact rational scalars, vectors and dense matrices.
//!
//! Every verdict in this crate is decided by code in this module or on top of
//! it; none of it touches floating point.

mod ldl;
mod matrix;
mod rational;

use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

pub use ldl::Ldl;
pub use matrix::{RatMatrix, RatVector};
pub use rational::{lcm_of_denominators, rat, Rational};

/// Default bound on matrix rows and columns.
pub const DEFAULT_MAX_DIM: usize = 64;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

/// Current bound on matrix rows and columns.
pub fn dimension_cap() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

/// Replaces the process-wide dimension bound. Intended for front ends
/// honouring `RATPULL_MAX_DIM`; library code never calls this.
pub fn set_dimension_cap(cap: usize) {
    MAX_DIM.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational {0:?}: expected \"p\" or \"p/q\"")]
    Parse(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the cap of {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
}
