//! Exact rational pullback of Weil divisors along proper birational
//! morphisms, computed from intersection data.
//!
//! The pipeline is: validate the sign pattern of `Φ = (E_i · C_j)`
//! ([`pullback::validate_signs`]), certify that `A = -ᵗΦ` is an invertible
//! M-matrix ([`mmatrix::is_invertible_m_matrix`]), then solve for the
//! coefficients and check them against the projection formula
//! ([`pullback::compute_pullback`]). Everything that affects a verdict is
//! exact rational arithmetic ([`ratmat`]).
//!
//! [`config`] reads and writes the JSON document formats and carries the
//! builtin example library.

pub mod config;
pub mod mmatrix;
pub mod pullback;
pub mod ratmat;

pub use mmatrix::{as_z_matrix, is_invertible_m_matrix, MMatrixError, MMatrixReport, ZMatrix};
pub use pullback::{
    certify, compute_pullback, mumford_surface_pullback, validate_signs, DivisorInput,
    IntersectionConfig, PullbackError, PullbackOptions, PullbackResult,
};
pub use ratmat::{rat, RatError, RatMatrix, RatVector, Rational};
