//! Z-matrix recognition and invertible-M-matrix certification.
//!
//! A Z-matrix `A` (nonpositive off-diagonal entries) is an invertible
//! M-matrix when `A = sE - B` with `B >= 0` and `ρ(B) < s`. For Z-matrices
//! this is equivalent to each of the three exact tests implemented here:
//!
//! * every leading principal minor is positive,
//! * `A` is invertible and `A⁻¹ >= 0` entrywise,
//! * some `x > 0` has `Ax > 0`, witnessed by `x = A⁻¹·(1, …, 1)`.
//!
//! [`is_invertible_m_matrix`] runs all three and treats disagreement as a
//! bug. The power-iteration estimate of `ρ(B)` is reported for diagnostics
//! and never decides a verdict.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratmat::{RatError, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MMatrixError {
    #[error("not a Z-matrix: entry ({row}, {col}) is positive")]
    NotZPattern { row: usize, col: usize },
    #[error("internal inconsistency between exact M-matrix checks: {0}")]
    InternalInconsistency(String),
    #[error("shift s = {s} leaves a negative diagonal entry in B")]
    InvalidShift { s: Rational },
    #[error(transparent)]
    Rat(#[from] RatError),
}

/// A square matrix with nonpositive off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMatrix(RatMatrix);

impl ZMatrix {
    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn into_inner(self) -> RatMatrix {
        self.0
    }
}

impl TryFrom<RatMatrix> for ZMatrix {
    type Error = MMatrixError;
    fn try_from(m: RatMatrix) -> Result<Self, MMatrixError> {
        as_z_matrix(&m)
    }
}

/// Wraps `m` if it is square with every off-diagonal entry `<= 0`. The
/// first violating entry in row-major order is reported.
pub fn as_z_matrix(m: &RatMatrix) -> Result<ZMatrix, MMatrixError> {
    if !m.is_square() {
        return Err(RatError::NonSquare { rows: m.rows(), cols: m.cols() }.into());
    }
    let n = m.rows();
    for row in 0..n {
        for col in 0..n {
            if row != col && m.get(row, col).is_positive() {
                return Err(MMatrixError::NotZPattern { row, col });
            }
        }
    }
    Ok(ZMatrix(m.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorsCheck {
    pub minors: Vec<Rational>,
    pub all_positive: bool,
}

pub fn check_minors(a: &ZMatrix) -> MinorsCheck {
    let m = a.matrix();
    let minors: Vec<Rational> = (1..=a.dim())
        .map(|k| m.leading_submatrix(k).det().expect("leading block is square"))
        .collect();
    let all_positive = minors.iter().all(Rational::is_positive);
    MinorsCheck { minors, all_positive }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseCheck {
    pub nonnegative: bool,
    /// Present whenever `A` is invertible, whatever the signs.
    pub inverse: Option<RatMatrix>,
}

pub fn check_inverse_nonneg(a: &ZMatrix) -> InverseCheck {
    match a.matrix().inverse() {
        Ok(inv) => InverseCheck {
            nonnegative: inv.entries().iter().all(|x| !x.is_negative()),
            inverse: Some(inv),
        },
        Err(_) => InverseCheck { nonnegative: false, inverse: None },
    }
}

/// Returns `x = A⁻¹·(1, …, 1)` when it exists and passes
/// [`verify_certificate`].
pub fn check_certificate(a: &ZMatrix) -> Option<RatVector> {
    let x = a.matrix().solve_right(&RatVector::ones(a.dim())).ok()?;
    match verify_certificate(a, &x) {
        Ok(true) => Some(x),
        _ => None,
    }
}

/// True iff every `x_i > 0` and every `(Ax)_i > 0`.
pub fn verify_certificate(a: &ZMatrix, x: &RatVector) -> Result<bool, MMatrixError> {
    let ax = a.matrix().mat_vec(x)?;
    Ok(x.all_positive() && ax.all_positive())
}

/// `A = sE - B` with `B >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub s: Rational,
    pub b: RatMatrix,
}

impl Decomposition {
    /// Reassembles `sE - B`.
    pub fn recompose(&self) -> RatMatrix {
        let n = self.b.rows();
        RatMatrix::identity(n)
            .scale(&self.s)
            .sub(&self.b)
            .expect("B is square")
    }
}

/// The canonical shift: `s = max_i a_ii` when that is positive, else `s = 1`.
/// Both choices keep the diagonal of `B = sE - A` nonnegative.
pub fn canonical_shift(a: &ZMatrix) -> Rational {
    a.matrix()
        .diag()
        .iter()
        .max()
        .filter(|m| m.is_positive())
        .cloned()
        .unwrap_or_else(Rational::one)
}

pub fn decompose(a: &ZMatrix) -> Decomposition {
    decompose_with_shift(a, &canonical_shift(a)).expect("canonical shift dominates the diagonal")
}

/// Decomposes with a caller-chosen `s`; fails if some `a_ii > s` or `s <= 0`.
pub fn decompose_with_shift(a: &ZMatrix, s: &Rational) -> Result<Decomposition, MMatrixError> {
    let m = a.matrix();
    if !s.is_positive() || m.diag().iter().any(|d| d > s) {
        return Err(MMatrixError::InvalidShift { s: s.clone() });
    }
    let b = RatMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if i == j {
            s - m.get(i, i)
        } else {
            -m.get(i, j)
        }
    });
    Ok(Decomposition { s: s.clone(), b })
}

pub const POWER_ITERATIONS: usize = 200;
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;

/// Floating-point estimate of `ρ(B)` for `A = sE - B`. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub s: f64,
    pub rho_hat: f64,
    pub converged: bool,
}

impl SpectralEstimate {
    /// What the estimate alone would suggest; never used as a verdict.
    pub fn suggests_m_matrix(&self) -> bool {
        self.rho_hat < self.s
    }
}

pub fn spectral_estimate(a: &ZMatrix) -> SpectralEstimate {
    estimate_for(&decompose(a))
}

pub fn spectral_estimate_with_shift(
    a: &ZMatrix,
    s: &Rational,
) -> Result<SpectralEstimate, MMatrixError> {
    Ok(estimate_for(&decompose_with_shift(a, s)?))
}

fn estimate_for(d: &Decomposition) -> SpectralEstimate {
    let (rho_hat, converged) = power_iteration(&d.b);
    SpectralEstimate { s: d.s.to_f64(), rho_hat, converged }
}

/// Power iteration from the all-ones vector with L∞ normalization. For
/// `B >= 0` and `‖v‖∞ = 1`, `‖Bv‖∞` is the running estimate of `ρ(B)`.
fn power_iteration(b: &RatMatrix) -> (f64, bool) {
    let n = b.rows();
    if n == 0 {
        return (0.0, true);
    }
    let bf: Vec<f64> = b.entries().iter().map(Rational::to_f64).collect();
    let mut v = vec![1.0f64; n];
    let mut prev = f64::NAN;
    let mut est = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| bf[i * n + j] * v[j]).sum())
            .collect();
        let norm = w.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if norm == 0.0 {
            return (0.0, true);
        }
        prev = est;
        est = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    (est, (est - prev).abs() <= CONVERGENCE_TOLERANCE)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MMatrixReport {
    pub verdict: bool,
    pub dimension: usize,
    pub minors: Vec<Rational>,
    pub minors_positive: bool,
    pub inverse_nonneg: bool,
    pub inverse: Option<RatMatrix>,
    pub certificate_x: Option<RatVector>,
    pub spectral_estimate: Option<SpectralEstimate>,
}

/// Runs the three exact characterizations and insists that they agree.
pub fn is_invertible_m_matrix(a: &ZMatrix) -> Result<MMatrixReport, MMatrixError> {
    let minors = check_minors(a);
    let inverse = check_inverse_nonneg(a);
    let certificate = check_certificate(a);

    let verdicts = [minors.all_positive, inverse.nonnegative, certificate.is_some()];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(MMatrixError::InternalInconsistency(format!(
            "minors positive = {}, inverse nonnegative = {}, certificate found = {} for {:?}",
            verdicts[0],
            verdicts[1],
            verdicts[2],
            a.matrix()
        )));
    }

    let spectral = (a.dim() > 0).then(|| spectral_estimate(a));
    Ok(MMatrixReport {
        verdict: verdicts[0],
        dimension: a.dim(),
        minors: minors.minors,
        minors_positive: minors.all_positive,
        inverse_nonneg: inverse.nonnegative,
        inverse: inverse.inverse,
        certificate_x: certificate,
        spectral_estimate: spectral,
    })
}
