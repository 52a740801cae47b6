//! Rational pullback coefficients for an exceptional configuration.
//!
//! Given `Φ = (E_i · C_j)` and the numbers `λ_j = (D' · C_j)` of a strict
//! transform, the coefficients `m_i/n` of `f^*D = D' + (1/n) Σ m_i E_i` are
//! the unique solution of the row-vector system
//!
//! ```text
//! (m_1/n, …, m_r/n) · (-Φ) = (λ_1, …, λ_r)
//! ```
//!
//! which exists and is nonnegative once `A = -ᵗΦ` is certified to be an
//! invertible M-matrix. Every result is checked back against the projection
//! formula before it is returned.
//!
//! Supplied configurations are trusted to come from a morphism whose
//! exceptional locus is the equidimensional closed fiber; intersection data
//! alone cannot witness that.

mod config;
mod surface;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mmatrix::{as_z_matrix, is_invertible_m_matrix, MMatrixError, MMatrixReport};
use crate::ratmat::{lcm_of_denominators, RatError, RatVector, Rational};

pub use config::{DivisorInput, ExtraCurve, IntersectionConfig};
pub use surface::mumford_surface_pullback;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PullbackError {
    #[error("sign violation at ({row}, {col}): diagonal entries of phi must be < 0 and off-diagonal entries >= 0")]
    SignViolation { row: usize, col: usize },
    #[error("divisors {row} and {col} are declared to meet but phi[{row}][{col}] = 0")]
    AdjacencyMismatch { row: usize, col: usize },
    #[error("disconnected configuration ({components} components)")]
    DisconnectedConfiguration { components: usize },
    #[error("not an invertible M-matrix: -transpose(phi) has leading principal minors [{}]", join(.minors))]
    NotMMatrix { minors: Vec<Rational> },
    #[error("negative intersection number lambda[{0}]")]
    NegativeLambda(usize),
    #[error("phi is not symmetric")]
    NotSymmetric,
    #[error("phi is not negative definite: leading principal minors of -phi are [{}]", join(.minors))]
    NotNegativeDefinite { minors: Vec<Rational> },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("divisor index {index} out of range for {rank} divisors")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    MMatrix(#[from] MMatrixError),
    #[error(transparent)]
    Rat(#[from] RatError),
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Opt-in relaxations of the default contract.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PullbackOptions {
    /// Solve each connected component separately instead of refusing.
    pub allow_disconnected: bool,
    /// Accept negative `λ_j`; the result may then fail to be effective.
    pub allow_signed_lambda: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Connected components of the declared adjacency graph; a single block
    /// holding every divisor when no adjacency is given.
    pub components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveResidual {
    pub name: String,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackResult {
    /// `m_i / n` for each divisor.
    pub coefficients: RatVector,
    /// `n`: the lcm of the coefficient denominators.
    pub denominator: Rational,
    /// The integers `m_i`.
    pub numerators: RatVector,
    /// `m_i / (n n')`, the coefficients of `f^*D` proper.
    pub full_coefficients: RatVector,
    pub cartier_denominator: u64,
    pub mreport: MMatrixReport,
    /// `λ_j + Σ_i (m_i/n) Φ[i][j]` per chosen curve; all zero.
    pub projection_residuals: RatVector,
    pub extra_residuals: Vec<CurveResidual>,
    pub effectivity: bool,
    pub components: Vec<Vec<usize>>,
    /// Set by [`mumford_surface_pullback`] once the symmetric solve has
    /// been compared with the general one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric_path_agrees: Option<bool>,
}

/// Checks the sign pattern of `Φ`: negative diagonal, nonnegative
/// off-diagonal. With declared adjacency, off-diagonal entries must also be
/// positive exactly for meeting divisors, and the adjacency graph must be
/// connected unless `opts.allow_disconnected` is set.
pub fn validate_signs(
    cfg: &IntersectionConfig,
    opts: PullbackOptions,
) -> Result<ValidationReport, PullbackError> {
    let phi = cfg.phi();
    let r = cfg.rank();
    for row in 0..r {
        for col in 0..r {
            let x = phi.get(row, col);
            let ok = if row == col { x.is_negative() } else { !x.is_negative() };
            if !ok {
                return Err(PullbackError::SignViolation { row, col });
            }
        }
    }
    let Some(adj) = cfg.adjacency() else {
        let all: Vec<usize> = (0..r).collect();
        let components = if r == 0 { Vec::new() } else { vec![all] };
        return Ok(ValidationReport { components });
    };
    for row in 0..r {
        for col in 0..r {
            if row != col && adj[row][col] && phi.get(row, col).is_zero() {
                return Err(PullbackError::AdjacencyMismatch { row, col });
            }
        }
    }
    let components = connected_components(adj);
    if components.len() > 1 && !opts.allow_disconnected {
        return Err(PullbackError::DisconnectedConfiguration { components: components.len() });
    }
    Ok(ValidationReport { components })
}

fn connected_components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let r = adj.len();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for w in 0..r {
                if w != v && adj[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Builds `A = -ᵗΦ` and runs the M-matrix characterizations on it.
pub fn certify(cfg: &IntersectionConfig) -> Result<MMatrixReport, PullbackError> {
    let a = as_z_matrix(&cfg.m_matrix_candidate())?;
    Ok(is_invertible_m_matrix(&a)?)
}

/// `λ_j + Σ_i c_i Φ[i][j]` for every chosen curve `j`.
pub fn projection_residuals(
    cfg: &IntersectionConfig,
    lambda: &RatVector,
    coefficients: &RatVector,
) -> Result<RatVector, PullbackError> {
    let phi_part = cfg.phi().vec_mat(coefficients)?;
    Ok(lambda.add(&phi_part)?)
}

pub fn compute_pullback(
    cfg: &IntersectionConfig,
    d: &DivisorInput,
    opts: PullbackOptions,
) -> Result<PullbackResult, PullbackError> {
    d.check_against(cfg)?;
    let validation = validate_signs(cfg, opts)?;
    if !opts.allow_signed_lambda {
        if let Some(j) = d.lambda.iter().position(Rational::is_negative) {
            return Err(PullbackError::NegativeLambda(j));
        }
    }
    let mreport = certify(cfg)?;
    if !mreport.verdict {
        return Err(PullbackError::NotMMatrix { minors: mreport.minors.clone() });
    }

    let r = cfg.rank();
    let neg_phi = cfg.phi().neg();
    let mut coefficients = vec![Rational::zero(); r];
    for block in &validation.components {
        let sub = neg_phi.principal_submatrix(block);
        let lam: RatVector = block.iter().map(|&j| d.lambda[j].clone()).collect();
        let x = sub.solve_left(&lam).map_err(|e| match e {
            RatError::Singular => {
                PullbackError::Internal("certified configuration has a singular block".into())
            }
            other => other.into(),
        })?;
        for (&i, xi) in block.iter().zip(x.into_vec()) {
            coefficients[i] = xi;
        }
    }
    let coefficients = RatVector::from(coefficients);

    let projection_residuals = projection_residuals(cfg, &d.lambda, &coefficients)?;
    if !projection_residuals.is_zero() {
        return Err(PullbackError::Internal(format!(
            "nonzero projection residuals [{projection_residuals}]"
        )));
    }

    let effectivity = coefficients.all_nonnegative();
    if !effectivity && d.lambda.all_nonnegative() {
        return Err(PullbackError::Internal(
            "negative coefficient for nonnegative lambda on a certified configuration".into(),
        ));
    }

    let n = lcm_of_denominators(coefficients.iter());
    let denominator = Rational::from(n);
    let numerators = coefficients.scale(&denominator);
    let n_prime = Rational::from_integer(d.cartier_denominator);
    let full_coefficients = coefficients.scale(&n_prime.recip()?);

    let mut result = PullbackResult {
        coefficients,
        denominator,
        numerators,
        full_coefficients,
        cartier_denominator: d.cartier_denominator,
        mreport,
        projection_residuals,
        extra_residuals: Vec::new(),
        effectivity,
        components: validation.components,
        symmetric_path_agrees: None,
    };
    if let Some(extra_lambda) = &d.extra_lambda {
        let mut extra = Vec::with_capacity(extra_lambda.len());
        for (curve, lam) in cfg.extra_curves().iter().zip(extra_lambda.iter()) {
            let residual = verify_on_curve(cfg, &result, &curve.row, lam)?;
            extra.push(CurveResidual { name: curve.name.clone(), residual });
        }
        result.extra_residuals = extra;
    }
    Ok(result)
}

/// Residual of the projection formula on a further vertical curve with
/// intersection row `curve_row` and `(D' · C') = curve_lambda`, normalized
/// by `n`: `curve_lambda + Σ_i (m_i/n) curve_row[i]`. Zero means the
/// pullback is numerically trivial on the curve.
pub fn verify_on_curve(
    cfg: &IntersectionConfig,
    result: &PullbackResult,
    curve_row: &RatVector,
    curve_lambda: &Rational,
) -> Result<Rational, PullbackError> {
    let r = cfg.rank();
    if curve_row.len() != r {
        return Err(PullbackError::DimensionMismatch { expected: r, found: curve_row.len() });
    }
    Ok(curve_lambda + &result.coefficients.dot(curve_row)?)
}

/// The positive ratio `μ` with `curve_row = μ · (Φ[i][j])_i`, if one exists.
///
/// `None` means the curve's class is not a positive multiple of the chosen
/// curve `C_j` in the same divisor, which contradicts Picard number one.
pub fn check_curve_ratio(
    cfg: &IntersectionConfig,
    j: usize,
    curve_row: &RatVector,
) -> Result<Option<Rational>, PullbackError> {
    let r = cfg.rank();
    if j >= r {
        return Err(PullbackError::IndexOutOfRange { index: j, rank: r });
    }
    if curve_row.len() != r {
        return Err(PullbackError::DimensionMismatch { expected: r, found: curve_row.len() });
    }
    let chosen = cfg.phi().col(j);
    let mut mu: Option<Rational> = None;
    for (c, x) in chosen.iter().zip(curve_row.iter()) {
        if c.is_zero() {
            if !x.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let ratio = x.checked_div(c)?;
        match &mu {
            Some(m) if *m != ratio => return Ok(None),
            Some(_) => {}
            None => mu = Some(ratio),
        }
    }
    Ok(mu.filter(Rational::is_positive))
}

/// True when adding `delta` to any single coefficient breaks at least one
/// projection residual, i.e. the solution is locally unique.
pub fn uniqueness_probe(
    cfg: &IntersectionConfig,
    d: &DivisorInput,
    result: &PullbackResult,
    delta: &Rational,
) -> Result<bool, PullbackError> {
    if delta.is_zero() {
        return Ok(false);
    }
    for i in 0..cfg.rank() {
        let mut perturbed = result.coefficients.to_vec();
        perturbed[i] += delta;
        let residuals = projection_residuals(cfg, &d.lambda, &perturbed.into())?;
        if residuals.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A vertical curve together with its intersection number against the
/// divisor being pulled back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveIntersection {
    pub name: String,
    pub intersection: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SmallResolutionVerdict {
    /// No exceptional divisor, yet some vertical curve meets the divisor
    /// nontrivially: nothing can correct the strict transform.
    NoRationalPullback { witness: CurveIntersection },
    /// No exceptional divisor and every supplied curve is numerically
    /// trivial: the pullback is the strict transform.
    TriviallyAdmits,
    /// There are exceptional divisors; use [`compute_pullback`].
    NotApplicable,
}

pub fn detect_small_resolution(
    cfg: &IntersectionConfig,
    curves: &[CurveIntersection],
) -> SmallResolutionVerdict {
    if cfg.rank() > 0 {
        return SmallResolutionVerdict::NotApplicable;
    }
    match curves.iter().find(|c| !c.intersection.is_zero()) {
        Some(c) => SmallResolutionVerdict::NoRationalPullback { witness: c.clone() },
        None => SmallResolutionVerdict::TriviallyAdmits,
    }
}

/// Pairs each extra curve of `cfg` with its entry of `d.extra_lambda`.
pub fn extra_curve_intersections(cfg: &IntersectionConfig, d: &DivisorInput) -> Vec<CurveIntersection> {
    match &d.extra_lambda {
        Some(extra) => cfg
            .extra_curves()
            .iter()
            .zip(extra.iter())
            .map(|(c, l)| CurveIntersection { name: c.name.clone(), intersection: l.clone() })
            .collect(),
        None => Vec::new(),
    }
}
