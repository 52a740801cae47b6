use crate::ratmat::{Ldl, Rational};

use super::{compute_pullback, DivisorInput, IntersectionConfig, PullbackError, PullbackOptions, PullbackResult};

/// Surface case: the chosen curves are the divisors themselves, so `Φ` is
/// the symmetric matrix `(E_i · E_j)` and must be negative definite.
///
/// The coefficients are solved twice: through an `LDLᵀ` factorization of
/// `-Φ` and through [`compute_pullback`]. The two must agree exactly.
pub fn mumford_surface_pullback(
    cfg: &IntersectionConfig,
    d: &DivisorInput,
    opts: PullbackOptions,
) -> Result<PullbackResult, PullbackError> {
    d.check_against(cfg)?;
    let phi = cfg.phi();
    if !phi.is_symmetric() {
        return Err(PullbackError::NotSymmetric);
    }
    let neg_phi = phi.neg();
    let minors: Vec<Rational> = (1..=cfg.rank())
        .map(|k| neg_phi.leading_submatrix(k).det())
        .collect::<Result<_, _>>()?;
    if !minors.iter().all(Rational::is_positive) {
        return Err(PullbackError::NotNegativeDefinite { minors });
    }

    // -Φ is symmetric, so x·(-Φ) = λ is the same system as (-Φ)·x = λ.
    let symmetric = Ldl::factor(&neg_phi)
        .and_then(|f| f.solve(&d.lambda))
        .map_err(|e| PullbackError::Internal(format!("LDL solve failed on a definite matrix: {e}")))?;

    let mut result = compute_pullback(cfg, d, opts)?;
    if result.coefficients != symmetric {
        return Err(PullbackError::Internal(format!(
            "symmetric solve [{symmetric}] disagrees with general solve [{}]",
            result.coefficients
        )));
    }
    result.symmetric_path_agrees = Some(true);
    Ok(result)
}
