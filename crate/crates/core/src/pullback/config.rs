use serde::{Deserialize, Serialize};

use crate::ratmat::{RatMatrix, RatVector};

use super::PullbackError;

/// A further vertical curve, used to check the pullback beyond the chosen
/// curves. `row[i]` is its intersection number with the i-th divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraCurve {
    pub name: String,
    /// Index of the divisor containing the curve, if it lies on one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host: Option<usize>,
    pub row: RatVector,
}

/// Intersection data of an exceptional configuration.
///
/// `phi[i][j]` is the intersection number of the i-th exceptional divisor
/// with the curve chosen inside the j-th divisor: rows index divisors,
/// columns index curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionConfig {
    divisors: Vec<String>,
    chosen_curves: Vec<String>,
    phi: RatMatrix,
    extra_curves: Vec<ExtraCurve>,
    adjacency: Option<Vec<Vec<bool>>>,
}

impl IntersectionConfig {
    pub fn new(
        divisors: Vec<String>,
        chosen_curves: Vec<String>,
        phi: RatMatrix,
        extra_curves: Vec<ExtraCurve>,
        adjacency: Option<Vec<Vec<bool>>>,
    ) -> Result<Self, PullbackError> {
        let cfg = IntersectionConfig { divisors, chosen_curves, phi, extra_curves, adjacency };
        cfg.check_invariants()?;
        Ok(cfg)
    }

    /// Labels divisors `E1..Er` and curves `C1..Cr`.
    pub fn from_phi(phi: RatMatrix) -> Result<Self, PullbackError> {
        let r = phi.rows();
        Self::new(
            (1..=r).map(|i| format!("E{i}")).collect(),
            (1..=r).map(|i| format!("C{i}")).collect(),
            phi,
            Vec::new(),
            None,
        )
    }

    pub fn with_adjacency(self, adjacency: Vec<Vec<bool>>) -> Result<Self, PullbackError> {
        Self::new(self.divisors, self.chosen_curves, self.phi, self.extra_curves, Some(adjacency))
    }

    pub fn with_extra_curves(self, extra_curves: Vec<ExtraCurve>) -> Result<Self, PullbackError> {
        Self::new(self.divisors, self.chosen_curves, self.phi, extra_curves, self.adjacency)
    }

    fn check_invariants(&self) -> Result<(), PullbackError> {
        let fail = |msg: String| Err(PullbackError::InvariantViolation(msg));
        let r = self.divisors.len();
        if self.phi.rows() != r || self.phi.cols() != r {
            return fail(format!(
                "phi must be {r}x{r} to match {r} divisors, found {}x{}",
                self.phi.rows(),
                self.phi.cols()
            ));
        }
        if self.chosen_curves.len() != r {
            return fail(format!(
                "expected {r} chosen curves, found {}",
                self.chosen_curves.len()
            ));
        }
        if let Some(adj) = &self.adjacency {
            if adj.len() != r || adj.iter().any(|row| row.len() != r) {
                return fail(format!("adjacency must be {r}x{r}"));
            }
            for i in 0..r {
                for j in 0..r {
                    if adj[i][j] != adj[j][i] {
                        return fail(format!("adjacency is not symmetric at ({i}, {j})"));
                    }
                    if i != j && !adj[i][j] && !self.phi.get(i, j).is_zero() {
                        return fail(format!(
                            "phi[{i}][{j}] = {} but divisors {i} and {j} are declared disjoint",
                            self.phi.get(i, j)
                        ));
                    }
                }
            }
        }
        for c in &self.extra_curves {
            if c.row.len() != r {
                return fail(format!(
                    "extra curve {:?} has {} intersection numbers, expected {r}",
                    c.name,
                    c.row.len()
                ));
            }
            if let Some(h) = c.host {
                if h >= r {
                    return fail(format!("extra curve {:?} has host index {h} >= {r}", c.name));
                }
            }
        }
        Ok(())
    }

    /// Number of exceptional divisors.
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn divisors(&self) -> &[String] {
        &self.divisors
    }

    pub fn chosen_curves(&self) -> &[String] {
        &self.chosen_curves
    }

    pub fn phi(&self) -> &RatMatrix {
        &self.phi
    }

    pub fn extra_curves(&self) -> &[ExtraCurve] {
        &self.extra_curves
    }

    pub fn adjacency(&self) -> Option<&[Vec<bool>]> {
        self.adjacency.as_deref()
    }

    /// `A = -ᵗΦ`.
    pub fn m_matrix_candidate(&self) -> RatMatrix {
        self.phi.transpose().neg()
    }
}

/// Intersection numbers of the strict transform `D'` of a divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorInput {
    /// `lambda[j] = (D' · C_j)`.
    pub lambda: RatVector,
    /// `(D' · C')` for each extra curve of the configuration, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_lambda: Option<RatVector>,
    /// Positive integer `n'` making `n'D'` Cartier.
    #[serde(default = "one")]
    pub cartier_denominator: u64,
}

fn one() -> u64 {
    1
}

impl DivisorInput {
    pub fn new(lambda: RatVector) -> Self {
        DivisorInput { lambda, extra_lambda: None, cartier_denominator: 1 }
    }

    pub fn with_extra_lambda(mut self, extra: RatVector) -> Self {
        self.extra_lambda = Some(extra);
        self
    }

    pub fn with_cartier_denominator(mut self, n: u64) -> Self {
        self.cartier_denominator = n;
        self
    }

    pub fn check_against(&self, cfg: &IntersectionConfig) -> Result<(), PullbackError> {
        let r = cfg.rank();
        if self.lambda.len() != r {
            return Err(PullbackError::DimensionMismatch { expected: r, found: self.lambda.len() });
        }
        if self.cartier_denominator == 0 {
            return Err(PullbackError::InvariantViolation(
                "cartier_denominator must be at least 1".into(),
            ));
        }
        if let Some(extra) = &self.extra_lambda {
            let k = cfg.extra_curves().len();
            if extra.len() != k {
                return Err(PullbackError::DimensionMismatch { expected: k, found: extra.len() });
            }
        }
        Ok(())
    }
}
