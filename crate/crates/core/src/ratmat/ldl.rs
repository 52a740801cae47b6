use super::{RatError, RatMatrix, RatVector, Rational};

/// `A = L · D · Lᵀ` for a symmetric matrix whose leading principal minors
/// are all nonzero. `L` is unit lower triangular and `D` diagonal.
///
/// The k-th pivot `D[k]` is the ratio of the k-th and (k-1)-th leading
/// principal minors, so all pivots are positive exactly when `A` is
/// positive definite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ldl {
    lower: RatMatrix,
    pivots: RatVector,
}

impl Ldl {
    /// Factors a symmetric matrix without pivoting. Fails with
    /// [`RatError::Singular`] on a zero pivot.
    pub fn factor(a: &RatMatrix) -> Result<Self, RatError> {
        if !a.is_square() {
            return Err(RatError::NonSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut l = vec![vec![Rational::zero(); n]; n];
        let mut d: Vec<Rational> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = a.get(j, j).clone();
            for k in 0..j {
                dj -= &(&l[j][k] * &l[j][k] * &d[k]);
            }
            if dj.is_zero() {
                return Err(RatError::Singular);
            }
            l[j][j] = Rational::one();
            for i in j + 1..n {
                let mut s = a.get(i, j).clone();
                for k in 0..j {
                    s -= &(&l[i][k] * &l[j][k] * &d[k]);
                }
                l[i][j] = s.checked_div(&dj)?;
            }
            d.push(dj);
        }
        Ok(Ldl { lower: RatMatrix::from_rows(l)?, pivots: d.into() })
    }

    pub fn pivots(&self) -> &RatVector {
        &self.pivots
    }

    pub fn lower(&self) -> &RatMatrix {
        &self.lower
    }

    pub fn is_positive_definite(&self) -> bool {
        self.pivots.all_positive()
    }

    /// Solves `A · x = b` by forward substitution, diagonal scaling and
    /// back substitution.
    pub fn solve(&self, b: &RatVector) -> Result<RatVector, RatError> {
        let n = self.pivots.len();
        if b.len() != n {
            return Err(RatError::DimensionMismatch { expected: n, found: b.len() });
        }
        let l = &self.lower;
        let mut y: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = b[i].clone();
            for (k, yk) in y.iter().enumerate() {
                s -= &(l.get(i, k) * yk);
            }
            y.push(s);
        }
        let z: Vec<Rational> = y
            .iter()
            .zip(self.pivots.iter())
            .map(|(yi, di)| yi.checked_div(di))
            .collect::<Result<_, _>>()?;
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut s = z[i].clone();
            for k in i + 1..n {
                s -= &(l.get(k, i) * &x[k]);
            }
            x[i] = s;
        }
        Ok(x.into())
    }
}
