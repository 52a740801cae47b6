use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{dimension_cap, lcm_of_denominators, RatError, Rational};

/// A vector of exact rationals; row or column orientation is given by the
/// operation it is used with.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        RatVector(vec![Rational::one(); n])
    }

    /// The `k`-th standard basis vector of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Rational::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector, RatError> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> Result<RatVector, RatError> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> RatVector {
        self.0.iter().map(|x| x * c).collect()
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational, RatError> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(Rational::is_positive)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }
}

impl Deref for RatVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), RatError> {
    if expected == found {
        Ok(())
    } else {
        Err(RatError::DimensionMismatch { expected, found })
    }
}

fn check_cap(rows: usize, cols: usize) -> Result<(), RatError> {
    let cap = dimension_cap();
    let dim = rows.max(cols);
    if dim > cap {
        Err(RatError::TooLarge { dim, cap })
    } else {
        Ok(())
    }
}

/// Dense row-major matrix of exact rationals.
///
/// Values are immutable: every operation returns a fresh matrix. Serialized
/// as an array of rows, each an array of `"p/q"` strings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rational>>", into = "Vec<Vec<Rational>>")]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl TryFrom<Vec<Vec<Rational>>> for RatMatrix {
    type Error = RatError;
    fn try_from(rows: Vec<Vec<Rational>>) -> Result<Self, RatError> {
        RatMatrix::from_rows(rows)
    }
}

impl From<RatMatrix> for Vec<Vec<Rational>> {
    fn from(m: RatMatrix) -> Self {
        if m.cols == 0 {
            return vec![Vec::new(); m.rows];
        }
        m.entries.chunks(m.cols).map(<[Rational]>::to_vec).collect()
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, RatError> {
        check_cap(rows, cols)?;
        check_len(rows * cols, entries.len())?;
        Ok(RatMatrix { rows, cols, entries })
    }

    /// Builds a matrix from its rows. An empty list is the 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, RatError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(RatError::Ragged { row, expected: cols, found: r.len() });
            }
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, RatError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&RatVector::ones(n))
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.entries[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> RatVector {
        self.entries[i * self.cols..(i + 1) * self.cols].iter().cloned().collect()
    }

    pub fn col(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn diag(&self) -> RatVector {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.clone().into()
    }

    /// Returns a copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: Rational) -> Self {
        let mut m = self.clone();
        m.entries[i * self.cols + j] = value;
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &RatMatrix) -> Result<Self, RatError> {
        check_len(self.rows, other.rows)?;
        check_len(self.cols, other.cols)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<Self, RatError> {
        self.add(&other.neg())
    }

    pub fn mat_mul(&self, other: &RatMatrix) -> Result<Self, RatError> {
        check_len(self.cols, other.rows)?;
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    /// `M · v` with `v` a column vector.
    pub fn mat_vec(&self, v: &RatVector) -> Result<RatVector, RatError> {
        check_len(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// `v · M` with `v` a row vector.
    pub fn vec_mat(&self, v: &RatVector) -> Result<RatVector, RatError> {
        check_len(self.rows, v.len())?;
        Ok((0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect())
    }

    /// The square submatrix on the given row/column indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |a, b| self.get(indices[a], indices[b]).clone())
    }

    /// The top-left `k x k` block.
    pub fn leading_submatrix(&self, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| self.get(i, j).clone())
    }

    fn require_square(&self) -> Result<usize, RatError> {
        if !self.is_square() {
            return Err(RatError::NonSquare { rows: self.rows, cols: self.cols });
        }
        check_cap(self.rows, self.cols)?;
        Ok(self.rows)
    }

    /// Exact determinant.
    ///
    /// Each row is scaled by the lcm of its denominators to give an integer
    /// matrix, whose determinant is taken by Bareiss fraction-free
    /// elimination; the row scalings are divided back out at the end.
    pub fn det(&self) -> Result<Rational, RatError> {
        let n = self.require_square()?;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let l = lcm_of_denominators(row);
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        let det = bareiss_det(a);
        Ok(Rational::new(det, scale).expect("row scalings are positive"))
    }

    /// Exact inverse by Gauss-Jordan elimination, pivoting on the first
    /// nonzero entry of each column.
    pub fn inverse(&self) -> Result<Self, RatError> {
        let n = self.require_square()?;
        let mut aug = Augmented::new(self, Self::identity(n));
        aug.reduce()?;
        Ok(aug.rhs)
    }

    /// Solves `M · x = b` for the column vector `x`.
    pub fn solve_right(&self, b: &RatVector) -> Result<RatVector, RatError> {
        let n = self.require_square()?;
        check_len(n, b.len())?;
        let rhs = RatMatrix { rows: n, cols: 1, entries: b.to_vec() };
        let mut aug = Augmented::new(self, rhs);
        aug.reduce()?;
        Ok(aug.rhs.entries.into())
    }

    /// Solves `x · M = v` for the row vector `x`.
    pub fn solve_left(&self, v: &RatVector) -> Result<RatVector, RatError> {
        self.transpose().solve_right(v)
    }
}

/// Integer determinant by Bareiss elimination; every division is exact.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

struct Augmented {
    lhs: RatMatrix,
    rhs: RatMatrix,
}

impl Augmented {
    fn new(lhs: &RatMatrix, rhs: RatMatrix) -> Self {
        Augmented { lhs: lhs.clone(), rhs }
    }

    fn swap_rows(m: &mut RatMatrix, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..m.cols {
            m.entries.swap(a * m.cols + j, b * m.cols + j);
        }
    }

    /// Reduces `lhs` to the identity, applying the same row operations to `rhs`.
    fn reduce(&mut self) -> Result<(), RatError> {
        let n = self.lhs.rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !self.lhs.get(r, c).is_zero()).ok_or(RatError::Singular)?;
            Self::swap_rows(&mut self.lhs, c, p);
            Self::swap_rows(&mut self.rhs, c, p);
            let inv = self.lhs.get(c, c).recip()?;
            for m in [&mut self.lhs, &mut self.rhs] {
                for j in 0..m.cols {
                    m.entries[c * m.cols + j] *= &inv;
                }
            }
            for r in 0..n {
                if r == c || self.lhs.get(r, c).is_zero() {
                    continue;
                }
                let factor = self.lhs.get(r, c).clone();
                for m in [&mut self.lhs, &mut self.rhs] {
                    for j in 0..m.cols {
                        let t = &factor * &m.entries[c * m.cols + j];
                        m.entries[r * m.cols + j] -= &t;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}
