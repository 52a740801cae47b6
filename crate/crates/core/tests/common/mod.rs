//! Test-only oracles that share no code with the library's elimination
//! routines.

#![allow(dead_code)]

use ratpull::{RatMatrix, RatVector, Rational};

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz_det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = Rational::one();
        for (i, &pi) in p.iter().enumerate() {
            if a[i][pi].is_zero() {
                return;
            }
            term = term * &a[i][pi];
        }
        if inversions % 2 == 0 {
            total = &total + &term;
        } else {
            total = &total - &term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Solves the row-vector system `x · (-Φ) = λ` by Cramer's rule on the
/// equivalent column system `(-ᵗΦ) x = λ`.
pub fn cramer_pullback(phi: &RatMatrix, lambda: &RatVector) -> Option<Vec<Rational>> {
    let n = phi.rows();
    let a: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| -phi.get(j, i)).collect()).collect();
    let d = leibniz_det(&a);
    if d.is_zero() {
        return None;
    }
    Some(
        (0..n)
            .map(|k| {
                let mut ak = a.clone();
                for (i, row) in ak.iter_mut().enumerate() {
                    row[k] = lambda[i].clone();
                }
                leibniz_det(&ak).checked_div(&d).unwrap()
            })
            .collect(),
    )
}
