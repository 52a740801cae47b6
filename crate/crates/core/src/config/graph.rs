use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::ratmat::Rational;

use super::ConfigError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub label: String,
    pub self_intersection: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub multiplicity: u64,
}

/// Weighted dual graph of the exceptional curves of a surface resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct GraphDocument {
    pub format_version: String,
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl DualGraph {
    /// Vertices `E1..En` with the given self-intersections and simple
    /// edges given as index pairs.
    pub fn from_weights(weights: &[i64], edges: &[(usize, usize)]) -> Self {
        DualGraph {
            vertices: weights
                .iter()
                .enumerate()
                .map(|(k, &w)| Vertex { label: format!("E{}", k + 1), self_intersection: w.into() })
                .collect(),
            edges: edges.iter().map(|&(i, j)| Edge { i, j, multiplicity: 1 }).collect(),
        }
    }

    /// A linear chain of curves with self-intersections `-b_1, …, -b_k`.
    pub fn chain(b: &[i64]) -> Self {
        let weights: Vec<i64> = b.iter().map(|x| -x).collect();
        let edges: Vec<(usize, usize)> = (1..b.len()).map(|k| (k - 1, k)).collect();
        Self::from_weights(&weights, &edges)
    }

    /// The resolution chain of the cyclic quotient singularity `1/n(1, q)`,
    /// from the Hirzebruch-Jung expansion of `n/q`.
    pub fn cyclic_quotient(n: u64, q: u64) -> Result<Self, ConfigError> {
        Ok(Self::chain(&hirzebruch_jung_fraction(n, q)?))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::InvalidGraph(msg));
        for v in &self.vertices {
            if !v.self_intersection.is_negative() {
                return bad(format!(
                    "vertex {:?} has self-intersection {}, expected < 0",
                    v.label, v.self_intersection
                ));
            }
        }
        let n = self.vertices.len();
        let mut seen = HashSet::new();
        for e in &self.edges {
            if e.i >= n || e.j >= n {
                return bad(format!("edge ({}, {}) refers to a missing vertex", e.i, e.j));
            }
            if e.i == e.j {
                return bad(format!("self-loop at vertex {}", e.i));
            }
            if e.multiplicity == 0 {
                return bad(format!("edge ({}, {}) has multiplicity 0", e.i, e.j));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return bad(format!("duplicate edge between {} and {}", e.i, e.j));
            }
        }
        Ok(())
    }
}

/// Hirzebruch-Jung continued fraction `n/q = b_1 - 1/(b_2 - 1/(…))` with
/// every `b_i >= 2`, for coprime `0 < q < n`. `q = 1` gives `[n]`.
pub fn hirzebruch_jung_fraction(n: u64, q: u64) -> Result<Vec<i64>, ConfigError> {
    if q == 0 || q >= n.max(2) || num_integer::gcd(n, q) != 1 {
        return Err(ConfigError::InvalidGraph(format!(
            "need coprime 0 < q < n for a cyclic quotient, got n = {n}, q = {q}"
        )));
    }
    let (mut a, mut b) = (n, q);
    let mut out = Vec::new();
    while b != 0 {
        let c = a.div_ceil(b);
        out.push(c as i64);
        (a, b) = (b, c * b - a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hj_expansions() {
        assert_eq!(hirzebruch_jung_fraction(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(hirzebruch_jung_fraction(7, 3).unwrap(), vec![3, 2, 2]);
        assert_eq!(hirzebruch_jung_fraction(4, 1).unwrap(), vec![4]);
        assert_eq!(hirzebruch_jung_fraction(4, 3).unwrap(), vec![2, 2, 2]);
        assert!(hirzebruch_jung_fraction(6, 4).is_err());
        assert!(hirzebruch_jung_fraction(5, 5).is_err());
        assert!(hirzebruch_jung_fraction(5, 0).is_err());
    }

    #[test]
    fn chain_shape() {
        let g = DualGraph::cyclic_quotient(5, 2).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.vertices[0].self_intersection, -3);
        assert_eq!(g.vertices[1].self_intersection, -2);
        assert_eq!(g.edges, vec![Edge { i: 0, j: 1, multiplicity: 1 }]);
    }

    #[test]
    fn validation_errors() {
        assert!(DualGraph::from_weights(&[-2, 1], &[(0, 1)]).validate().is_err());
        assert!(DualGraph::from_weights(&[-2, -2], &[(0, 0)]).validate().is_err());
        assert!(DualGraph::from_weights(&[-2, -2], &[(0, 1), (1, 0)]).validate().is_err());
        assert!(DualGraph::from_weights(&[-2, -2], &[(0, 2)]).validate().is_err());
        let mut g = DualGraph::from_weights(&[-2, -2], &[(0, 1)]);
        g.edges[0].multiplicity = 0;
        assert!(g.validate().is_err());
        assert!(DualGraph::from_weights(&[-2, -2], &[(0, 1)]).validate().is_ok());
    }
}
