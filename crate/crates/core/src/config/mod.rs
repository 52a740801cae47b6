//! Document formats, dual graphs and the builtin example library.
//!
//! All documents are JSON objects carrying `"format_version": "1"`.
//! Rationals are written as `"p/q"` strings (bare JSON integers are also
//! accepted on input); floats are rejected so nothing inexact can enter.
//!
//! A configuration document:
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "divisors": ["E1", "E2"],
//!   "curves": ["C1", "C2"],
//!   "phi": [["-2", "1"], ["1", "-2"]],
//!   "adjacency": [[true, true], [true, true]],
//!   "extra_curves": [{ "name": "C1'", "host": 0, "row": ["-4", "2"] }]
//! }
//! ```
//!
//! `curves`, `adjacency` and `extra_curves` are optional.

mod graph;
mod library;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pullback::{DivisorInput, ExtraCurve, IntersectionConfig, PullbackError};
use crate::ratmat::{RatMatrix, RatVector, Rational};

pub use graph::{hirzebruch_jung_fraction, DualGraph, Edge, Vertex};
pub use library::{
    ade_graph, builtin_examples, find_example, run_example, ExampleEntry, ExampleOutcome, Expected,
};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {0:?} (expected \"1\")")]
    UnsupportedVersion(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

impl From<PullbackError> for ConfigError {
    fn from(e: PullbackError) -> Self {
        match e {
            PullbackError::InvariantViolation(msg) => ConfigError::InvariantViolation(msg),
            other => ConfigError::InvariantViolation(other.to_string()),
        }
    }
}

fn check_version(v: &str) -> Result<(), ConfigError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(ConfigError::UnsupportedVersion(v.to_string()))
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    Ok(serde_json::from_str(text)?)
}

fn to_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn matrix_from_rows(name: &str, rows: Vec<Vec<Rational>>) -> Result<RatMatrix, ConfigError> {
    RatMatrix::from_rows(rows).map_err(|e| ConfigError::InvariantViolation(format!("{name}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub format_version: String,
    pub divisors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curves: Option<Vec<String>>,
    pub phi: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_curves: Option<Vec<ExtraCurve>>,
}

impl ConfigDocument {
    pub fn into_config(self) -> Result<IntersectionConfig, ConfigError> {
        check_version(&self.format_version)?;
        let phi = matrix_from_rows("phi", self.phi)?;
        let curves = self
            .curves
            .unwrap_or_else(|| (1..=self.divisors.len()).map(|i| format!("C{i}")).collect());
        Ok(IntersectionConfig::new(
            self.divisors,
            curves,
            phi,
            self.extra_curves.unwrap_or_default(),
            self.adjacency,
        )?)
    }

    pub fn from_config(cfg: &IntersectionConfig) -> Self {
        ConfigDocument {
            format_version: FORMAT_VERSION.to_string(),
            divisors: cfg.divisors().to_vec(),
            curves: Some(cfg.chosen_curves().to_vec()),
            phi: cfg.phi().to_rows(),
            adjacency: cfg.adjacency().map(<[Vec<bool>]>::to_vec),
            extra_curves: (!cfg.extra_curves().is_empty()).then(|| cfg.extra_curves().to_vec()),
        }
    }
}

pub fn load_config(text: &str) -> Result<IntersectionConfig, ConfigError> {
    parse::<ConfigDocument>(text)?.into_config()
}

pub fn save_config(cfg: &IntersectionConfig) -> String {
    to_pretty(&ConfigDocument::from_config(cfg))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDocument {
    pub format_version: String,
    pub lambda: RatVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_lambda: Option<RatVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartier_denominator: Option<u64>,
}

pub fn load_divisor(text: &str) -> Result<DivisorInput, ConfigError> {
    let doc: DivisorDocument = parse(text)?;
    check_version(&doc.format_version)?;
    let n = doc.cartier_denominator.unwrap_or(1);
    if n == 0 {
        return Err(ConfigError::InvariantViolation(
            "cartier_denominator must be at least 1".into(),
        ));
    }
    Ok(DivisorInput { lambda: doc.lambda, extra_lambda: doc.extra_lambda, cartier_denominator: n })
}

pub fn save_divisor(d: &DivisorInput) -> String {
    to_pretty(&DivisorDocument {
        format_version: FORMAT_VERSION.to_string(),
        lambda: d.lambda.clone(),
        extra_lambda: d.extra_lambda.clone(),
        cartier_denominator: Some(d.cartier_denominator),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub format_version: String,
    pub matrix: Vec<Vec<Rational>>,
}

/// What `check-mmatrix` style callers can be handed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSource {
    /// A bare square matrix, taken as `A` itself.
    Matrix(RatMatrix),
    /// A configuration, from which `A = -ᵗΦ` is derived.
    Config(IntersectionConfig),
}

impl MatrixSource {
    pub fn m_matrix_candidate(&self) -> RatMatrix {
        match self {
            MatrixSource::Matrix(m) => m.clone(),
            MatrixSource::Config(c) => c.m_matrix_candidate(),
        }
    }
}

/// Reads either a `{"matrix": …}` document or a configuration document.
pub fn load_matrix_or_config(text: &str) -> Result<MatrixSource, ConfigError> {
    let value: serde_json::Value = parse(text)?;
    if value.get("matrix").is_some() {
        let doc: MatrixDocument = parse(text)?;
        check_version(&doc.format_version)?;
        let m = matrix_from_rows("matrix", doc.matrix)?;
        if !m.is_square() {
            return Err(ConfigError::InvariantViolation(format!(
                "matrix must be square, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(MatrixSource::Matrix(m))
    } else {
        load_config(text).map(MatrixSource::Config)
    }
}

pub fn load_graph(text: &str) -> Result<DualGraph, ConfigError> {
    let doc: graph::GraphDocument = parse(text)?;
    check_version(&doc.format_version)?;
    let g = DualGraph { vertices: doc.vertices, edges: doc.edges };
    g.validate()?;
    Ok(g)
}

pub fn save_graph(g: &DualGraph) -> String {
    to_pretty(&graph::GraphDocument {
        format_version: FORMAT_VERSION.to_string(),
        vertices: g.vertices.clone(),
        edges: g.edges.clone(),
    })
}

/// Turns the dual graph of a surface resolution into a configuration:
/// `Φ[i][i]` is the self-intersection of the i-th curve, `Φ[i][j]` the edge
/// multiplicity (0 without an edge), and each divisor is its own chosen
/// curve.
pub fn graph_to_config(g: &DualGraph) -> Result<IntersectionConfig, ConfigError> {
    g.validate()?;
    let n = g.vertices.len();
    let mut phi: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); n];
            row[i] = g.vertices[i].self_intersection.clone();
            row
        })
        .collect();
    let mut adjacency: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    for e in &g.edges {
        let m = Rational::from_integer(e.multiplicity);
        phi[e.i][e.j] = m.clone();
        phi[e.j][e.i] = m;
        adjacency[e.i][e.j] = true;
        adjacency[e.j][e.i] = true;
    }
    let labels: Vec<String> = g.vertices.iter().map(|v| v.label.clone()).collect();
    Ok(IntersectionConfig::new(
        labels.clone(),
        labels,
        matrix_from_rows("phi", phi)?,
        Vec::new(),
        Some(adjacency),
    )?)
}

#[cfg(test)]
mod tests;
