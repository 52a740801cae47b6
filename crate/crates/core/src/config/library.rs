//! Builtin golden examples.
//!
//! Expected coefficients were computed with a Cramer's-rule oracle that
//! shares no code with the elimination routines in `ratmat`; the same
//! oracle is re-run against this table in the crate's integration tests.

use serde::{Deserialize, Serialize};

use crate::pullback::{
    compute_pullback, detect_small_resolution, extra_curve_intersections, mumford_surface_pullback,
    DivisorInput, ExtraCurve, IntersectionConfig, PullbackError, PullbackOptions,
    SmallResolutionVerdict,
};
use crate::ratmat::{RatMatrix, RatVector, Rational};

use super::{graph_to_config, ConfigError, DualGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expected {
    Coefficients(RatVector),
    NoRationalPullback,
    DisconnectedConfiguration,
    NotMMatrix,
    SignViolation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleEntry {
    pub name: String,
    pub provenance: String,
    pub config: IntersectionConfig,
    pub divisor: DivisorInput,
    /// Present for surface examples built from a dual graph.
    pub graph: Option<DualGraph>,
    pub expected: Expected,
}

impl ExampleEntry {
    fn new(
        name: &str,
        provenance: &str,
        config: IntersectionConfig,
        divisor: DivisorInput,
        graph: Option<DualGraph>,
        expected: Expected,
    ) -> Result<Self, ConfigError> {
        divisor.check_against(&config)?;
        if let Expected::Coefficients(m) = &expected {
            // expected · (-Φ) must reproduce λ exactly.
            let lhs = config
                .phi()
                .neg()
                .vec_mat(m)
                .map_err(|e| ConfigError::InvariantViolation(format!("{name}: {e}")))?;
            if lhs != divisor.lambda {
                return Err(ConfigError::InvariantViolation(format!(
                    "{name}: expected coefficients give [{lhs}] instead of lambda [{}]",
                    divisor.lambda
                )));
            }
        }
        Ok(ExampleEntry {
            name: name.to_string(),
            provenance: provenance.to_string(),
            config,
            divisor,
            graph,
            expected,
        })
    }

    pub fn is_surface(&self) -> bool {
        self.graph.is_some()
    }
}

fn vec_of(xs: &[&str]) -> RatVector {
    xs.iter().map(|s| s.parse::<Rational>().expect("literal rational")).collect()
}

fn surface(
    name: &str,
    provenance: &str,
    graph: DualGraph,
    lambda: RatVector,
    expected: &[&str],
) -> Result<ExampleEntry, ConfigError> {
    let config = graph_to_config(&graph)?;
    ExampleEntry::new(
        name,
        provenance,
        config,
        DivisorInput::new(lambda),
        Some(graph),
        Expected::Coefficients(vec_of(expected)),
    )
}

fn from_phi(rows: &[&[i64]]) -> Result<IntersectionConfig, ConfigError> {
    let phi = RatMatrix::from_i64_rows(rows)
        .map_err(|e| ConfigError::InvariantViolation(e.to_string()))?;
    Ok(IntersectionConfig::from_phi(phi)?)
}

/// Dynkin graphs with every vertex a (-2)-curve. The E-series hangs the
/// short arm off vertex 2 (E6, E7) or vertex 4 (E8) of the long chain.
pub fn ade_graph(name: &str) -> Option<DualGraph> {
    let chain = |n: usize| -> Vec<(usize, usize)> { (1..n).map(|k| (k - 1, k)).collect() };
    let with_arm = |n: usize, at: usize| {
        let mut e = chain(n - 1);
        e.push((at, n - 1));
        e
    };
    let (n, edges) = match name {
        "A1" => (1, Vec::new()),
        "A2" => (2, chain(2)),
        "A3" => (3, chain(3)),
        "D4" => (4, vec![(0, 1), (0, 2), (0, 3)]),
        "E6" => (6, with_arm(6, 2)),
        "E7" => (7, with_arm(7, 2)),
        "E8" => (8, with_arm(8, 4)),
        _ => return None,
    };
    Some(DualGraph::from_weights(&vec![-2; n], &edges))
}

fn build() -> Result<Vec<ExampleEntry>, ConfigError> {
    let mut out = Vec::new();
    let ade = |name: &str| ade_graph(name).expect("known ADE name");

    out.push(surface("A1", "rational double point A1 (node); lambda = e1", ade("A1"), RatVector::unit(1, 0), &["1/2"])?);

    let a2_graph = ade("A2");
    let a2 = graph_to_config(&a2_graph)?.with_extra_curves(vec![ExtraCurve {
        name: "C1'".into(),
        host: Some(0),
        row: RatVector::from_i64(&[-4, 2]),
    }])?;
    out.push(ExampleEntry::new(
        "A2",
        "rational double point A2; lambda = e1; extra curve of class 2[C1]",
        a2,
        DivisorInput::new(RatVector::unit(2, 0)).with_extra_lambda(RatVector::from_i64(&[2])),
        Some(a2_graph),
        Expected::Coefficients(vec_of(&["2/3", "1/3"])),
    )?);

    out.push(surface("A3", "rational double point A3; lambda = e1", ade("A3"), RatVector::unit(3, 0), &["3/4", "1/2", "1/4"])?);
    out.push(surface("D4", "rational double point D4, central vertex first; lambda = e1", ade("D4"), RatVector::unit(4, 0), &["2", "1", "1", "1"])?);
    out.push(surface("E6", "rational double point E6; lambda = e1", ade("E6"), RatVector::unit(6, 0), &["4/3", "5/3", "2", "4/3", "2/3", "1"])?);
    out.push(surface("E7", "rational double point E7; lambda = e1", ade("E7"), RatVector::unit(7, 0), &["2", "3", "4", "3", "2", "1", "2"])?);
    out.push(surface("E8", "rational double point E8; lambda = e1", ade("E8"), RatVector::unit(8, 0), &["2", "3", "4", "5", "6", "4", "2", "3"])?);

    for n in 2..=10u64 {
        let expected = format!("1/{n}");
        out.push(surface(
            &format!("minus-{n}-curve"),
            &format!("cyclic quotient 1/{n}(1,1): a single (-{n})-curve; lambda = e1"),
            DualGraph::cyclic_quotient(n, 1)?,
            RatVector::unit(1, 0),
            &[&expected],
        )?);
    }

    out.push(surface(
        "HJ-5-2",
        "cyclic quotient 1/5(1,2), chain [3,2] from 5/2 = 3 - 1/2; lambda = e1",
        DualGraph::cyclic_quotient(5, 2)?,
        RatVector::unit(2, 0),
        &["2/5", "1/5"],
    )?);

    out.push(ExampleEntry::new(
        "nonsymmetric",
        "non-symmetric Phi = [[-2,3],[1,-4]]; A = -transpose(Phi) = [[2,-1],[-3,4]]; lambda = (1,1)",
        from_phi(&[&[-2, 3], &[1, -4]])?,
        DivisorInput::new(RatVector::from_i64(&[1, 1])),
        None,
        Expected::Coefficients(vec_of(&["1", "1"])),
    )?);

    out.push(ExampleEntry::new(
        "disconnected",
        "two disjoint curves (-2) and (-3); must be refused as disconnected",
        from_phi(&[&[-2, 0], &[0, -3]])?.with_adjacency(vec![vec![true, false], vec![false, true]])?,
        DivisorInput::new(RatVector::from_i64(&[1, 1])),
        None,
        Expected::DisconnectedConfiguration,
    )?);

    out.push(ExampleEntry::new(
        "conifold",
        "small resolution of xy = uv: no exceptional divisor, and the exceptional line C has (L.C) = 1",
        IntersectionConfig::from_phi(RatMatrix::zeros(0, 0))?.with_extra_curves(vec![ExtraCurve {
            name: "C".into(),
            host: None,
            row: RatVector::default(),
        }])?,
        DivisorInput::new(RatVector::default()).with_extra_lambda(RatVector::from_i64(&[1])),
        None,
        Expected::NoRationalPullback,
    )?);

    out.push(ExampleEntry::new(
        "indefinite",
        "symmetric Phi = [[-1,2],[2,-1]] is indefinite; -transpose(Phi) has minor -3",
        from_phi(&[&[-1, 2], &[2, -1]])?,
        DivisorInput::new(RatVector::from_i64(&[1, 0])),
        None,
        Expected::NotMMatrix,
    )?);

    out.push(ExampleEntry::new(
        "sign-violation",
        "Phi = [[-2,-1],[1,-2]] has a negative off-diagonal entry",
        from_phi(&[&[-2, -1], &[1, -2]])?,
        DivisorInput::new(RatVector::from_i64(&[1, 0])),
        None,
        Expected::SignViolation,
    )?);

    Ok(out)
}

/// The golden example library. Every entry's expected coefficients have
/// been checked against its lambda.
pub fn builtin_examples() -> Vec<ExampleEntry> {
    build().expect("builtin examples are consistent")
}

pub fn find_example(name: &str) -> Option<ExampleEntry> {
    builtin_examples().into_iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Recomputes an example and compares it exactly with its expectation.
/// Surface examples go through the symmetric path.
pub fn run_example(entry: &ExampleEntry) -> ExampleOutcome {
    let opts = PullbackOptions::default();
    let compute = || {
        if entry.is_surface() {
            mumford_surface_pullback(&entry.config, &entry.divisor, opts)
        } else {
            compute_pullback(&entry.config, &entry.divisor, opts)
        }
    };
    let (passed, detail) = match &entry.expected {
        Expected::Coefficients(expected) => match compute() {
            Ok(res) if res.coefficients == *expected => (true, format!("m = {}", res.coefficients)),
            Ok(res) => (false, format!("m = {}, expected {expected}", res.coefficients)),
            Err(e) => (false, format!("error: {e}")),
        },
        Expected::NoRationalPullback => {
            let curves = extra_curve_intersections(&entry.config, &entry.divisor);
            match detect_small_resolution(&entry.config, &curves) {
                SmallResolutionVerdict::NoRationalPullback { witness } => (
                    true,
                    format!("no rational pullback: witness curve {} with intersection {}", witness.name, witness.intersection),
                ),
                other => (false, format!("expected no rational pullback, got {other:?}")),
            }
        }
        Expected::DisconnectedConfiguration => refusal(compute(), |e| {
            matches!(e, PullbackError::DisconnectedConfiguration { .. })
        }),
        Expected::NotMMatrix => refusal(compute(), |e| matches!(e, PullbackError::NotMMatrix { .. })),
        Expected::SignViolation => {
            refusal(compute(), |e| matches!(e, PullbackError::SignViolation { .. }))
        }
    };
    ExampleOutcome { name: entry.name.clone(), passed, detail }
}

fn refusal<T>(
    outcome: Result<T, PullbackError>,
    expected: impl Fn(&PullbackError) -> bool,
) -> (bool, String) {
    match outcome {
        Err(e) if expected(&e) => (true, format!("refused: {e}")),
        Err(e) => (false, format!("refused for the wrong reason: {e}")),
        Ok(_) => (false, "expected a refusal but a pullback was computed".into()),
    }
}
