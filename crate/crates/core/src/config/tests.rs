use proptest::prelude::*;

use super::*;
use crate::pullback::{validate_signs, PullbackOptions};
use crate::ratmat::rat;

const A2_DOC: &str = r#"{
  "format_version": "1",
  "divisors": ["E1", "E2"],
  "curves": ["C1", "C2"],
  "phi": [["-2", "1"], ["1", "-2"]],
  "adjacency": [[true, true], [true, true]],
  "extra_curves": [{ "name": "C1'", "host": 0, "row": ["-4", "2"] }]
}"#;

#[test]
fn load_a2_document() {
    let cfg = load_config(A2_DOC).unwrap();
    assert_eq!(cfg.rank(), 2);
    assert_eq!(cfg.phi(), &RatMatrix::from_i64_rows(&[[-2, 1], [1, -2]]).unwrap());
    assert_eq!(cfg.extra_curves()[0].host, Some(0));
    let again = load_config(&save_config(&cfg)).unwrap();
    assert_eq!(again, cfg);
}

#[test]
fn curves_default_to_labels() {
    let cfg = load_config(r#"{"format_version":"1","divisors":["E"],"phi":[["-3"]]}"#).unwrap();
    assert_eq!(cfg.chosen_curves(), &["C1".to_string()]);
}

#[test]
fn non_square_phi_is_invariant_violation() {
    let doc = r#"{"format_version":"1","divisors":["E1","E2"],"phi":[["-2","1","0"],["1","-2","0"]]}"#;
    assert!(matches!(load_config(doc), Err(ConfigError::InvariantViolation(_))));
    let ragged = r#"{"format_version":"1","divisors":["E1","E2"],"phi":[["-2","1"],["1"]]}"#;
    assert!(matches!(load_config(ragged), Err(ConfigError::InvariantViolation(_))));
}

#[test]
fn zero_denominator_is_parse_error_with_location() {
    let doc = "{\"format_version\":\"1\",\n\"divisors\":[\"E\"],\n\"phi\":[[\"1/0\"]]}";
    match load_config(doc) {
        Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn floats_and_unknown_fields_rejected() {
    let float = r#"{"format_version":"1","divisors":["E"],"phi":[[-2.5]]}"#;
    assert!(matches!(load_config(float), Err(ConfigError::Parse { .. })));
    let extra = r#"{"format_version":"1","divisors":["E"],"phi":[["-2"]],"bogus":1}"#;
    assert!(matches!(load_config(extra), Err(ConfigError::Parse { .. })));
}

#[test]
fn version_is_checked() {
    let doc = r#"{"format_version":"2","divisors":["E"],"phi":[["-2"]]}"#;
    assert_eq!(load_config(doc), Err(ConfigError::UnsupportedVersion("2".into())));
    let missing = r#"{"divisors":["E"],"phi":[["-2"]]}"#;
    assert!(matches!(load_config(missing), Err(ConfigError::Parse { .. })));
}

#[test]
fn adjacency_invariants_on_load() {
    let asym = r#"{"format_version":"1","divisors":["E1","E2"],"phi":[["-2","1"],["1","-2"]],
        "adjacency":[[true,true],[false,true]]}"#;
    assert!(matches!(load_config(asym), Err(ConfigError::InvariantViolation(_))));
    let wrong = r#"{"format_version":"1","divisors":["E1","E2"],"phi":[["-2","1"],["1","-2"]],
        "adjacency":[[true,false],[false,true]]}"#;
    assert!(matches!(load_config(wrong), Err(ConfigError::InvariantViolation(_))));
}

#[test]
fn divisor_documents() {
    let d = load_divisor(r#"{"format_version":"1","lambda":["1","0"],"cartier_denominator":3}"#).unwrap();
    assert_eq!(d.lambda, RatVector::from_i64(&[1, 0]));
    assert_eq!(d.cartier_denominator, 3);
    assert_eq!(load_divisor(&save_divisor(&d)).unwrap(), d);
    let d = load_divisor(r#"{"format_version":"1","lambda":["1/2"]}"#).unwrap();
    assert_eq!(d.cartier_denominator, 1);
    assert!(load_divisor(r#"{"format_version":"1","lambda":["1"],"cartier_denominator":0}"#).is_err());
}

#[test]
fn matrix_or_config() {
    let m = load_matrix_or_config(r#"{"format_version":"1","matrix":[["2","-1"],["-1","2"]]}"#).unwrap();
    assert_eq!(m.m_matrix_candidate(), RatMatrix::from_i64_rows(&[[2, -1], [-1, 2]]).unwrap());
    let c = load_matrix_or_config(A2_DOC).unwrap();
    assert!(matches!(c, MatrixSource::Config(_)));
    assert_eq!(c.m_matrix_candidate(), RatMatrix::from_i64_rows(&[[2, -1], [-1, 2]]).unwrap());
    assert!(matches!(
        load_matrix_or_config(r#"{"format_version":"1","matrix":[["2","-1"]]}"#),
        Err(ConfigError::InvariantViolation(_))
    ));
}

#[test]
fn graph_examples() {
    let a2 = graph_to_config(&DualGraph::from_weights(&[-2, -2], &[(0, 1)])).unwrap();
    assert_eq!(a2.phi(), &RatMatrix::from_i64_rows(&[[-2, 1], [1, -2]]).unwrap());
    assert_eq!(a2.divisors(), a2.chosen_curves());

    let single = graph_to_config(&DualGraph::from_weights(&[-7], &[])).unwrap();
    assert_eq!(single.phi(), &RatMatrix::from_i64_rows(&[[-7]]).unwrap());

    let d4 = graph_to_config(&ade_graph("D4").unwrap()).unwrap();
    assert_eq!(d4.phi().row(0), RatVector::from_i64(&[-2, 1, 1, 1]));
    assert!(d4.phi().is_symmetric());

    let bad = DualGraph::from_weights(&[-2, 1], &[(0, 1)]);
    assert!(matches!(graph_to_config(&bad), Err(ConfigError::InvalidGraph(_))));
}

#[test]
fn graph_documents() {
    let doc = r#"{"format_version":"1",
        "vertices":[{"label":"E1","self_intersection":"-2"},{"label":"E2","self_intersection":"-2"}],
        "edges":[{"i":0,"j":1,"multiplicity":1}]}"#;
    let g = load_graph(doc).unwrap();
    assert_eq!(g, DualGraph::from_weights(&[-2, -2], &[(0, 1)]));
    assert_eq!(load_graph(&save_graph(&g)).unwrap(), g);
    let plus_one = r#"{"format_version":"1","vertices":[{"label":"E1","self_intersection":"1"}]}"#;
    assert!(matches!(load_graph(plus_one), Err(ConfigError::InvalidGraph(_))));
}

fn graph_strategy() -> impl Strategy<Value = DualGraph> {
    (1usize..=6).prop_flat_map(|n| {
        (
            proptest::collection::vec((1i64..=9, 1i64..=3), n),
            proptest::collection::vec(proptest::option::of(1u64..=3), n * (n - 1) / 2),
        )
            .prop_map(move |(w, mults)| {
                let vertices = w
                    .iter()
                    .enumerate()
                    .map(|(k, &(p, q))| Vertex {
                        label: format!("E{}", k + 1),
                        self_intersection: rat(-p, q).unwrap(),
                    })
                    .collect();
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if let Some(m) = mults[k] {
                            edges.push(Edge { i, j, multiplicity: m });
                        }
                        k += 1;
                    }
                }
                DualGraph { vertices, edges }
            })
    })
}

proptest! {
    #[test]
    fn graph_configs_are_symmetric_and_sign_valid(g in graph_strategy()) {
        let cfg = graph_to_config(&g).unwrap();
        prop_assert!(cfg.phi().is_symmetric());
        let opts = PullbackOptions { allow_disconnected: true, ..Default::default() };
        prop_assert!(validate_signs(&cfg, opts).is_ok());
    }

    #[test]
    fn config_roundtrip_is_exact(g in graph_strategy()) {
        let cfg = graph_to_config(&g).unwrap();
        prop_assert_eq!(load_config(&save_config(&cfg)).unwrap(), cfg);
    }
}
