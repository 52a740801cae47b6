//! Acceptance suite. Prints one `[PASS]` / `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratpull::config::{ade_graph, find_example, graph_to_config};
use ratpull::mmatrix::{
    check_certificate, check_inverse_nonneg, check_minors, decompose_with_shift,
    spectral_estimate_with_shift,
};
use ratpull::pullback::{detect_small_resolution, extra_curve_intersections, uniqueness_probe, SmallResolutionVerdict};
use ratpull::{
    as_z_matrix, compute_pullback, is_invertible_m_matrix, mumford_surface_pullback, rat,
    DivisorInput, IntersectionConfig, PullbackError, PullbackOptions, RatMatrix, RatVector, Rational,
};

const SEED: u64 = 0x5EED_2026;
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(30);
const EQUIVALENCE_INSTANCES: usize = 1000;
const CONTRACT_INSTANCES: usize = 500;
const CARTIER_INSTANCES: usize = 200;
const SPECTRAL_TOLERANCE: f64 = 1e-6;

type Outcome = Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("golden suite", golden),
        ("m-matrix equivalence", equivalence),
        ("pullback contract on certified configs", contract),
        ("cartier compatibility", cartier),
        ("symmetric path agreement", symmetric_path),
        ("failure paths", failure_paths),
        ("advisory spectral estimate", spectral),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

fn qv(xs: &[&str]) -> RatVector {
    xs.iter().map(|s| q(s)).collect()
}

fn config(rows: &[&[i64]]) -> IntersectionConfig {
    IntersectionConfig::from_phi(RatMatrix::from_i64_rows(rows).unwrap()).unwrap()
}

fn chain(weights: &[i64]) -> IntersectionConfig {
    let n = weights.len();
    let phi = RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::from(weights[i])
        } else if i.abs_diff(j) == 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    IntersectionConfig::from_phi(phi).unwrap()
}

fn golden() -> Outcome {
    let mut cases: Vec<(String, IntersectionConfig, RatVector, RatVector)> = vec![
        ("A1".into(), chain(&[-2]), qv(&["1"]), qv(&["1/2"])),
        ("A2".into(), chain(&[-2, -2]), qv(&["1", "0"]), qv(&["2/3", "1/3"])),
        ("A3".into(), chain(&[-2, -2, -2]), qv(&["1", "0", "0"]), qv(&["3/4", "1/2", "1/4"])),
        ("HJ-5/2".into(), chain(&[-3, -2]), qv(&["1", "0"]), qv(&["2/5", "1/5"])),
        (
            "nonsymmetric".into(),
            config(&[&[-2, 3], &[1, -4]]),
            qv(&["1", "1"]),
            qv(&["1", "1"]),
        ),
    ];
    for n in 2..=10 {
        cases.push((format!("-{n} curve"), chain(&[-n]), qv(&["1"]), RatVector::from(vec![rat(1, n).unwrap()])));
    }

    let start = Instant::now();
    for (name, cfg, lambda, expected) in &cases {
        let res = compute_pullback(cfg, &DivisorInput::new(lambda.clone()), PullbackOptions::default())
            .map_err(|e| format!("{name}: {e}"))?;
        if res.coefficients != *expected {
            return Err(format!("{name}: got [{}], expected [{expected}]", res.coefficients));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= GOLDEN_BUDGET {
        return Err(format!("{} cases exact but took {elapsed:?}", cases.len()));
    }
    Ok(format!("{} cases exact in {elapsed:?}", cases.len()))
}

fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    rat(rng.gen_range(lo..=hi), rng.gen_range(1..=5)).unwrap()
}

/// A Z-matrix with entries `p/q`, `|p| <= 20`, `q <= 5`. The diagonal is
/// drawn from a range wide enough that both verdicts occur often.
fn random_z_matrix(rng: &mut impl Rng) -> RatMatrix {
    let n = rng.gen_range(1..=6);
    let sparsity = rng.gen_range(0.2..0.9);
    RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            random_rational(rng, -4, 20)
        } else if rng.gen_bool(sparsity) {
            random_rational(rng, -20, 0)
        } else {
            Rational::zero()
        }
    })
}

fn equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut yes, mut no) = (0usize, 0usize);
    let start = Instant::now();
    for k in 0..EQUIVALENCE_INSTANCES {
        let m = random_z_matrix(&mut rng);
        let z = as_z_matrix(&m).map_err(|e| format!("instance {k}: {e}"))?;
        let minors = check_minors(&z).all_positive;
        let inverse = check_inverse_nonneg(&z).nonnegative;
        let certificate = check_certificate(&z).is_some();
        if minors != inverse || inverse != certificate {
            return Err(format!(
                "instance {k} disagrees (minors {minors}, inverse {inverse}, certificate {certificate}): {m:?}"
            ));
        }
        if minors {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= EQUIVALENCE_BUDGET {
        return Err(format!("all agreed but took {elapsed:?}"));
    }
    if yes == 0 || no == 0 {
        return Err(format!("degenerate sample: {yes} M-matrices, {no} others"));
    }
    Ok(format!(
        "{EQUIVALENCE_INSTANCES} instances agree ({yes} M-matrices, {no} others) in {elapsed:?}"
    ))
}

/// `Φ = -ᵗ(sE - B)` with `B >= 0` and `s` above the largest row sum of `B`.
fn certified_config(rng: &mut impl Rng) -> IntersectionConfig {
    let n = rng.gen_range(1..=6);
    let b = RatMatrix::from_fn(n, n, |_, _| {
        if rng.gen_bool(0.6) {
            random_rational(rng, 0, 6)
        } else {
            Rational::zero()
        }
    });
    let max_row_sum = (0..n).map(|i| b.row(i).iter().sum::<Rational>()).max().unwrap();
    let s = max_row_sum + random_rational(rng, 1, 4);
    let a = RatMatrix::identity(n).scale(&s).sub(&b).unwrap();
    IntersectionConfig::from_phi(a.transpose().neg()).unwrap()
}

fn random_lambda(rng: &mut impl Rng, n: usize) -> RatVector {
    (0..n).map(|_| random_rational(rng, 0, 10)).collect()
}

fn pull(cfg: &IntersectionConfig, lambda: &RatVector) -> Result<RatVector, String> {
    compute_pullback(cfg, &DivisorInput::new(lambda.clone()), PullbackOptions::default())
        .map(|r| r.coefficients)
        .map_err(|e| e.to_string())
}

fn contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for k in 0..CONTRACT_INSTANCES {
        let fail = |what: &str| format!("instance {k}: {what}");
        let cfg = certified_config(&mut rng);
        let n = cfg.rank();
        let l1 = random_lambda(&mut rng, n);
        let l2 = random_lambda(&mut rng, n);
        let d1 = DivisorInput::new(l1.clone());
        let res = compute_pullback(&cfg, &d1, PullbackOptions::default()).map_err(|e| fail(&e.to_string()))?;

        if !res.effectivity || !res.coefficients.all_nonnegative() {
            return Err(fail("negative coefficient for nonnegative lambda"));
        }
        if !res.projection_residuals.is_zero() {
            return Err(fail("nonzero projection residual"));
        }

        let (a, b) = (random_rational(&mut rng, 0, 7), random_rational(&mut rng, 0, 7));
        let combined = l1.scale(&a).add(&l2.scale(&b)).unwrap();
        let lhs = pull(&cfg, &combined).map_err(|e| fail(&e))?;
        let rhs = res.coefficients.scale(&a).add(&pull(&cfg, &l2).map_err(|e| fail(&e))?.scale(&b)).unwrap();
        if lhs != rhs {
            return Err(fail("not linear in lambda"));
        }

        let c = random_rational(&mut rng, 1, 9);
        if pull(&cfg, &l1.scale(&c)).map_err(|e| fail(&e))? != res.coefficients.scale(&c) {
            return Err(fail("lambda scaling does not scale the coefficients"));
        }
        let scaled = IntersectionConfig::from_phi(cfg.phi().scale(&c)).unwrap();
        if pull(&scaled, &l1).map_err(|e| fail(&e))? != res.coefficients.scale(&c.recip().unwrap()) {
            return Err(fail("scaling phi does not inversely scale the coefficients"));
        }

        let delta = random_rational(&mut rng, 1, 20);
        let delta = if rng.gen_bool(0.5) { -delta } else { delta };
        if !uniqueness_probe(&cfg, &d1, &res, &delta).map_err(|e| fail(&e.to_string()))? {
            return Err(fail("a perturbed solution still satisfies every equation"));
        }
    }
    Ok(format!("{CONTRACT_INSTANCES} certified configurations"))
}

fn cartier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let (mut accepted, mut drawn) = (0usize, 0usize);
    while accepted < CARTIER_INSTANCES {
        drawn += 1;
        if drawn > 100 * CARTIER_INSTANCES {
            return Err(format!("only {accepted} instances with lambda >= 0 in {drawn} draws"));
        }
        let cfg = certified_config(&mut rng);
        let n = cfg.rank();
        let w: RatVector = (0..n).map(|_| Rational::from(rng.gen_range(0..=12i64))).collect();
        let lambda = cfg.phi().neg().transpose().mat_vec(&w).unwrap();
        if !lambda.all_nonnegative() {
            continue;
        }
        let got = pull(&cfg, &lambda).map_err(|e| format!("draw {drawn}: {e}"))?;
        if got != w {
            return Err(format!("draw {drawn}: recovered [{got}] instead of [{w}]"));
        }
        accepted += 1;
    }
    Ok(format!("{accepted} instances recovered exactly ({drawn} draws)"))
}

fn symmetric_path() -> Outcome {
    let names = ["A1", "A2", "A3", "D4", "E6", "E7", "E8"];
    for name in names {
        let cfg = graph_to_config(&ade_graph(name).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        for k in 0..cfg.rank() {
            let d = DivisorInput::new(RatVector::unit(cfg.rank(), k));
            let opts = PullbackOptions::default();
            let general = compute_pullback(&cfg, &d, opts).map_err(|e| format!("{name}: {e}"))?;
            let symmetric = mumford_surface_pullback(&cfg, &d, opts).map_err(|e| format!("{name}: {e}"))?;
            if general.coefficients != symmetric.coefficients || symmetric.symmetric_path_agrees != Some(true) {
                return Err(format!(
                    "{name}, lambda = e{}: [{}] vs [{}]",
                    k + 1,
                    general.coefficients,
                    symmetric.coefficients
                ));
            }
        }
    }
    Ok(format!("{} graphs, every unit lambda", names.len()))
}

fn failure_paths() -> Outcome {
    let conifold = find_example("conifold").ok_or("conifold example missing")?;
    let curves = extra_curve_intersections(&conifold.config, &conifold.divisor);
    match detect_small_resolution(&conifold.config, &curves) {
        SmallResolutionVerdict::NoRationalPullback { .. } => {}
        other => return Err(format!("conifold: {other:?}")),
    }

    let opts = PullbackOptions::default();
    let run = |cfg: &IntersectionConfig, lambda: &[&str]| compute_pullback(cfg, &DivisorInput::new(qv(lambda)), opts);

    match run(&config(&[&[-1, 2], &[2, -1]]), &["1", "0"]) {
        Err(PullbackError::NotMMatrix { .. }) => {}
        other => return Err(format!("indefinite: {other:?}")),
    }
    match run(&config(&[&[-2, -1], &[1, -2]]), &["1", "0"]) {
        Err(PullbackError::SignViolation { .. }) => {}
        other => return Err(format!("sign violation: {other:?}")),
    }
    let disconnected = config(&[&[-2, 0], &[0, -3]])
        .with_adjacency(vec![vec![true, false], vec![false, true]])
        .unwrap();
    match run(&disconnected, &["1", "1"]) {
        Err(PullbackError::DisconnectedConfiguration { .. }) => {}
        other => return Err(format!("disconnected: {other:?}")),
    }
    Ok("conifold, indefinite, sign violation, disconnected".into())
}

fn spectral() -> Outcome {
    let a = RatMatrix::from_i64_rows(&[[2, -1], [-1, 2]]).unwrap();
    let z = as_z_matrix(&a).map_err(|e| e.to_string())?;
    let s = Rational::from(2);
    let est = spectral_estimate_with_shift(&z, &s).map_err(|e| e.to_string())?;
    if (est.rho_hat - 1.0).abs() > SPECTRAL_TOLERANCE {
        return Err(format!("rho_hat = {} for s = 2", est.rho_hat));
    }

    let verdict = is_invertible_m_matrix(&z).map_err(|e| e.to_string())?.verdict;
    let shifted = &s + &Rational::from(3);
    let est2 = spectral_estimate_with_shift(&z, &shifted).map_err(|e| e.to_string())?;
    let recomposed = decompose_with_shift(&z, &shifted).map_err(|e| e.to_string())?.recompose();
    if recomposed != a {
        return Err("s' E - B' does not reproduce A".into());
    }
    let verdict2 = is_invertible_m_matrix(&as_z_matrix(&recomposed).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?
        .verdict;
    if verdict != verdict2 || est.suggests_m_matrix() != est2.suggests_m_matrix() || !verdict {
        return Err(format!(
            "verdicts: exact {verdict} vs {verdict2}, estimate {} vs {}",
            est.suggests_m_matrix(),
            est2.suggests_m_matrix()
        ));
    }
    Ok(format!(
        "rho_hat = {:.9} (s = 2), rho_hat' = {:.9} (s' = 5), verdict {verdict} both ways",
        est.rho_hat, est2.rho_hat
    ))
}
