use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ratpull::config::{
    builtin_examples, find_example, graph_to_config, load_config, load_divisor, load_graph,
    load_matrix_or_config, run_example, save_config, save_divisor, save_graph, ConfigError,
    ExampleEntry, Expected,
};
use ratpull::mmatrix::MMatrixError;
use ratpull::pullback::{
    detect_small_resolution, extra_curve_intersections, uniqueness_probe, SmallResolutionVerdict,
};
use ratpull::ratmat::set_dimension_cap;
use ratpull::{
    as_z_matrix, compute_pullback, is_invertible_m_matrix, mumford_surface_pullback, DivisorInput,
    IntersectionConfig, MMatrixReport, PullbackError, PullbackOptions, PullbackResult, RatError,
    RatVector, Rational,
};

#[derive(Parser)]
#[command(
    name = "ratpull",
    version,
    about = "Exact rational pullback of Weil divisors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix (or -transpose(phi) of a configuration) is an invertible M-matrix.
    CheckMmatrix {
        path: PathBuf,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Compute the pullback coefficients for a configuration document.
    Pullback {
        config: PathBuf,
        #[command(flatten)]
        divisor: DivisorFlags,
        /// Also report extra-curve residuals and run the uniqueness probe.
        #[arg(long)]
        verify: bool,
        /// Solve each connected component separately instead of refusing.
        #[arg(long)]
        allow_disconnected: bool,
        /// Accept negative intersection numbers.
        #[arg(long)]
        allow_signed_lambda: bool,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Pull back along the resolution described by a dual graph.
    Surface {
        graph: PathBuf,
        #[command(flatten)]
        divisor: DivisorFlags,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// The builtin example library.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Write NAME.config.json and NAME.divisor.json into a directory.
    Export {
        name: String,
        dir: PathBuf,
    },
    RunAll,
}

#[derive(Args)]
struct OutputFlags {
    #[arg(long)]
    json: bool,
    /// Append decimal approximations, marked advisory.
    #[arg(long)]
    approx: bool,
}

#[derive(Args)]
struct DivisorFlags {
    /// Divisor document.
    #[arg(long, conflicts_with = "lambda")]
    divisor: Option<PathBuf>,
    /// Intersection numbers inline, e.g. `1,0` or `1/2,0`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Intersection numbers with the extra curves, inline.
    #[arg(long, allow_hyphen_values = true)]
    extra_lambda: Option<String>,
    #[arg(long)]
    cartier_denominator: Option<u64>,
}

enum Failure {
    Refused(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Refused(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Refused(m) | Failure::Input(m) => m,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<RatError> for Failure {
    fn from(e: RatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PullbackError> for Failure {
    fn from(e: PullbackError) -> Self {
        match e {
            PullbackError::DimensionMismatch { .. }
            | PullbackError::IndexOutOfRange { .. }
            | PullbackError::InvariantViolation(_)
            | PullbackError::Rat(_) => Failure::Input(e.to_string()),
            _ => Failure::Refused(e.to_string()),
        }
    }
}

impl From<MMatrixError> for Failure {
    fn from(e: MMatrixError) -> Self {
        match e {
            MMatrixError::Rat(r) => r.into(),
            other => Failure::Refused(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(cap) = std::env::var("RATPULL_MAX_DIM") {
        match cap.parse::<usize>() {
            Ok(cap) if cap > 0 => set_dimension_cap(cap),
            _ => {
                eprintln!("error: RATPULL_MAX_DIM must be a positive integer, got {cap:?}");
                return ExitCode::from(2);
            }
        }
    }
    let json = match &cli.command {
        Command::CheckMmatrix { out, .. }
        | Command::Pullback { out, .. }
        | Command::Surface { out, .. } => out.json,
        Command::Examples { .. } => false,
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if json {
                let kind = if f.code() == 1 {
                    "refused"
                } else {
                    "input_error"
                };
                println!(
                    "{}",
                    pretty(&json!({ "status": kind, "reason": f.message() }))
                );
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::CheckMmatrix { path, out } => check_mmatrix(&path, &out),
        Command::Pullback {
            config,
            divisor,
            verify,
            allow_disconnected,
            allow_signed_lambda,
            out,
        } => {
            let cfg = load_config(&read(&config)?)?;
            let d = divisor_input(&divisor)?;
            let opts = PullbackOptions {
                allow_disconnected,
                allow_signed_lambda,
            };
            pullback(&cfg, &d, opts, verify, &out)
        }
        Command::Surface {
            graph,
            divisor,
            out,
        } => {
            let cfg = graph_to_config(&load_graph(&read(&graph)?)?)?;
            let d = divisor_input(&divisor)?;
            let res = mumford_surface_pullback(&cfg, &d, PullbackOptions::default())?;
            report_pullback(&cfg, &d, &res, None, &out);
            Ok(0)
        }
        Command::Examples { action } => examples(action),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn parse_list(text: &str) -> Result<RatVector, Failure> {
    if text.trim().is_empty() {
        return Ok(RatVector::default());
    }
    text.split(',')
        .map(|s| s.trim().parse::<Rational>().map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()
        .map(RatVector::from)
}

fn divisor_input(flags: &DivisorFlags) -> Result<DivisorInput, Failure> {
    let mut d = match (&flags.divisor, &flags.lambda) {
        (Some(path), _) => load_divisor(&read(path)?)?,
        (None, Some(text)) => DivisorInput::new(parse_list(text)?),
        (None, None) => {
            return Err(Failure::Input(
                "one of --divisor or --lambda is required".into(),
            ))
        }
    };
    if let Some(text) = &flags.extra_lambda {
        d = d.with_extra_lambda(parse_list(text)?);
    }
    if let Some(n) = flags.cartier_denominator {
        if n == 0 {
            return Err(Failure::Input(
                "--cartier-denominator must be at least 1".into(),
            ));
        }
        d = d.with_cartier_denominator(n);
    }
    Ok(d)
}

fn join<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn approx(xs: &[Rational]) -> String {
    join(xs.iter().map(|x| format!("{:.6}", x.to_f64())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_mmatrix(path: &Path, out: &OutputFlags) -> Result<u8, Failure> {
    let a = load_matrix_or_config(&read(path)?)?.m_matrix_candidate();
    let z = match as_z_matrix(&a) {
        Ok(z) => z,
        Err(MMatrixError::NotZPattern { row, col }) => {
            let reason = format!("not a Z-matrix: entry ({row}, {col}) is positive");
            if out.json {
                println!("{}", pretty(&json!({ "verdict": false, "reason": reason })));
            } else {
                println!("verdict: not an invertible M-matrix ({reason})");
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let report = is_invertible_m_matrix(&z)?;
    if out.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print_mreport(&report, out.approx);
    }
    Ok(if report.verdict { 0 } else { 1 })
}

fn print_mreport(r: &MMatrixReport, with_approx: bool) {
    println!("dimension: {}", r.dimension);
    println!("leading principal minors: {}", join(&r.minors));
    println!("minors positive: {}", yes_no(r.minors_positive));
    println!("inverse nonnegative: {}", yes_no(r.inverse_nonneg));
    match &r.certificate_x {
        Some(x) => println!("certificate x = A^-1 1: {x}"),
        None => println!("certificate: none"),
    }
    if r.verdict {
        println!("verdict: invertible M-matrix");
    } else {
        println!("verdict: not an invertible M-matrix");
    }
    if with_approx {
        if let Some(est) = &r.spectral_estimate {
            println!(
                "advisory: s = {}, rho_hat ~ {:.9}{}",
                est.s,
                est.rho_hat,
                if est.converged {
                    ""
                } else {
                    " (not converged)"
                }
            );
        }
    }
}

fn pullback(
    cfg: &IntersectionConfig,
    d: &DivisorInput,
    opts: PullbackOptions,
    verify: bool,
    out: &OutputFlags,
) -> Result<u8, Failure> {
    let curves = extra_curve_intersections(cfg, d);
    match detect_small_resolution(cfg, &curves) {
        SmallResolutionVerdict::NoRationalPullback { witness } => {
            return Err(Failure::Refused(format!(
                "no rational pullback: small-resolution obstruction (curve {} has intersection {} with the divisor)",
                witness.name, witness.intersection
            )));
        }
        SmallResolutionVerdict::TriviallyAdmits => {
            if out.json {
                println!(
                    "{}",
                    pretty(
                        &json!({ "status": "ok", "coefficients": [], "strict_transform": true })
                    )
                );
            } else {
                println!("no exceptional divisors; the pullback is the strict transform");
            }
            return Ok(0);
        }
        SmallResolutionVerdict::NotApplicable => {}
    }
    let res = compute_pullback(cfg, d, opts)?;
    let probe = if verify {
        Some(uniqueness_probe(cfg, d, &res, &Rational::one())?)
    } else {
        None
    };
    report_pullback(cfg, d, &res, probe, out);
    Ok(0)
}

fn report_pullback(
    cfg: &IntersectionConfig,
    d: &DivisorInput,
    res: &PullbackResult,
    probe: Option<bool>,
    out: &OutputFlags,
) {
    if out.json {
        let mut v = json!({ "status": "ok", "divisors": cfg.divisors(), "result": res });
        if let Some(p) = probe {
            v["uniqueness_probe"] = json!(p);
        }
        println!("{}", pretty(&v));
        return;
    }
    println!("m = {}", res.coefficients);
    if out.approx {
        println!("  advisory decimals: {}", approx(&res.coefficients));
    }
    for (name, c) in cfg.divisors().iter().zip(res.coefficients.iter()) {
        println!("  {name}: {c}");
    }
    println!("n = {}, numerators = {}", res.denominator, res.numerators);
    if d.cartier_denominator != 1 {
        println!(
            "full coefficients (divided by {}) = {}",
            d.cartier_denominator, res.full_coefficients
        );
    }
    if res.components.len() > 1 {
        let blocks: Vec<String> = res
            .components
            .iter()
            .map(|b| format!("{{{}}}", join(b.iter().map(|i| i + 1))))
            .collect();
        println!("components: {}", blocks.join(" "));
    }
    println!("verification:");
    println!(
        "  -transpose(phi) invertible M-matrix: yes (minors {})",
        join(&res.mreport.minors)
    );
    println!(
        "  projection residuals: {}",
        if res.projection_residuals.is_zero() {
            "all zero"
        } else {
            "NONZERO"
        }
    );
    println!("  effective: {}", yes_no(res.effectivity));
    if let Some(agrees) = res.symmetric_path_agrees {
        println!("  symmetric solve agrees: {}", yes_no(agrees));
    }
    if let Some(p) = probe {
        if res.extra_residuals.is_empty() {
            println!("  extra curves: none supplied");
        }
        for c in &res.extra_residuals {
            let note = if c.residual.is_zero() {
                "numerically trivial"
            } else {
                "nonzero"
            };
            println!("  extra curve {}: residual {} ({note})", c.name, c.residual);
        }
        println!(
            "  uniqueness probe (delta = 1): {}",
            if p { "unique" } else { "NOT unique" }
        );
    }
}

fn describe_expected(e: &Expected) -> String {
    match e {
        Expected::Coefficients(m) => format!("m = {m}"),
        Expected::NoRationalPullback => "refusal: no rational pullback".into(),
        Expected::DisconnectedConfiguration => "refusal: disconnected configuration".into(),
        Expected::NotMMatrix => "refusal: not an invertible M-matrix".into(),
        Expected::SignViolation => "refusal: sign violation".into(),
    }
}

fn lookup(name: &str) -> Result<ExampleEntry, Failure> {
    find_example(name).ok_or_else(|| Failure::Input(format!("unknown example {name:?}")))
}

fn examples(action: ExamplesAction) -> Result<u8, Failure> {
    match action {
        ExamplesAction::List => {
            for e in builtin_examples() {
                println!("{:<16} {}", e.name, e.provenance);
            }
            Ok(0)
        }
        ExamplesAction::Show { name, json } => {
            let e = lookup(&name)?;
            if json {
                let config: Value =
                    serde_json::from_str(&save_config(&e.config)).expect("valid json");
                let divisor: Value =
                    serde_json::from_str(&save_divisor(&e.divisor)).expect("valid json");
                let graph: Option<Value> = e
                    .graph
                    .as_ref()
                    .map(|g| serde_json::from_str(&save_graph(g)).expect("valid json"));
                println!(
                    "{}",
                    pretty(&json!({
                        "name": e.name,
                        "provenance": e.provenance,
                        "config": config,
                        "divisor": divisor,
                        "graph": graph,
                        "expected": e.expected,
                    }))
                );
            } else {
                println!("{}: {}", e.name, e.provenance);
                println!("config:\n{}", save_config(&e.config));
                println!("lambda = {}", e.divisor.lambda);
                if let Some(extra) = &e.divisor.extra_lambda {
                    println!("extra lambda = {extra}");
                }
                println!("expected: {}", describe_expected(&e.expected));
            }
            Ok(0)
        }
        ExamplesAction::Export { name, dir } => {
            let e = lookup(&name)?;
            fs::create_dir_all(&dir)
                .map_err(|err| Failure::Input(format!("{}: {err}", dir.display())))?;
            for (suffix, text) in [
                ("config", save_config(&e.config)),
                ("divisor", save_divisor(&e.divisor)),
            ] {
                let path = dir.join(format!("{}.{suffix}.json", e.name));
                fs::write(&path, text)
                    .map_err(|err| Failure::Input(format!("{}: {err}", path.display())))?;
                println!("{}", path.display());
            }
            Ok(0)
        }
        ExamplesAction::RunAll => {
            let mut mismatches = Vec::new();
            for e in builtin_examples() {
                let outcome = run_example(&e);
                let tag = if outcome.passed { "ok" } else { "MISMATCH" };
                println!("[{tag}] {}: {}", outcome.name, outcome.detail);
                if !outcome.passed {
                    mismatches.push(outcome.name);
                }
            }
            if mismatches.is_empty() {
                Ok(0)
            } else {
                Err(Failure::Refused(format!(
                    "mismatched examples: {}",
                    mismatches.join(", ")
                )))
            }
        }
    }
}
