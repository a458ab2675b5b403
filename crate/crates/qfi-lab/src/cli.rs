//! Command-line interface.
//!
//! Subcommands: `qfim`, `frontier`, `verify`, `estimate`, `optimize`,
//! `adversary`. Every run emits a self-describing document (JSON or CSV)
//! embedding the resolved configuration and a schema version; timestamps
//! live in a separate one-line `metadata` block so reproducibility checks
//! can strip them mechanically. Exit codes: 0 success, 1 verification or
//! invariant failure, 2 usage or configuration error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::duality;
use crate::duality::{ghz_certificate, random_duality_campaign, separable_certificate, BOUND_TOL};
use crate::error::{Error, Result};
use crate::estimation::{adversary_shift_test, run_experiment, MeasurementModel};
use crate::io::{self, fmt_f64};
use crate::optimize::{frontier_scan, optimize, ObjectiveSpec, ParameterizationMode, ScanBudget};
use crate::qfim::{compute_qfim, Direction};
use crate::rng::SUBSEED_SCHEDULE;
use crate::state::{ParamVector, ProbeState};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default floor on `empirical_variance / crb_total` in `estimate`.
const CRB_RATIO_FLOOR: f64 = 0.85;

/// Default blindness threshold in `adversary`.
const BLINDNESS_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(
    name = "qfi-lab",
    version,
    about = "Quantum Fisher information duality toolkit for distributed phase sensing",
    after_help = "Set QFI_LAB_THREADS to cap worker parallelism; results do not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the quantum Fisher information matrix of a probe
    Qfim(QfimArgs),
    /// Sweep the two-qubit Bell-family precision-privacy frontier
    Frontier(FrontierArgs),
    /// Duality-bound campaign plus GHZ and separable certificates
    Verify(VerifyArgs),
    /// Monte Carlo estimation experiment against the Cramer-Rao bound
    Estimate(EstimateArgs),
    /// Optimize a probe state for a QFI objective
    Optimize(OptimizeArgs),
    /// Outcome-distribution deviation seen by a curious observer
    Adversary(AdversaryArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the document to this path instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Document format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    /// Probe specification: ghz | plus | bell:PHI | random:SEED | file:PATH
    #[arg(long, default_value = "ghz")]
    probe: String,
    /// Number of sensors; required unless the probe spec fixes it
    #[arg(long)]
    qubits: Option<usize>,
    /// Local phases: comma-separated radians, or "zeros"
    #[arg(long, default_value = "zeros")]
    theta: String,
}

#[derive(Args, Debug)]
struct QfimArgs {
    #[command(flatten)]
    probe: ProbeArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct FrontierArgs {
    /// Number of grid points over phi in [0, pi/2]
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Number of sensors
    #[arg(long)]
    qubits: usize,
    /// Random probes per campaign
    #[arg(long, default_value_t = 1000)]
    states: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Restrict to the two-qubit equatorial equality campaign
    #[arg(long)]
    equatorial: bool,
    /// Override the duality-bound slack (default 1e-9)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Restore default tolerances, ignoring --tolerance
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Parity,
    LocalX,
}

impl From<ModelArg> for MeasurementModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Parity => MeasurementModel::GhzParity,
            ModelArg::LocalX => MeasurementModel::LocalX,
        }
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    probe: ProbeArgs,
    /// Measurement model
    #[arg(long, value_enum, default_value_t = ModelArg::Parity)]
    model: ModelArg,
    /// Target direction: sum | diff | comma-separated weights
    #[arg(long, default_value = "sum")]
    direction: String,
    /// Shots per repetition
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// Independent repetitions for the variance estimate
    #[arg(long, default_value_t = 200)]
    repetitions: u64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Read the whole experiment configuration from a JSON document
    /// (fields: probe, qubits, theta, model, direction, shots,
    /// repetitions, seed); overrides the individual flags. The `config`
    /// block of a previous JSON run is accepted verbatim.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the variance/CRB ratio floor (default 0.85)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Restore default tolerances, ignoring --tolerance
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    out: OutputArgs,
}

/// Experiment configuration document for `estimate --config`.
#[derive(serde::Deserialize)]
struct ExperimentDoc {
    probe: String,
    #[serde(default)]
    qubits: Option<usize>,
    #[serde(default)]
    theta: Option<serde_json::Value>,
    model: String,
    direction: serde_json::Value,
    shots: u64,
    repetitions: u64,
    seed: u64,
}

fn field_as_list(value: &serde_json::Value, what: &str) -> Result<String> {
    match value {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Array(items) => {
            let parts: Result<Vec<String>> = items
                .iter()
                .map(|x| {
                    x.as_f64()
                        .map(fmt_f64)
                        .ok_or_else(|| Error::Parse(format!("{what}: non-numeric entry {x}")))
                })
                .collect();
            Ok(parts?.join(","))
        }
        other => Err(Error::Parse(format!(
            "{what}: expected string or array, got {other}"
        ))),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Equatorial2,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// Number of sensors
    #[arg(long)]
    qubits: usize,
    /// Target direction: sum | diff | comma-separated weights
    #[arg(long, default_value = "sum")]
    direction: String,
    /// Constrained scan: DIRECTION:DELTA keeps F(v) >= DELTA while
    /// maximizing F(w)
    #[arg(long)]
    constraint: Option<String>,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    #[arg(long, default_value_t = 0.3)]
    step_size: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Probe parameterization
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,
    /// Additionally write the best probe to this path (probe file format)
    #[arg(long)]
    save_state: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AdvModelArg {
    Both,
    Parity,
    LocalX,
}

#[derive(Args, Debug)]
struct AdversaryArgs {
    #[command(flatten)]
    probe: ProbeArgs,
    /// Shift direction v: sum | diff | comma-separated weights
    #[arg(long, default_value = "diff")]
    direction: String,
    /// Comma-separated shift magnitudes
    #[arg(long, default_value = "0.1,0.5,1.0")]
    epsilon: String,
    #[arg(long, value_enum, default_value_t = AdvModelArg::Both)]
    model: AdvModelArg,
    /// Blindness threshold for the report (default 1e-12)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Restore default tolerances, ignoring --tolerance
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Qfim(args) => cmd_qfim(args),
        Command::Frontier(args) => cmd_frontier(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Adversary(args) => cmd_adversary(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/* config / document plumbing ************************************************/

fn jstr(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_object(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("{");
    for (i, (k, v)) in pairs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}: {v}", jstr(k));
    }
    s.push('}');
    s
}

fn now_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn json_envelope(command: &str, config: &[(&str, String)], result: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"schema_version\": {},", jstr(io::SCHEMA_VERSION));
    let _ = writeln!(s, "  \"command\": {},", jstr(command));
    let _ = writeln!(
        s,
        "  \"metadata\": {{\"tool_version\": {}, \"generated_unix_ms\": {}}},",
        jstr(TOOL_VERSION),
        now_ms()
    );
    let _ = writeln!(s, "  \"config\": {},", json_object(config));
    let _ = writeln!(s, "  \"result\": {result}");
    s.push_str("}\n");
    s
}

fn emit(
    out: &OutputArgs,
    command: &str,
    config: &[(&str, String)],
    json_result: &str,
    csv_header: &str,
    csv_rows: &[String],
) -> Result<()> {
    let text = match out.format {
        Format::Json => json_envelope(command, config, json_result),
        Format::Csv => {
            let mut pairs = vec![("command", jstr(command))];
            pairs.extend(config.iter().map(|(k, v)| (*k, v.clone())));
            io::csv_document(&json_object(&pairs), csv_header, csv_rows)
        }
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/* argument resolution ********************************************************/

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot parse '{tok}' as a number")))
        })
        .collect()
}

fn resolve_probe(args: &ProbeArgs) -> Result<(ProbeState, String)> {
    let spec = args.probe.as_str();
    if let Some(rest) = spec.strip_prefix("bell:") {
        let phi: f64 = rest
            .parse()
            .map_err(|_| Error::Config(format!("bad bell angle '{rest}'")))?;
        if let Some(n) = args.qubits {
            if n != 2 {
                return Err(Error::Config("bell probes are two-qubit".into()));
            }
        }
        return Ok((ProbeState::bell_family(phi)?, format!("bell:{rest}")));
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let seed: u64 = rest
            .parse()
            .map_err(|_| Error::Config(format!("bad probe seed '{rest}'")))?;
        let n = args
            .qubits
            .ok_or_else(|| Error::Config("random probes need --qubits".into()))?;
        return Ok((ProbeState::random_haar(n, seed)?, format!("random:{seed}")));
    }
    if let Some(rest) = spec.strip_prefix("file:") {
        let state = io::read_probe_state_file(Path::new(rest))?;
        if let Some(n) = args.qubits {
            if n != state.num_qubits() {
                return Err(Error::Config(format!(
                    "--qubits {n} does not match the {}-qubit probe file",
                    state.num_qubits()
                )));
            }
        }
        return Ok((state, format!("file:{rest}")));
    }
    let n = args
        .qubits
        .ok_or_else(|| Error::Config(format!("probe '{spec}' needs --qubits")))?;
    match spec {
        "ghz" => Ok((ProbeState::ghz(n)?, "ghz".into())),
        "plus" => Ok((ProbeState::plus_product(n)?, "plus".into())),
        other => Err(Error::Config(format!(
            "unknown probe '{other}' (expected ghz | plus | bell:PHI | random:SEED | file:PATH)"
        ))),
    }
}

fn resolve_theta(theta: &str, n: usize) -> Result<ParamVector> {
    if theta == "zeros" {
        return Ok(ParamVector::zeros(n));
    }
    let vals = parse_f64_list(theta)?;
    if vals.len() != n {
        return Err(Error::Config(format!(
            "--theta needs {n} entries, got {}",
            vals.len()
        )));
    }
    ParamVector::new(vals)
}

fn resolve_direction(s: &str, n: usize) -> Result<Direction> {
    match s {
        "sum" => Direction::uniform_sum(n),
        "diff" => Direction::pair_difference(n),
        _ => {
            let vals = parse_f64_list(s)?;
            if vals.len() != n {
                return Err(Error::Config(format!(
                    "direction needs {n} entries, got {}",
                    vals.len()
                )));
            }
            let norm = vals.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-6 {
                eprintln!("warning: direction norm {norm:.8} deviates from 1; normalizing");
            }
            Direction::new(vals)
        }
    }
}

fn theta_echo(theta: &ParamVector) -> String {
    io::json_f64_array(theta.angles())
}

fn direction_echo(d: &Direction) -> String {
    io::json_f64_array(d.weights())
}

/* subcommands ***************************************************************/

fn cmd_qfim(args: QfimArgs) -> Result<i32> {
    let (probe, probe_echo) = resolve_probe(&args.probe)?;
    let theta = resolve_theta(&args.probe.theta, probe.num_qubits())?;
    let state = probe.encode(&theta)?;
    let f = compute_qfim(&state);
    f.check_psd()?;

    let config = [
        ("probe", jstr(&probe_echo)),
        ("qubits", probe.num_qubits().to_string()),
        ("theta", theta_echo(&theta)),
    ];
    let n = f.n();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            rows.push(format!("{i},{j},{}", fmt_f64(f.entry(i, j))));
        }
    }
    emit(
        &args.out,
        "qfim",
        &config,
        &io::qfim_json(&f),
        "row,col,value",
        &rows,
    )?;
    Ok(0)
}

fn cmd_frontier(args: FrontierArgs) -> Result<i32> {
    let points = duality::frontier_sweep(args.points)?;
    let config = [("points", args.points.to_string())];
    let mut json = String::from("{\"points\": [");
    let mut rows = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            json.push_str(", ");
        }
        let _ = write!(
            json,
            "{{\"phi\": {}, \"qfi_w\": {}, \"qfi_v\": {}}}",
            fmt_f64(p.phi),
            fmt_f64(p.qfi_w),
            fmt_f64(p.qfi_v)
        );
        rows.push(format!(
            "{},{},{}",
            fmt_f64(p.phi),
            fmt_f64(p.qfi_w),
            fmt_f64(p.qfi_v)
        ));
    }
    json.push_str("]}");
    emit(
        &args.out,
        "frontier",
        &config,
        &json,
        "phi,qfi_w,qfi_v",
        &rows,
    )?;
    Ok(0)
}

fn certificate_json(c: &duality::GhzCertificate) -> String {
    format!(
        "{{\"n\": {}, \"max_ones_deviation\": {}, \"qfi_sum\": {}, \"max_complement_qfi\": {}, \"passed\": {}}}",
        c.n,
        fmt_f64(c.max_ones_deviation),
        fmt_f64(c.qfi_sum),
        fmt_f64(c.max_complement_qfi),
        c.passed
    )
}

fn separable_json(c: &duality::SeparableCertificate) -> String {
    format!(
        "{{\"n\": {}, \"max_identity_deviation\": {}, \"max_pair_sum_deviation\": {}, \"passed\": {}}}",
        c.n,
        fmt_f64(c.max_identity_deviation),
        fmt_f64(c.max_pair_sum_deviation),
        c.passed
    )
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let tol = if args.strict {
        BOUND_TOL
    } else {
        args.tolerance.unwrap_or(BOUND_TOL)
    };
    if args.equatorial && args.qubits != 2 {
        return Err(Error::Config("--equatorial requires --qubits 2".into()));
    }
    let summary = random_duality_campaign(args.qubits, args.states, args.seed)?;

    let (ghz_cert, sep_cert) = if args.equatorial {
        (None, None)
    } else {
        (
            Some(ghz_certificate(args.qubits)?),
            Some(separable_certificate(args.qubits, 20, args.seed)?),
        )
    };

    let bound_ok = summary.violations == 0 && summary.max_sum <= args.qubits as f64 + tol;
    let eq_ok = summary
        .equatorial
        .as_ref()
        .is_none_or(|eq| eq.max_sum_deviation <= tol);
    let certs_ok =
        ghz_cert.as_ref().is_none_or(|c| c.passed) && sep_cert.as_ref().is_none_or(|c| c.passed);
    let passed = if args.equatorial {
        eq_ok
    } else {
        bound_ok && eq_ok && certs_ok
    };

    let config = [
        ("qubits", args.qubits.to_string()),
        ("states", args.states.to_string()),
        ("seed", args.seed.to_string()),
        ("equatorial", args.equatorial.to_string()),
        ("bound_tolerance", fmt_f64(tol)),
    ];
    let eq_json = summary
        .equatorial
        .as_ref()
        .map_or("null".to_string(), |eq| {
            format!(
                "{{\"states\": {}, \"max_sum_deviation\": {}, \"worst_seed\": {}}}",
                eq.num_states,
                fmt_f64(eq.max_sum_deviation),
                eq.worst_seed
            )
        });
    let json = format!(
        "{{\"n\": {}, \"states\": {}, \"violations\": {}, \"max_sum\": {}, \"max_sum_seed\": {}, \"equatorial\": {}, \"ghz_certificate\": {}, \"separable_certificate\": {}, \"passed\": {}}}",
        summary.n,
        summary.num_states,
        summary.violations,
        fmt_f64(summary.max_sum),
        summary.max_sum_seed,
        eq_json,
        ghz_cert.as_ref().map_or("null".to_string(), certificate_json),
        sep_cert.as_ref().map_or("null".to_string(), separable_json),
        passed
    );
    let eq_dev = summary
        .equatorial
        .as_ref()
        .map_or(String::new(), |eq| fmt_f64(eq.max_sum_deviation));
    let row = format!(
        "{},{},{},{},{},{},{}",
        summary.n,
        summary.num_states,
        summary.violations,
        fmt_f64(summary.max_sum),
        summary.max_sum_seed,
        eq_dev,
        passed
    );
    emit(
        &args.out,
        "verify",
        &config,
        &json,
        "n,states,violations,max_sum,max_sum_seed,max_eq_deviation,passed",
        &[row],
    )?;
    if !passed {
        eprintln!(
            "verification failed: replay the worst probe with seed {}",
            summary.max_sum_seed
        );
        return Ok(1);
    }
    Ok(0)
}

fn cmd_estimate(args: EstimateArgs) -> Result<i32> {
    let (probe_args, model_name, direction_text, shots, repetitions, seed) = match &args.config {
        None => {
            let model = if args.model == ModelArg::Parity {
                "parity"
            } else {
                "local-x"
            };
            (
                args.probe,
                model.to_string(),
                args.direction.clone(),
                args.shots,
                args.repetitions,
                args.seed,
            )
        }
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let doc: ExperimentDoc = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("experiment config: {e}")))?;
            let theta = match &doc.theta {
                None => "zeros".to_string(),
                Some(v) => field_as_list(v, "theta")?,
            };
            (
                ProbeArgs {
                    probe: doc.probe,
                    qubits: doc.qubits,
                    theta,
                },
                doc.model,
                field_as_list(&doc.direction, "direction")?,
                doc.shots,
                doc.repetitions,
                doc.seed,
            )
        }
    };
    let (probe, probe_echo) = resolve_probe(&probe_args)?;
    let n = probe.num_qubits();
    let theta = resolve_theta(&probe_args.theta, n)?;
    let w = resolve_direction(&direction_text, n)?;
    let model = match model_name.as_str() {
        "parity" => MeasurementModel::GhzParity,
        "local-x" => MeasurementModel::LocalX,
        other => return Err(Error::Config(format!("unknown model '{other}'"))),
    };
    let floor = if args.strict {
        CRB_RATIO_FLOOR
    } else {
        args.tolerance.unwrap_or(CRB_RATIO_FLOOR)
    };

    let result = run_experiment(&probe, &theta, model, &w, shots, repetitions, seed)?;
    let ratio = result.empirical_variance / result.crb_total;
    let passed = ratio >= floor;

    let config = [
        ("probe", jstr(&probe_echo)),
        ("qubits", n.to_string()),
        ("theta", theta_echo(&theta)),
        (
            "model",
            jstr(if model == MeasurementModel::GhzParity {
                "parity"
            } else {
                "local-x"
            }),
        ),
        ("direction", direction_echo(&w)),
        ("shots", shots.to_string()),
        ("repetitions", repetitions.to_string()),
        ("seed", seed.to_string()),
        ("ratio_floor", fmt_f64(floor)),
    ];
    let json = format!(
        "{{\"target_value\": {}, \"estimate\": {}, \"empirical_variance\": {}, \"shots_per_repetition\": {}, \"repetitions\": {}, \"crb_per_shot\": {}, \"crb_total\": {}, \"variance_ratio\": {}, \"subseed_schedule\": {}, \"passed\": {}}}",
        fmt_f64(result.target_value),
        fmt_f64(result.estimate),
        fmt_f64(result.empirical_variance),
        result.shots_per_repetition,
        result.repetitions,
        fmt_f64(result.crb_per_shot),
        fmt_f64(result.crb_total),
        fmt_f64(ratio),
        jstr(SUBSEED_SCHEDULE),
        passed
    );
    let row = format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_f64(result.target_value),
        fmt_f64(result.estimate),
        fmt_f64(result.empirical_variance),
        result.shots_per_repetition,
        result.repetitions,
        fmt_f64(result.crb_per_shot),
        fmt_f64(result.crb_total),
        fmt_f64(ratio),
        passed
    );
    emit(
        &args.out,
        "estimate",
        &config,
        &json,
        "target_value,estimate,empirical_variance,shots_per_repetition,repetitions,crb_per_shot,crb_total,variance_ratio,passed",
        &[row],
    )?;
    if !passed {
        eprintln!("empirical variance fell below {floor} of the Cramer-Rao bound");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<i32> {
    let n = args.qubits;
    let w = resolve_direction(&args.direction, n)?;
    let mode = match args.mode {
        ModeArg::Full => ParameterizationMode::Full,
        ModeArg::Equatorial2 => ParameterizationMode::Equatorial2,
    };
    let mut config = vec![
        ("qubits", n.to_string()),
        ("direction", direction_echo(&w)),
        (
            "mode",
            jstr(if mode == ParameterizationMode::Full {
                "full"
            } else {
                "equatorial2"
            }),
        ),
        ("restarts", args.restarts.to_string()),
        ("steps", args.steps.to_string()),
        ("step_size", fmt_f64(args.step_size)),
        ("seed", args.seed.to_string()),
    ];

    let (json, csv_header, rows, best_state) = match &args.constraint {
        None => {
            let spec = ObjectiveSpec::new(w, None, 0.0)?;
            let run = optimize(
                n,
                mode,
                &spec,
                args.restarts,
                args.steps,
                args.step_size,
                args.seed,
            )?;
            let mut traj = String::from("[");
            let mut rows = Vec::with_capacity(run.trajectory.len());
            for (i, (step, value)) in run.trajectory.iter().enumerate() {
                if i > 0 {
                    traj.push_str(", ");
                }
                let _ = write!(traj, "[{step}, {}]", fmt_f64(*value));
                rows.push(format!("{step},{}", fmt_f64(*value)));
            }
            traj.push(']');
            let json = format!(
                "{{\"best_value\": {}, \"best_restart\": {}, \"max_value_seen\": {}, \"trajectory\": {}, \"best_state\": {}}}",
                fmt_f64(run.best_value),
                run.best_restart,
                fmt_f64(run.max_value_seen),
                traj,
                io::probe_state_json(&run.best_state)
            );
            (json, "step,value", rows, run.best_state)
        }
        Some(spec) => {
            let (dir_text, delta_text) = spec.rsplit_once(':').ok_or_else(|| {
                Error::Config(format!("constraint '{spec}' is not DIRECTION:DELTA"))
            })?;
            let delta: f64 = delta_text
                .parse()
                .map_err(|_| Error::Config(format!("bad constraint level '{delta_text}'")))?;
            let v = resolve_direction(dir_text, n)?;
            config.push(("constraint_direction", direction_echo(&v)));
            config.push(("constraint_delta", fmt_f64(delta)));
            let budget = ScanBudget {
                restarts: args.restarts,
                steps: args.steps,
                step_size: args.step_size,
                ..ScanBudget::default()
            };
            let mut points = frontier_scan(n, &w, &v, &[delta], budget, args.seed)?;
            let p = points.pop().expect("one grid point");
            let json = format!(
                "{{\"delta\": {}, \"qfi_w\": {}, \"qfi_v\": {}, \"constraint_met\": {}, \"best_state\": {}}}",
                fmt_f64(p.delta),
                fmt_f64(p.qfi_w),
                fmt_f64(p.qfi_v),
                p.constraint_met,
                io::probe_state_json(&p.state)
            );
            let row = format!(
                "{},{},{},{}",
                fmt_f64(p.delta),
                fmt_f64(p.qfi_w),
                fmt_f64(p.qfi_v),
                p.constraint_met
            );
            (json, "delta,qfi_w,qfi_v,constraint_met", vec![row], p.state)
        }
    };
    if let Some(path) = &args.save_state {
        std::fs::write(path, io::probe_state_json(&best_state) + "\n")?;
    }
    emit(&args.out, "optimize", &config, &json, csv_header, &rows)?;
    Ok(0)
}

fn cmd_adversary(args: AdversaryArgs) -> Result<i32> {
    let (probe, probe_echo) = resolve_probe(&args.probe)?;
    let n = probe.num_qubits();
    let theta = resolve_theta(&args.probe.theta, n)?;
    let v = resolve_direction(&args.direction, n)?;
    let epsilons = parse_f64_list(&args.epsilon)?;
    if epsilons.is_empty() {
        return Err(Error::Config("need at least one epsilon".into()));
    }
    let tol = if args.strict {
        BLINDNESS_TOL
    } else {
        args.tolerance.unwrap_or(BLINDNESS_TOL)
    };
    let models: &[(MeasurementModel, &str)] = match args.model {
        AdvModelArg::Both => &[
            (MeasurementModel::GhzParity, "parity"),
            (MeasurementModel::LocalX, "local-x"),
        ],
        AdvModelArg::Parity => &[(MeasurementModel::GhzParity, "parity")],
        AdvModelArg::LocalX => &[(MeasurementModel::LocalX, "local-x")],
    };

    let config = [
        ("probe", jstr(&probe_echo)),
        ("qubits", n.to_string()),
        ("theta", theta_echo(&theta)),
        ("direction", direction_echo(&v)),
        ("epsilon", io::json_f64_array(&epsilons)),
        ("blindness_tolerance", fmt_f64(tol)),
    ];
    let mut json = String::from("{\"rows\": [");
    let mut rows = Vec::new();
    let mut first = true;
    for (model, name) in models {
        for eps in &epsilons {
            let dev = adversary_shift_test(&probe, &theta, &v, *eps, *model)?;
            let blind = dev <= tol;
            if !first {
                json.push_str(", ");
            }
            first = false;
            let _ = write!(
                json,
                "{{\"model\": {}, \"epsilon\": {}, \"max_deviation\": {}, \"blind\": {}}}",
                jstr(name),
                fmt_f64(*eps),
                fmt_f64(dev),
                blind
            );
            rows.push(format!("{name},{},{},{blind}", fmt_f64(*eps), fmt_f64(dev)));
        }
    }
    json.push_str("]}");
    emit(
        &args.out,
        "adversary",
        &config,
        &json,
        "model,epsilon,max_deviation,blind",
        &rows,
    )?;
    Ok(0)
}
