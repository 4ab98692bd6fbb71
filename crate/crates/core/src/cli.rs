//! The `jsynth` command line.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a result was produced but
//! at least one Kronecker search hit its cap.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gates::JGate;
use crate::hypersphere::prepare_state;
use crate::kronecker::{check_independence, default_constants, find_power, KroneckerQuery};
use crate::numerics::{haar_unitary, nearest_unitary, phase_align, Vector};
use crate::report::{parse_matrix, parse_state, records, PrepareReportFile, ReportFile};
use crate::synthesis::{expand_perms, synth_unitary, SynthesisConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGRADED: i32 = 2;

/// Unitarity tolerance for targets read from disk.
pub const INPUT_UNITARY_TOL: f64 = 1e-8;
/// Tolerance on `‖v‖ − 1` before a state is renormalized with a warning.
pub const INPUT_NORM_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "jsynth", version, about = "Gate synthesis from powers of one universal two-qubit gate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate a 4×4 unitary read from a matrix file.
    Synth(SynthArgs),
    /// Prepare a two-qubit pure state from (0, 0, 0, 1).
    Prepare(PrepareArgs),
    /// Find m with every e^{i·m·alpha_j} close to e^{i·target_j}.
    Kron(KronArgs),
    /// Synthesize random targets and write a CSV summary.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GateArgs {
    /// Kronecker tolerance per emitted power.
    #[arg(long, default_value_t = 5e-3)]
    pub eps_step: f64,
    /// Rotation angle of J (default √2).
    #[arg(long, value_parser = parse_angle)]
    pub alpha: Option<f64>,
    /// Phase angle of J (default √3).
    #[arg(long, value_parser = parse_angle)]
    pub beta: Option<f64>,
    /// Search cap for each power.
    #[arg(long, value_parser = parse_count, default_value = "1e8")]
    pub m_max: u64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[command(flatten)]
    pub gate: GateArgs,
    /// Replace permutations by powers of J where possible.
    #[arg(long)]
    pub expand_perms: bool,
    /// Report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// File with four complex amplitudes.
    #[arg(long)]
    pub state: PathBuf,
    #[command(flatten)]
    pub gate: GateArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KronArgs {
    /// Comma-separated phase constants, e.g. `sqrt2,sqrt3`.
    #[arg(long)]
    pub alphas: String,
    /// Comma-separated target phases, e.g. `pi/2,0`.
    #[arg(long)]
    pub targets: String,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_parser = parse_count, default_value = "1e8")]
    pub m_max: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Comma-separated list of per-step tolerances.
    #[arg(long, default_value = "5e-3")]
    pub eps_step: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fill the wall_time_ms column (makes the output run-dependent).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Angle literal: an optional sign, then factors joined by `*` and at most
/// one `/` divisor. A factor is a number, `pi`, or `sqrtN` / `sqrt(N)`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let product = |expr: &str| -> Result<f64, String> {
        expr.split('*').try_fold(1.0, |acc, f| Ok(acc * angle_factor(f.trim())?))
    };
    let mut v = product(num).map_err(|e| format!("`{s}`: {e}"))?;
    if let Some(d) = den {
        v /= product(d).map_err(|e| format!("`{s}`: {e}"))?;
    }
    if !v.is_finite() {
        return Err(format!("`{s}` is not a finite angle"));
    }
    Ok(if neg { -v } else { v })
}

fn angle_factor(f: &str) -> Result<f64, String> {
    if f.starts_with(['+', '-']) {
        return Err(format!("misplaced sign in `{f}`"));
    }
    let lower = f.to_ascii_lowercase();
    if lower == "pi" || f == "π" {
        return Ok(std::f64::consts::PI);
    }
    let root = lower.strip_prefix("sqrt").or_else(|| f.strip_prefix('√'));
    if let Some(arg) = root {
        let arg = arg.trim_start_matches('(').trim_end_matches(')');
        let x: f64 = arg.parse().map_err(|_| format!("bad square root `{f}`"))?;
        return Ok(x.sqrt());
    }
    f.parse::<f64>().map_err(|_| format!("bad number `{f}`"))
}

/// Positive integer, also accepted in integral scientific form (`1e8`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|i| i.is_empty()) {
        return Err(format!("malformed list `{s}`"));
    }
    items.into_iter().map(parse_angle).collect()
}

/// Write through a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Output sink shared by the subcommands.
fn emit(out: Option<&Path>, contents: &str, stdout: &mut dyn std::io::Write) -> Result<(), String> {
    match out {
        Some(p) => write_atomic(p, contents.as_bytes()).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(contents.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn resolve_gate(args: &GateArgs, stderr: &mut dyn std::io::Write) -> SynthesisConfig {
    let (a0, b0) = default_constants();
    let alpha = args.alpha.unwrap_or(a0);
    let beta = args.beta.unwrap_or(b0);
    if args.alpha.is_some() || args.beta.is_some() {
        let _ = writeln!(
            stderr,
            "warning: non-default J({alpha}, {beta}); rational independence of alpha, beta and pi is not checked"
        );
        if let Some(rel) = check_independence(alpha, beta) {
            let _ = writeln!(
                stderr,
                "warning: {:?}·(alpha, beta, pi) + {} ≈ 0 (residual {:.1e}); searches may not converge",
                rel.coefficients, rel.constant, rel.residual
            );
        }
    }
    SynthesisConfig { gate: JGate::new(alpha, beta), eps_step: args.eps_step, m_max: args.m_max }
}

fn read_text(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn cmd_synth(args: &SynthArgs, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> Result<i32, String> {
    let config = resolve_gate(&args.gate, stderr);
    let text = read_text(&args.target)?;
    let target = parse_matrix(&text).map_err(|e| format!("{}: {e}", args.target.display()))?;
    if target.dim() != 4 {
        return Err(format!("{}: expected a 4×4 matrix, got {}×{}", args.target.display(), target.dim(), target.dim()));
    }
    let residual = target.unitarity_residual();
    if residual > INPUT_UNITARY_TOL {
        return Err(format!("{}: matrix is not unitary (residual {residual:.3e})", args.target.display()));
    }
    let target = nearest_unitary(&target).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report = synth_unitary(&target, &config).map_err(|e| e.to_string())?;
    let mut sequence = report.sequence.clone();
    let mut measured_error = report.measured_error;
    let mut global_phase = report.global_phase;
    let mut unreachable_perms = None;
    if args.expand_perms {
        let e = expand_perms(&sequence, &config).map_err(|e| e.to_string())?;
        if e.unreachable > 0 {
            let _ = writeln!(stderr, "warning: {} permutation(s) have no J-power realization and were kept", e.unreachable);
        }
        sequence = e.sequence;
        let align = phase_align(&sequence.evaluate(), &target).map_err(|e| e.to_string())?;
        measured_error = align.distance;
        global_phase = align.phase;
        unreachable_perms = Some(e.unreachable);
    }
    let file = ReportFile {
        target_path: args.target.display().to_string(),
        alpha: config.gate.alpha,
        beta: config.gate.beta,
        eps_step: config.eps_step,
        sequence: records(&sequence),
        total_budget: sequence.total_budget(),
        measured_error,
        global_phase,
        eigen_angles: report.eigen_angles.clone(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        exhausted_steps: sequence.exhausted_steps,
        unreachable_perms,
    };
    emit(args.out.as_deref(), &to_json(&file), stdout)?;
    Ok(if sequence.exhausted_steps > 0 { EXIT_DEGRADED } else { EXIT_OK })
}

fn cmd_prepare(args: &PrepareArgs, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> Result<i32, String> {
    let config = resolve_gate(&args.gate, stderr);
    let text = read_text(&args.state)?;
    let amps = parse_state(&text).map_err(|e| format!("{}: {e}", args.state.display()))?;
    let raw = Vector::new(&amps).map_err(|e| e.to_string())?;
    let norm = raw.norm();
    let state = raw.normalized().ok_or_else(|| format!("{}: zero state vector", args.state.display()))?;
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        let _ = writeln!(stderr, "warning: state has norm {norm}; normalizing");
    }
    let start = Instant::now();
    let prep = prepare_state(&state, &config).map_err(|e| e.to_string())?;
    let file = PrepareReportFile {
        state_path: args.state.display().to_string(),
        alpha: config.gate.alpha,
        beta: config.gate.beta,
        eps_step: config.eps_step,
        state: state.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        sequence: records(&prep.sequence),
        total_budget: prep.sequence.total_budget(),
        fidelity: prep.fidelity,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        exhausted_steps: prep.sequence.exhausted_steps,
    };
    emit(args.out.as_deref(), &to_json(&file), stdout)?;
    Ok(if file.exhausted_steps > 0 { EXIT_DEGRADED } else { EXIT_OK })
}

fn cmd_kron(args: &KronArgs, stdout: &mut dyn std::io::Write) -> Result<i32, String> {
    let alphas = parse_list(&args.alphas)?;
    let targets = parse_list(&args.targets)?;
    let q = KroneckerQuery::new(alphas, targets, args.eps).with_m_max(args.m_max);
    let r = find_power(&q).map_err(|e| e.to_string())?;
    let errors: Vec<String> = r.achieved_errors.iter().map(f64::to_string).collect();
    let text = format!("m = {}\nerrors = {}\nexhausted = {}\n", r.m, errors.join(", "), r.exhausted);
    stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(if r.exhausted { EXIT_DEGRADED } else { EXIT_OK })
}

#[derive(Serialize)]
struct BenchRow {
    eps_step: f64,
    trial: usize,
    sequence_length: usize,
    total_budget: f64,
    measured_error: f64,
    wall_time_ms: Option<f64>,
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn std::io::Write) -> Result<i32, String> {
    let eps_list = parse_list(&args.eps_step)?;
    if let Some(bad) = eps_list.iter().find(|e| e.is_nan() || **e <= 0.0) {
        return Err(format!("eps-step must be positive, got {bad}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let targets: Vec<_> = (0..args.trials).map(|_| haar_unitary(&mut rng, 4)).collect();
    // explicit header so an empty run still gets one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["eps_step", "trial", "sequence_length", "total_budget", "measured_error", "wall_time_ms"])
        .map_err(|e| e.to_string())?;
    let mut degraded = false;
    for &eps in &eps_list {
        let config = SynthesisConfig::default().with_eps_step(eps);
        for (trial, g) in targets.iter().enumerate() {
            let r = synth_unitary(g, &config).map_err(|e| e.to_string())?;
            degraded |= r.exhausted_steps > 0;
            let row = BenchRow {
                eps_step: eps,
                trial,
                sequence_length: r.sequence.len(),
                total_budget: r.total_budget(),
                measured_error: r.measured_error,
                wall_time_ms: args.timing.then_some(r.wall_time.as_secs_f64() * 1e3),
            };
            w.serialize(row).map_err(|e| e.to_string())?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(if degraded { EXIT_DEGRADED } else { EXIT_OK })
}

/// Parse `argv` and run, writing to the given streams. Returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let mut msg = String::new();
            let _ = write!(msg, "{}", e.render());
            let sink: &mut dyn std::io::Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(msg.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a, stdout, stderr),
        Command::Prepare(a) => cmd_prepare(a, stdout, stderr),
        Command::Kron(a) => cmd_kron(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
