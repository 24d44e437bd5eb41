//! Command-line front end.
//!
//! Exit codes: 0 success, 1 numeric failure (bound violation, lemma
//! mismatch, non-convergence), 2 usage or I/O error, 3 singular grid point.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, bound_report, oracle, FALLBACK_RHO_HAT};
use crate::error::Error;
use crate::experiments::{SweepKind, SweepPlan, DEFAULT_N_GRID};
use crate::linalg::{format_f64, read_matrix, write_matrix, FloatFormat};
use crate::matgen::{assemble, build_model, read_model, write_model};
use crate::sign::{build_grid, sign_de_with, sign_newton, involution_residual, DeOptions, DEFAULT_D_CONST, DEFAULT_N_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

const MAX_THREADS: usize = 1024;
const MAX_N_POINTS: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "matsign", version, about = "Matrix sign function by double-exponential quadrature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute sign(A) for a matrix file.
    Sign(SignArgs),
    /// Evaluate the a priori error bounds for a generated model.
    Bound(BoundArgs),
    /// Generate a test model with prescribed condition numbers.
    Gen(GenArgs),
    /// Check the integral identities against numerical quadrature.
    Lemmas(LemmaArgs),
    /// Run an error sweep and fit log-log slopes.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
struct ConfigArg {
    /// key=value file whose keys are long flag names; flags given on the
    /// command line take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    De,
    Newton,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct SignArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Per-point CSV: k, t, weight, growth_factor, norm_Y.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_N_POINTS)]
    n_points: usize,
    #[arg(long, default_value_t = DEFAULT_D_CONST)]
    d_const: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Method::De)]
    method: Method,
    /// Newton stopping tolerance.
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long)]
    hex_floats: bool,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    kappa_x: f64,
    #[arg(long, default_value_t = 10.0)]
    kappa_lambda: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct BoundArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Model directory written by `gen`; otherwise a model is generated.
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    generate: ModelArgs,
    /// Growth factor; taken from a DE run when `--measure` is set.
    #[arg(long)]
    rho_hat: Option<f64>,
    /// Run the DE method on the model and report the measured error too.
    #[arg(long)]
    measure: bool,
    #[arg(long, default_value_t = DEFAULT_N_POINTS)]
    n_points: usize,
    #[arg(long, default_value_t = DEFAULT_D_CONST)]
    d_const: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// key=value report.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Header plus one CSV row.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct GenArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    model: ModelArgs,
    /// Directory for X.mat, X_inv.mat, lambda.mat, meta.txt and A.mat.
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    hex_floats: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct LemmaArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Parameter choices per lemma.
    #[arg(long, default_value_t = 20)]
    grid_size: usize,
    /// Largest relative deviation accepted.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct ExperimentArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// kappa-x, kappa-lambda or n.
    #[arg(long)]
    sweep: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Drop sizes above this from the size sweep grid.
    #[arg(long)]
    max_n: Option<usize>,
    /// Comma-separated values of the swept quantity.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    /// Condition number held fixed during the sweep.
    #[arg(long)]
    fixed_kappa: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    d_const: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Record wall-clock times instead of zeros.
    #[arg(long)]
    timing: bool,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::SingularPoint { .. } => EXIT_SINGULAR,
        Error::Io { .. } | Error::Parse { .. } | Error::InvalidData(_) | Error::DimensionMismatch(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn fail(io: &mut Io, e: &Error) -> i32 {
    let _ = writeln!(io.err, "error: {e}");
    error_code(e)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run(args, &mut out, &mut err)
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out, err };
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(ParseFailure::Clap(e)) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(io.err, "{rendered}") } else { write!(io.out, "{rendered}") };
            return code;
        }
        Err(ParseFailure::Config(problems)) => return report_problems(&mut io, &problems),
    };
    let problems = validate(&cli.command);
    if !problems.is_empty() {
        return report_problems(&mut io, &problems);
    }
    match cli.command {
        Command::Sign(a) => cmd_sign(&a, &mut io),
        Command::Bound(a) => cmd_bound(&a, &mut io),
        Command::Gen(a) => cmd_gen(&a, &mut io),
        Command::Lemmas(a) => cmd_lemmas(&a, &mut io),
        Command::Experiment(a) => cmd_experiment(&a, &mut io),
    }
}

fn report_problems(io: &mut Io, problems: &[String]) -> i32 {
    for p in problems {
        let _ = writeln!(io.err, "error: {p}");
    }
    EXIT_USAGE
}

enum ParseFailure {
    Clap(clap::Error),
    Config(Vec<String>),
}

fn parse(argv: &[OsString]) -> Result<Cli, ParseFailure> {
    let cli = Cli::try_parse_from(argv).map_err(ParseFailure::Clap)?;
    let config = match &cli.command {
        Command::Sign(a) => &a.config,
        Command::Bound(a) => &a.config,
        Command::Gen(a) => &a.config,
        Command::Lemmas(a) => &a.config,
        Command::Experiment(a) => &a.config,
    };
    let Some(path) = config.config.clone() else {
        return Ok(cli);
    };
    // Config entries become flags placed ahead of the user's own, so the
    // later command-line occurrence wins.
    let sub = argv[1].to_string_lossy().into_owned();
    let injected = config_flags(&path, &sub).map_err(ParseFailure::Config)?;
    let mut merged = vec![argv[0].clone(), argv[1].clone()];
    merged.extend(injected.into_iter().map(OsString::from));
    merged.extend(argv[2..].iter().cloned());
    Cli::try_parse_from(merged).map_err(ParseFailure::Clap)
}

fn config_flags(path: &Path, subcommand: &str) -> Result<Vec<String>, Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    let command = Cli::command();
    let Some(sub) = command.find_subcommand(subcommand) else {
        return Err(vec![format!("unknown subcommand {subcommand}")]);
    };
    let mut flags = Vec::new();
    let mut problems = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let origin = format!("{}:{}", path.display(), i + 1);
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("{origin}: expected key=value"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let arg = sub.get_arguments().find(|a| a.get_long() == Some(key));
        let Some(arg) = arg.filter(|_| key != "config" && key != "help") else {
            problems.push(format!("{origin}: unknown key '{key}' for {subcommand}"));
            continue;
        };
        if !seen.insert(key.to_string()) {
            problems.push(format!("{origin}: duplicate key '{key}'"));
            continue;
        }
        if arg.get_action().takes_values() {
            flags.push(format!("--{key}={value}"));
        } else {
            match value {
                "true" => flags.push(format!("--{key}")),
                "false" => {}
                _ => problems.push(format!("{origin}: '{key}' takes true or false")),
            }
        }
    }
    if problems.is_empty() {
        Ok(flags)
    } else {
        Err(problems)
    }
}

fn check_grid_args(problems: &mut Vec<String>, n_points: usize, d_const: f64, threads: usize) {
    if n_points == 0 || n_points > MAX_N_POINTS {
        problems.push(format!("--n-points must be in 1..={MAX_N_POINTS}, got {n_points}"));
    }
    if !(d_const > 0.0 && d_const.is_finite()) {
        problems.push(format!("--d-const must be positive, got {d_const}"));
    }
    if threads == 0 || threads > MAX_THREADS {
        problems.push(format!("--threads must be in 1..={MAX_THREADS}, got {threads}"));
    }
}

fn check_kappa(problems: &mut Vec<String>, flag: &str, kappa: f64) {
    if !(kappa >= 1.0 && kappa.is_finite()) {
        problems.push(format!("--{flag} must be at least 1, got {kappa}"));
    }
}

fn check_model(problems: &mut Vec<String>, m: &ModelArgs) {
    if m.n < 2 {
        problems.push(format!("--n must be at least 2, got {}", m.n));
    }
    check_kappa(problems, "kappa-x", m.kappa_x);
    check_kappa(problems, "kappa-lambda", m.kappa_lambda);
}

/// Every range problem in the parsed arguments, not just the first.
fn validate(command: &Command) -> Vec<String> {
    let mut p = Vec::new();
    match command {
        Command::Sign(a) => {
            check_grid_args(&mut p, a.n_points, a.d_const, a.threads);
            if !(a.tol > 0.0) {
                p.push(format!("--tol must be positive, got {}", a.tol));
            }
            if a.max_iter == 0 {
                p.push("--max-iter must be at least 1".into());
            }
            if a.method == Method::Newton && a.diagnostics.is_some() {
                p.push("--diagnostics applies to --method de only".into());
            }
        }
        Command::Bound(a) => {
            check_grid_args(&mut p, a.n_points, a.d_const, a.threads);
            if a.model.is_none() {
                check_model(&mut p, &a.generate);
            }
            if let Some(r) = a.rho_hat {
                if !(r >= 1.0 && r.is_finite()) {
                    p.push(format!("--rho-hat must be at least 1, got {r}"));
                }
                if a.measure {
                    p.push("--rho-hat and --measure are exclusive".into());
                }
            }
        }
        Command::Gen(a) => check_model(&mut p, &a.model),
        Command::Lemmas(a) => {
            if a.grid_size == 0 {
                p.push("--grid-size must be at least 1".into());
            }
            if !(a.tol > 0.0) {
                p.push(format!("--tol must be positive, got {}", a.tol));
            }
        }
        Command::Experiment(a) => {
            let Some(kind) = SweepKind::parse(&a.sweep) else {
                p.push(format!("--sweep must be kappa-x, kappa-lambda or n, got '{}'", a.sweep));
                return p;
            };
            let plan = experiment_plan(a, kind);
            check_grid_args(&mut p, plan.options.n_points, plan.options.d_const, plan.options.threads);
            if plan.n < 2 {
                p.push(format!("--n must be at least 2, got {}", plan.n));
            }
            if plan.trials == 0 {
                p.push("--trials must be at least 1".into());
            }
            check_kappa(&mut p, "fixed-kappa", plan.fixed_kappa);
            if plan.grid.is_empty() {
                p.push("the sweep grid is empty (check --grid and --max-n)".into());
            }
            let floor = if kind == SweepKind::N { 2.0 } else { 1.0 };
            if plan.grid.iter().any(|&v| !(v >= floor && v.is_finite())) {
                p.push(format!("--grid values must be at least {floor}"));
            }
            if plan.grid.windows(2).any(|w| w[0] > w[1]) {
                p.push("--grid must be ascending".into());
            }
            if kind == SweepKind::N && plan.grid.iter().any(|v| v.fract() != 0.0) {
                p.push("--grid sizes must be whole numbers".into());
            }
            if kind != SweepKind::N && a.max_n.is_some() {
                p.push("--max-n applies to --sweep n only".into());
            }
        }
    }
    p
}

fn experiment_plan(a: &ExperimentArgs, kind: SweepKind) -> SweepPlan {
    let mut plan = SweepPlan::default_for(kind);
    if let Some(grid) = &a.grid {
        plan.grid = grid.clone();
    } else if kind == SweepKind::N {
        let max_n = a.max_n.unwrap_or(usize::MAX);
        plan.grid = DEFAULT_N_GRID.iter().filter(|&&n| n <= max_n).map(|&n| n as f64).collect();
    }
    if let Some(max_n) = a.max_n {
        plan.grid.retain(|&v| v <= max_n as f64);
    }
    plan.n = a.n.unwrap_or(plan.n);
    plan.seed = a.seed.unwrap_or(plan.seed);
    plan.trials = a.trials.unwrap_or(plan.trials);
    plan.fixed_kappa = a.fixed_kappa.unwrap_or(plan.fixed_kappa);
    plan.options.n_points = a.n_points.unwrap_or(plan.options.n_points);
    plan.options.d_const = a.d_const.unwrap_or(plan.options.d_const);
    plan.options.threads = a.threads.unwrap_or(plan.options.threads);
    plan.options.timing = a.timing;
    plan
}

fn float_format(hex: bool) -> FloatFormat {
    if hex {
        FloatFormat::Hex
    } else {
        FloatFormat::Decimal
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_sign(a: &SignArgs, io: &mut Io) -> i32 {
    let result = (|| -> Result<f64, Error> {
        let m = read_matrix(&a.input)?;
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}: matrix is {}x{}, not square", a.input.display(), m.rows(), m.cols())));
        }
        let s = match a.method {
            Method::De => {
                let grid = build_grid(a.n_points, a.d_const)?;
                let r = sign_de_with(&m, &grid, &DeOptions { threads: a.threads })?;
                if let Some(path) = &a.diagnostics {
                    let mut csv = String::from("k,t,weight,growth_factor,norm_Y\n");
                    for d in &r.diagnostics {
                        let f = |v: f64| format_f64(v, float_format(a.hex_floats));
                        let _ = writeln!(csv, "{},{},{},{},{}", d.k, f(d.t), f(d.weight), f(d.growth_factor), f(d.norm_y));
                    }
                    write_text(path, &csv)?;
                }
                if r.grid.dropped > 0 {
                    let _ = writeln!(io.err, "note: {} grid points outside the representable range were dropped", r.grid.dropped);
                }
                r.sign_matrix
            }
            Method::Newton => sign_newton(&m, a.tol, a.max_iter)?,
        };
        write_matrix(&a.output, &s, float_format(a.hex_floats))?;
        involution_residual(&s)
    })();
    match result {
        Ok(residual) => {
            let _ = writeln!(io.out, "involution_residual={}", format_f64(residual, FloatFormat::Decimal));
            EXIT_OK
        }
        Err(e) => fail(io, &e),
    }
}

fn cmd_bound(a: &BoundArgs, io: &mut Io) -> i32 {
    let result = (|| -> Result<String, Error> {
        let model = match &a.model {
            Some(dir) => read_model(dir)?,
            None => build_model(a.generate.n, a.generate.kappa_x, a.generate.kappa_lambda, a.generate.seed)?,
        };
        let grid = build_grid(a.n_points, a.d_const)?;
        let mut measured = None;
        let rho_hat = if a.measure {
            let m = crate::experiments::measure_error_with(&assemble(&model)?, &model, &grid, &DeOptions { threads: a.threads })?;
            measured = Some(m.error_frob);
            m.rho_hat
        } else {
            a.rho_hat.unwrap_or(FALLBACK_RHO_HAT)
        };
        let report = bound_report(&model, rho_hat, grid.m_points())?;
        let mut text = report.to_key_value();
        if let Some(e) = measured {
            let _ = writeln!(text, "measured_error_frob={}", format_f64(e, FloatFormat::Decimal));
        }
        if let Some(path) = &a.output {
            write_text(path, &text)?;
        }
        if let Some(path) = &a.csv {
            write_text(path, &format!("{}\n{}\n", bounds::BOUND_CSV_HEADER, report.to_csv_row()))?;
        }
        Ok(text)
    })();
    match result {
        Ok(text) => {
            let _ = write!(io.out, "{text}");
            EXIT_OK
        }
        Err(e) => fail(io, &e),
    }
}

fn cmd_gen(a: &GenArgs, io: &mut Io) -> i32 {
    let m = &a.model;
    let result = (|| -> Result<(), Error> {
        let model = build_model(m.n, m.kappa_x, m.kappa_lambda, m.seed)?;
        let format = float_format(a.hex_floats);
        write_model(&a.output, &model, format)?;
        write_matrix(&a.output.join("A.mat"), &assemble(&model)?, format)
    })();
    match result {
        Ok(()) => {
            let _ = writeln!(io.out, "wrote model n={} kappa2_x={} kappa2_lambda={} seed={} to {}", m.n, m.kappa_x, m.kappa_lambda, m.seed, a.output.display());
            EXIT_OK
        }
        Err(e) => fail(io, &e),
    }
}

/// Outcome of one lemma check: worst relative deviation, or failures.
#[derive(Clone, Debug, Default)]
pub struct LemmaCheck {
    pub cases: usize,
    pub max_deviation: f64,
    pub errors: Vec<String>,
}

impl LemmaCheck {
    fn record(&mut self, label: String, closed: Result<f64, Error>, numeric: Result<oracle::QuadResult, Error>) {
        self.cases += 1;
        match (closed, numeric) {
            (Ok(c), Ok(q)) => self.max_deviation = self.max_deviation.max((c - q.value).abs() / q.value.abs()),
            (Err(e), _) | (_, Err(e)) => self.errors.push(format!("{label}: {e}")),
        }
    }
}

/// `count` eigenvalues off the imaginary axis spread over four quadrants.
pub fn lemma1_cases(count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let angle = -1.4 + 2.8 * (i as f64 + 0.5) / count as f64;
            let radius = 0.25 * 16f64.powf(((i * 7) % count) as f64 / count as f64);
            let re = radius * angle.cos() * if i % 2 == 0 { 1.0 } else { -1.0 };
            (re, radius * angle.sin())
        })
        .collect()
}

/// `count` pairs `(a, c)` with `a > 0` and `-a² < c ≤ a²`.
pub fn lemma2_cases(count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let a = 0.3 * 20f64.powf(((i * 3) % count) as f64 / count as f64);
            let frac = -0.95 + 1.95 * i as f64 / (count.max(2) - 1) as f64;
            (a, frac * a * a)
        })
        .collect()
}

pub fn check_lemma1(count: usize, tol: f64) -> LemmaCheck {
    let mut check = LemmaCheck::default();
    for (re, im) in lemma1_cases(count) {
        let q = oracle::quad_oracle(oracle::Integrand::QuarticModulus { re, im }, oracle::Domain::WholeLine, tol * 1e-2);
        check.record(format!("λ={re}{im:+}i"), bounds::lemma1_integral(re, im), q);
    }
    check
}

pub fn check_lemma2(count: usize, tol: f64) -> LemmaCheck {
    let mut check = LemmaCheck::default();
    for (a, c) in lemma2_cases(count) {
        let q = oracle::quad_oracle(oracle::Integrand::Biquadratic { a, c }, oracle::Domain::HalfLine(0.0), tol * 1e-2);
        check.record(format!("a={a}, c={c}"), bounds::lemma2_integral(a, c), q);
    }
    check
}

/// Moduli `k = 0.05·i` for `i = 1..=19`, then `0.999`.
pub fn lemma3_moduli() -> Vec<f64> {
    let mut ks: Vec<f64> = (1..=19).map(|i| 0.05 * i as f64).collect();
    ks.push(0.999);
    ks
}

/// Number of moduli where the bound falls below `K(k)`.
pub fn lemma3_violations(ks: &[f64]) -> Result<usize, Error> {
    let mut bad = 0;
    for &k in ks {
        if bounds::lemma3_k_bound(k)? < bounds::elliptic_k(k)? {
            bad += 1;
        }
    }
    Ok(bad)
}

fn cmd_lemmas(a: &LemmaArgs, io: &mut Io) -> i32 {
    let mut ok = true;
    for (name, check) in [("lemma1", check_lemma1(a.grid_size, a.tol)), ("lemma2", check_lemma2(a.grid_size, a.tol))] {
        let pass = check.errors.is_empty() && check.max_deviation <= a.tol;
        ok &= pass;
        let _ = writeln!(
            io.out,
            "{} {name}: cases={} max_rel_deviation={:.3e}",
            if pass { "PASS" } else { "FAIL" },
            check.cases,
            check.max_deviation
        );
        for e in &check.errors {
            let _ = writeln!(io.err, "{name}: {e}");
        }
    }
    let ks = lemma3_moduli();
    match lemma3_violations(&ks) {
        Ok(bad) => {
            ok &= bad == 0;
            let _ = writeln!(io.out, "{} lemma3: cases={} violations={bad}", if bad == 0 { "PASS" } else { "FAIL" }, ks.len());
        }
        Err(e) => {
            ok = false;
            let _ = writeln!(io.out, "FAIL lemma3: {e}");
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}

fn cmd_experiment(a: &ExperimentArgs, io: &mut Io) -> i32 {
    let kind = SweepKind::parse(&a.sweep).expect("validated");
    let plan = experiment_plan(a, kind);
    let outcome = match plan.run() {
        Ok(o) => o,
        Err(e) => return fail(io, &e),
    };
    let stem = format!("sweep_{}", kind.name().replace('-', "_"));
    if let Err(e) = outcome.write_files(&a.output_dir, &stem) {
        return fail(io, &e);
    }
    let summary = outcome.summarize();
    let _ = write!(io.out, "{}", summary.to_text(&outcome.failures));
    for f in &outcome.failures {
        let _ = writeln!(io.err, "record {} (seed {}) failed: {}", f.index, f.seed, f.message);
    }
    if summary.violations == 0 && outcome.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}
