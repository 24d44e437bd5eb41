//! Error sweeps over κ₂(X), κ₂(Λ) and n, with log-log slope fits and
//! bound comparisons.
//!
//! Record `r` of a sweep with master seed `s` draws its random factors from
//! seed `s + r` (wrapping), so any record can be regenerated on its own.
//! Records are ordered grid point major, trial minor.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::bounds::{bound_report, FALLBACK_RHO_HAT};
use crate::error::{Error, Result};
use crate::linalg::{format_f64, DenseMatrix, FloatFormat};
use crate::matgen::{assemble, conditioned_diagonal, random_orthogonal, reference_sign, build_model, EigenModel};
use crate::sign::{build_grid, sign_de_with, DeOptions, QuadratureGrid, DEFAULT_D_CONST, DEFAULT_N_POINTS};

pub const DEFAULT_TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 7;
/// κ₂(Λ) held fixed while κ₂(X) varies, and κ₂(X) held fixed while κ₂(Λ) varies.
pub const DEFAULT_FIXED_KAPPA: f64 = 10.0;
pub const DEFAULT_N: usize = 100;
pub const DEFAULT_N_GRID: [usize; 4] = [240, 480, 960, 1280];
pub const DEFAULT_N_SWEEP_KAPPA: f64 = 100.0;

// Quadrature grids per sweep. Eigenvalue magnitudes span [1, κ₂(Λ)], and the
// width of the strip where the transformed integrand is analytic shrinks
// as that span grows, so a wide spectrum needs a smaller step. The κ sweeps
// keep `scalar_discretization_error` near 1e-15 up to κ₂(Λ) = 10⁶; the size
// sweep, whose roundoff sits near 1e-9, settles for 2e-13 to save solves.
pub const KAPPA_SWEEP_N_POINTS: usize = 250;
pub const KAPPA_SWEEP_D_CONST: f64 = 0.05;
pub const N_SWEEP_N_POINTS: usize = 60;
pub const N_SWEEP_D_CONST: f64 = 0.1;

pub const CSV_HEADER: &str =
    "n,kappa2_x,kappa2_lambda,seed,n_points,measured_error_frob,e1_bound,e2_bound,rho_hat,wall_time_ms,assumption_ok";

pub fn default_kappa_x_grid() -> Vec<f64> {
    (1..=6).map(|e| 10f64.powi(e)).collect()
}

pub fn default_kappa_lambda_grid() -> Vec<f64> {
    (0..=6).map(|e| 10f64.powi(e)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    KappaX,
    KappaLambda,
    N,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::KappaX => "kappa-x",
            SweepKind::KappaLambda => "kappa-lambda",
            SweepKind::N => "n",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "kappa-x" => Some(SweepKind::KappaX),
            "kappa-lambda" => Some(SweepKind::KappaLambda),
            "n" => Some(SweepKind::N),
            _ => None,
        }
    }

    fn axis(self, r: &ExperimentRecord) -> f64 {
        match self {
            SweepKind::KappaX => r.kappa2_x,
            SweepKind::KappaLambda => r.kappa2_lambda,
            SweepKind::N => r.n as f64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n_points: usize,
    pub d_const: f64,
    pub threads: usize,
    /// Record wall-clock times; otherwise the column is written as zero so
    /// repeated runs produce identical files.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            n_points: DEFAULT_N_POINTS,
            d_const: DEFAULT_D_CONST,
            threads: 1,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub n: usize,
    pub kappa2_x: f64,
    pub kappa2_lambda: f64,
    pub seed: u64,
    pub n_points: usize,
    pub measured_error_frob: f64,
    pub e1_bound: f64,
    pub e2_bound: f64,
    pub wall_time_ms: f64,
    pub rho_hat: f64,
    pub assumption_ok: bool,
}

impl ExperimentRecord {
    pub fn total_bound(&self) -> f64 {
        self.e1_bound + self.e2_bound
    }

    /// The measured error exceeds the bound on a record where the bound applies.
    pub fn violates_bound(&self) -> bool {
        self.assumption_ok && !(self.measured_error_frob <= self.total_bound())
    }

    pub fn to_csv_row(&self) -> String {
        let f = |v: f64| format_f64(v, FloatFormat::Decimal);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            f(self.kappa2_x),
            f(self.kappa2_lambda),
            self.seed,
            self.n_points,
            f(self.measured_error_frob),
            f(self.e1_bound),
            f(self.e2_bound),
            f(self.rho_hat),
            f(self.wall_time_ms),
            self.assumption_ok
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordFailure {
    pub index: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub kind: SweepKind,
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<RecordFailure>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_samples: usize,
}

/// Least squares fit of `log₁₀ y = slope·log₁₀ x + intercept`.
pub fn loglog_regress(xs: &[f64], ys: &[f64]) -> Result<RegressionResult> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(format!("{} x values, {} y values", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::Domain("regression needs at least two points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain("log-log regression needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Domain("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(RegressionResult {
        slope,
        intercept: my - slope * mx,
        r_squared,
        n_samples: lx.len(),
    })
}

/// Result of one DE run checked against the exact sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub error_frob: f64,
    pub rho_hat: f64,
}

/// `‖sign_de(A) − X·sign(Λ)·X⁻¹‖_F`.
pub fn measure_error(a: &DenseMatrix, model: &EigenModel, grid: &QuadratureGrid) -> Result<f64> {
    Ok(measure_error_with(a, model, grid, &DeOptions::default())?.error_frob)
}

pub fn measure_error_with(a: &DenseMatrix, model: &EigenModel, grid: &QuadratureGrid, opts: &DeOptions) -> Result<Measurement> {
    if a.rows() != model.n() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!("matrix is {}x{}, model has n = {}", a.rows(), a.cols(), model.n())));
    }
    let result = sign_de_with(a, grid, opts)?;
    let exact = reference_sign(model)?;
    let rho_hat = if result.diagnostics.is_empty() { FALLBACK_RHO_HAT } else { result.max_growth_factor() };
    Ok(Measurement {
        error_frob: crate::linalg::frobenius_norm(&result.sign_matrix.sub(&exact)?),
        rho_hat,
    })
}

/// Largest error of the DE rule on `grid` for the scalar sign of `λ`,
/// over 41 log-spaced `λ` in `[lambda_min, lambda_max]`. A grid is fine
/// enough for a sweep when this sits below the roundoff being measured.
pub fn scalar_discretization_error(grid: &QuadratureGrid, lambda_min: f64, lambda_max: f64) -> f64 {
    let (lo, hi) = (lambda_min.ln(), lambda_max.ln());
    (0..=40)
        .map(|i| {
            let lambda = (lo + (hi - lo) * i as f64 / 40.0).exp();
            let sum: f64 = grid.points.iter().map(|p| p.w * lambda / (p.t * p.t + lambda * lambda)).sum();
            (std::f64::consts::FRAC_2_PI * grid.h * sum - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

fn run_record(model: &EigenModel, kappa2_x: f64, kappa2_lambda: f64, grid: &QuadratureGrid, opts: &SweepOptions) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let a = assemble(model)?;
    let m = measure_error_with(&a, model, grid, &DeOptions { threads: opts.threads })?;
    let bounds = bound_report(model, m.rho_hat, grid.m_points())?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentRecord {
        n: model.n(),
        kappa2_x,
        kappa2_lambda,
        seed: model.seed,
        n_points: grid.points.len(),
        measured_error_frob: m.error_frob,
        e1_bound: bounds.e1_bound,
        e2_bound: bounds.e2_bound,
        wall_time_ms: if opts.timing { elapsed } else { 0.0 },
        rho_hat: m.rho_hat,
        assumption_ok: bounds.assumption_ok,
    })
}

fn check_grid(grid: &[f64], min: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("sweep grid is empty".into()));
    }
    if grid.iter().any(|&k| !(k >= min) || !k.is_finite()) {
        return Err(Error::Domain(format!("grid values must be finite and at least {min}")));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("sweep grid must be ascending".into()));
    }
    Ok(())
}

fn run_sweep<F>(kind: SweepKind, points: usize, trials: usize, seed: u64, opts: &SweepOptions, mut record: F) -> Result<SweepOutcome>
where
    F: FnMut(usize, u64, &QuadratureGrid) -> Result<ExperimentRecord>,
{
    if trials == 0 {
        return Err(Error::Domain("trials per point must be at least 1".into()));
    }
    let grid = build_grid(opts.n_points, opts.d_const)?;
    let mut outcome = SweepOutcome {
        kind,
        records: Vec::new(),
        failures: Vec::new(),
    };
    for index in 0..points * trials {
        let rec_seed = seed.wrapping_add(index as u64);
        match record(index / trials, rec_seed, &grid) {
            Ok(r) => outcome.records.push(r),
            Err(e) => outcome.failures.push(RecordFailure {
                index,
                seed: rec_seed,
                message: e.to_string(),
            }),
        }
    }
    Ok(outcome)
}

/// Fixed `Λ` with condition number `kappa_lambda`, drawn from the master
/// seed; a fresh `X` with each condition number on the grid per trial.
pub fn run_sweep_kappa_x(
    n: usize,
    kappa_grid: &[f64],
    kappa_lambda: f64,
    trials: usize,
    seed: u64,
    opts: &SweepOptions,
) -> Result<SweepOutcome> {
    check_grid(kappa_grid, 1.0)?;
    let lambda = conditioned_diagonal(n, kappa_lambda, true, seed)?;
    run_sweep(SweepKind::KappaX, kappa_grid.len(), trials, seed, opts, |g, s, grid| {
        let q = random_orthogonal(n, s)?;
        let d = conditioned_diagonal(n, kappa_grid[g], false, s)?;
        let model = EigenModel::from_factors(&q, &d, lambda.clone(), s)?;
        run_record(&model, kappa_grid[g], kappa_lambda, grid, opts)
    })
}

/// Fixed `X` with condition number `kappa_x`, drawn from the master seed;
/// a fresh `Λ` with each condition number on the grid per trial.
pub fn run_sweep_kappa_lambda(
    n: usize,
    kappa_grid: &[f64],
    kappa_x: f64,
    trials: usize,
    seed: u64,
    opts: &SweepOptions,
) -> Result<SweepOutcome> {
    check_grid(kappa_grid, 1.0)?;
    let q = random_orthogonal(n, seed)?;
    let d = conditioned_diagonal(n, kappa_x, false, seed)?;
    run_sweep(SweepKind::KappaLambda, kappa_grid.len(), trials, seed, opts, |g, s, grid| {
        let lambda = conditioned_diagonal(n, kappa_grid[g], true, s)?;
        let model = EigenModel::from_factors(&q, &d, lambda, s)?;
        run_record(&model, kappa_x, kappa_grid[g], grid, opts)
    })
}

/// `κ₂(X) = κ₂(Λ) = kappa`, everything redrawn per record.
pub fn run_sweep_n(n_grid: &[usize], kappa: f64, trials: usize, seed: u64, opts: &SweepOptions) -> Result<SweepOutcome> {
    let as_f64: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
    check_grid(&as_f64, 2.0)?;
    run_sweep(SweepKind::N, n_grid.len(), trials, seed, opts, |g, s, grid| {
        let model = build_model(n_grid[g], kappa, kappa, s)?;
        run_record(&model, kappa, kappa, grid, opts)
    })
}

/// Everything needed to run one sweep.
#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub kind: SweepKind,
    /// Matrix size for the κ sweeps; ignored by the size sweep.
    pub n: usize,
    /// Values of the swept quantity, ascending.
    pub grid: Vec<f64>,
    /// The condition number held fixed (both of them for the size sweep).
    pub fixed_kappa: f64,
    pub trials: usize,
    pub seed: u64,
    pub options: SweepOptions,
}

impl SweepPlan {
    pub fn default_for(kind: SweepKind) -> Self {
        let (grid, fixed_kappa, n_points, d_const) = match kind {
            SweepKind::KappaX => (default_kappa_x_grid(), DEFAULT_FIXED_KAPPA, KAPPA_SWEEP_N_POINTS, KAPPA_SWEEP_D_CONST),
            SweepKind::KappaLambda => (default_kappa_lambda_grid(), DEFAULT_FIXED_KAPPA, KAPPA_SWEEP_N_POINTS, KAPPA_SWEEP_D_CONST),
            SweepKind::N => (DEFAULT_N_GRID.iter().map(|&n| n as f64).collect(), DEFAULT_N_SWEEP_KAPPA, N_SWEEP_N_POINTS, N_SWEEP_D_CONST),
        };
        SweepPlan {
            kind,
            n: DEFAULT_N,
            grid,
            fixed_kappa,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            options: SweepOptions {
                n_points,
                d_const,
                ..SweepOptions::default()
            },
        }
    }

    pub fn run(&self) -> Result<SweepOutcome> {
        match self.kind {
            SweepKind::KappaX => run_sweep_kappa_x(self.n, &self.grid, self.fixed_kappa, self.trials, self.seed, &self.options),
            SweepKind::KappaLambda => run_sweep_kappa_lambda(self.n, &self.grid, self.fixed_kappa, self.trials, self.seed, &self.options),
            SweepKind::N => {
                if self.grid.iter().any(|&v| v.fract() != 0.0 || v < 0.0) {
                    return Err(Error::Domain("matrix sizes must be whole numbers".into()));
                }
                let sizes: Vec<usize> = self.grid.iter().map(|&v| v as usize).collect();
                run_sweep_n(&sizes, self.fixed_kappa, self.trials, self.seed, &self.options)
            }
        }
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Per grid point medians of the measured error and of the total bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianPoint {
    pub x: f64,
    pub error: f64,
    pub bound: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub kind: SweepKind,
    pub points: Vec<MedianPoint>,
    pub error_fit: Option<RegressionResult>,
    pub bound_fit: Option<RegressionResult>,
    pub records: usize,
    pub checked: usize,
    pub violations: usize,
    pub failures: usize,
}

impl SweepOutcome {
    pub fn median_points(&self) -> Vec<MedianPoint> {
        let mut points: Vec<MedianPoint> = Vec::new();
        let mut start = 0;
        while start < self.records.len() {
            let x = self.kind.axis(&self.records[start]);
            let end = start + self.records[start..].iter().take_while(|r| self.kind.axis(r) == x).count();
            let group = &self.records[start..end];
            let mut errors: Vec<f64> = group.iter().map(|r| r.measured_error_frob).collect();
            let mut bounds: Vec<f64> = group.iter().map(ExperimentRecord::total_bound).collect();
            points.push(MedianPoint {
                x,
                error: median(&mut errors),
                bound: median(&mut bounds),
                samples: group.len(),
            });
            start = end;
        }
        points
    }

    pub fn summarize(&self) -> SweepSummary {
        let points = self.median_points();
        let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
        let errors: Vec<f64> = points.iter().map(|p| p.error).collect();
        let bounds: Vec<f64> = points.iter().map(|p| p.bound).collect();
        SweepSummary {
            kind: self.kind,
            error_fit: loglog_regress(&xs, &errors).ok(),
            bound_fit: loglog_regress(&xs, &bounds).ok(),
            points,
            records: self.records.len(),
            checked: self.records.iter().filter(|r| r.assumption_ok).count(),
            violations: self.records.iter().filter(|r| r.violates_bound()).count(),
            failures: self.failures.len(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_csv_row());
            out.push('\n');
        }
        out
    }

    /// Two columns, `x` and median error, one line per grid point.
    pub fn to_dat(&self) -> String {
        let mut out = format!("# {} median_error_frob\n", self.kind.name());
        for p in self.median_points() {
            let _ = writeln!(out, "{} {}", format_f64(p.x, FloatFormat::Decimal), format_f64(p.error, FloatFormat::Decimal));
        }
        out
    }

    pub fn write_files(&self, dir: &Path, stem: &str) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: String, text: String| {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))
        };
        write(format!("{stem}.csv"), self.to_csv())?;
        write(format!("{stem}_summary.txt"), self.summarize().to_text(&self.failures))?;
        write(format!("{stem}.dat"), self.to_dat())
    }
}

fn fit_line(out: &mut String, label: &str, fit: Option<RegressionResult>) {
    match fit {
        Some(f) => {
            let _ = writeln!(out, "{label}_slope={:.4}", f.slope);
            let _ = writeln!(out, "{label}_intercept={:.4}", f.intercept);
            let _ = writeln!(out, "{label}_r_squared={:.4}", f.r_squared);
            let _ = writeln!(out, "{label}_samples={}", f.n_samples);
        }
        None => {
            let _ = writeln!(out, "{label}_slope=unavailable");
        }
    }
}

impl SweepSummary {
    pub fn to_text(&self, failures: &[RecordFailure]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sweep={}", self.kind.name());
        let _ = writeln!(out, "records={}", self.records);
        let _ = writeln!(out, "failed_records={}", self.failures);
        fit_line(&mut out, "error", self.error_fit);
        fit_line(&mut out, "bound", self.bound_fit);
        let _ = writeln!(out, "bound_checked_records={}", self.checked);
        let _ = writeln!(out, "bound_violations={}", self.violations);
        for p in &self.points {
            let _ = writeln!(
                out,
                "point x={} median_error={} median_bound={} samples={}",
                format_f64(p.x, FloatFormat::Decimal),
                format_f64(p.error, FloatFormat::Decimal),
                format_f64(p.bound, FloatFormat::Decimal),
                p.samples
            );
        }
        for f in failures {
            let _ = writeln!(out, "failure index={} seed={} message={}", f.index, f.seed, f.message);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regression_exact_power() {
        let xs = [1.0, 2.0, 5.0, 10.0, 40.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| x * x).collect();
        let r = loglog_regress(&xs, &ys).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-12);
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        let flat = loglog_regress(&xs, &[7.0; 5]).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert!((flat.intercept - 7f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn regression_with_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..50).map(|i| 10f64.powf(i as f64 / 10.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(1.5) * (1.0 + rng.random_range(-0.01..0.01))).collect();
        let r = loglog_regress(&xs, &ys).unwrap();
        assert!((1.45..=1.55).contains(&r.slope));
        assert!(r.r_squared > 0.99 && r.r_squared <= 1.0);
    }

    #[test]
    fn regression_rejects_bad_input() {
        assert!(loglog_regress(&[1.0], &[1.0]).is_err());
        assert!(loglog_regress(&[1.0, 2.0], &[1.0, -1.0]).is_err());
        assert!(loglog_regress(&[2.0, 2.0], &[1.0, 3.0]).is_err());
        assert!(loglog_regress(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn diagonal_model_error_is_at_roundoff() {
        let n = 12;
        let lambda = conditioned_diagonal(n, 10.0, true, 5).unwrap();
        let model = EigenModel::from_eigenvectors(DenseMatrix::identity(n), DenseMatrix::identity(n), lambda).unwrap();
        let a = assemble(&model).unwrap();
        let grid = build_grid(DEFAULT_N_POINTS, DEFAULT_D_CONST).unwrap();
        let e = measure_error(&a, &model, &grid).unwrap();
        assert!(e <= 1e-12 * n as f64, "error {e}");
    }

    #[test]
    fn error_plateaus_with_more_points() {
        let model = build_model(10, 10.0, 10.0, 4).unwrap();
        let a = assemble(&model).unwrap();
        let errors: Vec<f64> = [8, 16, 32, 60, 90]
            .iter()
            .map(|&np| measure_error(&a, &model, &build_grid(np, 1.0).unwrap()).unwrap())
            .collect();
        assert!(errors[0] > 100.0 * errors[3]);
        assert!(errors[4] < 10.0 * errors[3] && errors[3] < 1e-10);
    }

    #[test]
    fn sweep_grids_resolve_their_spectra() {
        for kind in [SweepKind::KappaX, SweepKind::KappaLambda, SweepKind::N] {
            let plan = SweepPlan::default_for(kind);
            let widest = match kind {
                SweepKind::KappaLambda => *plan.grid.last().unwrap(),
                _ => plan.fixed_kappa,
            };
            let grid = build_grid(plan.options.n_points, plan.options.d_const).unwrap();
            let e = scalar_discretization_error(&grid, 1.0, widest);
            let limit = if kind == SweepKind::N { 1e-12 } else { 5e-15 };
            assert!(e < limit, "{}: {e:e}", kind.name());
        }
        // The default grid is too coarse for the widest spectra.
        let coarse = build_grid(DEFAULT_N_POINTS, DEFAULT_D_CONST).unwrap();
        assert!(scalar_discretization_error(&coarse, 1.0, 1e6) > 1e-4);
    }

    #[test]
    fn plan_runs_requested_sweep() {
        let plan = SweepPlan {
            n: 6,
            grid: vec![1.0, 100.0],
            trials: 1,
            ..SweepPlan::default_for(SweepKind::KappaLambda)
        };
        let out = plan.run().unwrap();
        assert_eq!(out.kind, SweepKind::KappaLambda);
        assert_eq!(out.records[1].n_points, out.records[0].n_points);
        assert_eq!(out.records[1].kappa2_x, DEFAULT_FIXED_KAPPA);
        let bad = SweepPlan {
            grid: vec![2.5],
            ..SweepPlan::default_for(SweepKind::N)
        };
        assert!(bad.run().is_err());
    }

    #[test]
    fn small_sweeps_are_reproducible() {
        let opts = SweepOptions::default();
        let a = run_sweep_kappa_x(8, &[1.0, 10.0, 100.0], 10.0, 2, 11, &opts).unwrap();
        let b = run_sweep_kappa_x(8, &[1.0, 10.0, 100.0], 10.0, 2, 11, &SweepOptions { threads: 3, ..opts.clone() }).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.records.len(), 6);
        assert_eq!(a.records[5].seed, 16);
        assert!(a.records[0].measured_error_frob <= 1e-12 * 8.0);
        let s = a.summarize();
        assert_eq!(s.violations, 0);
        assert_eq!(s.points.len(), 3);
    }

    #[test]
    fn records_can_be_regenerated_alone() {
        let out = run_sweep_kappa_x(6, &[10.0, 100.0], 50.0, 1, 2, &SweepOptions::default()).unwrap();
        assert!(out.failures.is_empty());
        let r = &out.records[1];
        assert_eq!(r.seed, 3);
        let lambda = conditioned_diagonal(6, 50.0, true, 2).unwrap();
        let q = random_orthogonal(6, 3).unwrap();
        let d = conditioned_diagonal(6, 100.0, false, 3).unwrap();
        let model = EigenModel::from_factors(&q, &d, lambda, 3).unwrap();
        let a = assemble(&model).unwrap();
        let e = measure_error(&a, &model, &build_grid(DEFAULT_N_POINTS, DEFAULT_D_CONST).unwrap()).unwrap();
        assert_eq!(e, r.measured_error_frob);
    }

    #[test]
    fn lambda_sweep_accepts_unit_condition() {
        let out = run_sweep_kappa_lambda(6, &[1.0, 1e3], 10.0, 1, 5, &SweepOptions::default()).unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[0].kappa2_lambda, 1.0);
        assert!(out.records.iter().all(|r| r.measured_error_frob.is_finite()));
    }

    #[test]
    fn n_sweep_smoke() {
        let out = run_sweep_n(&[2, 5], 10.0, 1, 1, &SweepOptions::default()).unwrap();
        assert_eq!(out.records.len(), 2);
        assert!(out.records[0].measured_error_frob.is_finite());
        assert!(run_sweep_n(&[1], 10.0, 1, 1, &SweepOptions::default()).is_err());
    }

    #[test]
    fn invalid_sweeps_are_rejected() {
        let o = SweepOptions::default();
        assert!(run_sweep_kappa_x(5, &[], 10.0, 1, 0, &o).is_err());
        assert!(run_sweep_kappa_x(5, &[100.0, 10.0], 10.0, 1, 0, &o).is_err());
        assert!(run_sweep_kappa_x(5, &[10.0], 10.0, 0, 0, &o).is_err());
    }

    #[test]
    fn output_files() {
        let out = run_sweep_kappa_lambda(5, &[1.0, 10.0], 10.0, 3, 9, &SweepOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        out.write_files(dir.path(), "lam").unwrap();
        let csv = fs::read_to_string(dir.path().join("lam.csv")).unwrap();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("n,kappa2_x,kappa2_lambda,seed,n_points,measured_error_frob,e1_bound,e2_bound,rho_hat,wall_time_ms"));
        let dat = fs::read_to_string(dir.path().join("lam.dat")).unwrap();
        assert_eq!(dat.lines().count(), 3);
        let summary = fs::read_to_string(dir.path().join("lam_summary.txt")).unwrap();
        assert!(summary.contains("error_slope="));
        assert!(summary.contains("bound_violations=0"));
    }
}
