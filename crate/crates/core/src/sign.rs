//! Matrix sign function by double-exponential quadrature of
//! `sign(A) = (2/π) ∫₀^∞ (t²I + A²)⁻¹ A dt`, plus Newton's iteration as an
//! independent cross-check.
//!
//! With `t = φ(x) = exp((π/2)·sinh x)` the integral becomes
//! `(2/π) ∫ Y(φ(x)) φ'(x) dx`, which the trapezoidal rule with step `h`
//! approximates by `(2/π)·h·Σₖ Y(φ(kh))·φ'(kh)`.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, inverse, lu_factor, lu_solve, matmul, DenseMatrix, LuFactorization};

pub const DEFAULT_N_POINTS: usize = 60;
pub const DEFAULT_D_CONST: f64 = 1.0;

/// Sample points with `t` outside `[T_MIN, T_MAX]` are dropped: squaring
/// such `t` leaves double range and their contribution is far below roundoff.
pub const T_MAX: f64 = 1e150;
pub const T_MIN: f64 = 1e-150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub k: i64,
    /// `φ(kh)`
    pub t: f64,
    /// `φ'(kh)`
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    pub h: f64,
    pub n_neg: i64,
    pub n_pos: i64,
    pub d_const: f64,
    /// Kept points in ascending `k`.
    pub points: Vec<GridPoint>,
    /// Number of indices in `n_neg..=n_pos` dropped for range reasons.
    pub dropped: usize,
}

pub fn phi(x: f64) -> f64 {
    (FRAC_PI_2 * x.sinh()).exp()
}

pub fn phi_prime(x: f64) -> f64 {
    FRAC_PI_2 * (FRAC_PI_2 * x.sinh()).exp() * x.cosh()
}

impl QuadratureGrid {
    /// Grid over `k = n_neg..=n_pos` with an explicit step.
    pub fn with_step(h: f64, n_neg: i64, n_pos: i64, d_const: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || n_neg > 0 || n_pos < 0 {
            return Err(Error::Domain(format!("invalid grid h={h} n_neg={n_neg} n_pos={n_pos}")));
        }
        let mut points = Vec::with_capacity((n_pos - n_neg + 1) as usize);
        let mut dropped = 0;
        for k in n_neg..=n_pos {
            let x = k as f64 * h;
            let t = phi(x);
            let w = phi_prime(x);
            if (T_MIN..=T_MAX).contains(&t) && w > 0.0 && w.is_finite() {
                points.push(GridPoint { k, t, w });
            } else {
                dropped += 1;
            }
        }
        Ok(QuadratureGrid {
            h,
            n_neg,
            n_pos,
            d_const,
            points,
            dropped,
        })
    }

    /// `M = N⁺ − N⁻`, the number of gaps of the nominal grid.
    pub fn m_points(&self) -> usize {
        (self.n_pos - self.n_neg) as usize
    }
}

/// Symmetric grid `k = −N..N` with `h = log(8·d·N)/N`.
pub fn build_grid(n_points: usize, d_const: f64) -> Result<QuadratureGrid> {
    if n_points == 0 {
        return Err(Error::Domain("need at least one quadrature point per side".into()));
    }
    if !(d_const > 0.0) || !d_const.is_finite() {
        return Err(Error::Domain(format!("d must be positive, got {d_const}")));
    }
    let n = n_points as f64;
    let h = (8.0 * d_const * n).ln() / n;
    if !(h > 0.0) {
        return Err(Error::Domain(format!("8·d·N = {} gives a nonpositive step", 8.0 * d_const * n)));
    }
    let n_points = n_points as i64;
    QuadratureGrid::with_step(h, -n_points, n_points, d_const)
}

/// `Y(t) = (t²I + A²)⁻¹·A`, solved column by column through LU of the shifted matrix.
pub fn resolvent_solve(a: &DenseMatrix, a_squared: &DenseMatrix, t: f64) -> Result<(DenseMatrix, LuFactorization)> {
    if !a.is_square() || a_squared.rows() != a.rows() || !a_squared.is_square() {
        return Err(Error::DimensionMismatch("resolvent needs square A and A²".into()));
    }
    let mut b = a_squared.clone();
    let shift = t * t;
    for i in 0..b.rows() {
        b[(i, i)] += shift;
    }
    let f = lu_factor(&b)?;
    let y = lu_solve(&f, a)?;
    Ok((y, f))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointDiagnostics {
    pub k: i64,
    pub t: f64,
    pub weight: f64,
    pub growth_factor: f64,
    /// Frobenius norm of `Y(t)`.
    pub norm_y: f64,
}

#[derive(Clone, Debug)]
pub struct SignResult {
    pub sign_matrix: DenseMatrix,
    pub grid: QuadratureGrid,
    pub diagnostics: Vec<PointDiagnostics>,
    /// `‖S² − I‖_F`
    pub residual_involution: f64,
}

impl SignResult {
    /// Largest LU growth factor over all sample points.
    pub fn max_growth_factor(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.growth_factor).fold(1.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeOptions {
    /// Worker threads for the per-point solves; 0 or 1 runs inline.
    pub threads: usize,
}

impl Default for DeOptions {
    fn default() -> Self {
        DeOptions { threads: 1 }
    }
}

pub fn sign_de(a: &DenseMatrix, grid: &QuadratureGrid) -> Result<SignResult> {
    sign_de_with(a, grid, &DeOptions::default())
}

fn solve_point(a: &DenseMatrix, a2: &DenseMatrix, p: &GridPoint) -> Result<(DenseMatrix, PointDiagnostics)> {
    let (y, f) = resolvent_solve(a, a2, p.t).map_err(|e| match e {
        Error::Singular { .. } => Error::SingularPoint { k: p.k, t: p.t },
        other => other,
    })?;
    let diag = PointDiagnostics {
        k: p.k,
        t: p.t,
        weight: p.w,
        growth_factor: f.growth_factor(),
        norm_y: frobenius_norm(&y),
    };
    Ok((y, diag))
}

/// Evaluates the quadrature sum.
///
/// Points are solved in batches of `threads` at a time; each batch is then
/// folded into the running sum one term at a time in ascending `k`. Every
/// term is scaled by its weight before it is added and `(2/π)·h` is applied
/// once at the end. The output does not depend on the thread count.
pub fn sign_de_with(a: &DenseMatrix, grid: &QuadratureGrid, opts: &DeOptions) -> Result<SignResult> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch(format!("sign needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    let a2 = matmul(a, a)?;
    let threads = opts.threads.max(1);
    let pool = if threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidData(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut sum = DenseMatrix::zeros(n, n);
    let mut diagnostics = Vec::with_capacity(grid.points.len());
    for batch in grid.points.chunks(threads) {
        let solved: Vec<Result<(DenseMatrix, PointDiagnostics)>> = match &pool {
            Some(pool) => pool.install(|| batch.par_iter().map(|p| solve_point(a, &a2, p)).collect()),
            None => batch.iter().map(|p| solve_point(a, &a2, p)).collect(),
        };
        for item in solved {
            let (y, diag) = item?;
            sum.axpy(diag.weight, &y)?;
            diagnostics.push(diag);
        }
    }
    let sign_matrix = sum.scale(2.0 / PI * grid.h);
    let residual_involution = involution_residual(&sign_matrix)?;
    Ok(SignResult {
        sign_matrix,
        grid: grid.clone(),
        diagnostics,
        residual_involution,
    })
}

/// `‖S² − I‖_F`
pub fn involution_residual(s: &DenseMatrix) -> Result<f64> {
    let mut s2 = matmul(s, s)?;
    for i in 0..s.rows() {
        s2[(i, i)] -= 1.0;
    }
    Ok(frobenius_norm(&s2))
}

/// Unscaled Newton iteration `Xₖ₊₁ = (Xₖ + Xₖ⁻¹)/2` from `X₀ = A`, stopped
/// when `‖Xₖ₊₁ − Xₖ‖_F ≤ tol·‖Xₖ₊₁‖_F`.
pub fn sign_newton(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<DenseMatrix> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch(format!("sign needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let mut x = a.clone();
    for _ in 0..max_iter {
        let x_inv = inverse(&x)?;
        let next = x.add(&x_inv)?.scale(0.5);
        let change = frobenius_norm(&next.sub(&x)?);
        let size = frobenius_norm(&next);
        x = next;
        if change <= tol * size {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { iterations: max_iter })
}
