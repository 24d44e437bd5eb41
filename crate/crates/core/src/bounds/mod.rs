//! A priori roundoff bounds for the quadrature sign function.
//!
//! The total bound is `E1 + E2`: `E1` covers the errors made inside each
//! resolvent solve, integrated over the grid; `E2` covers the weighted
//! summation of the solved matrices.

pub mod lemmas;
pub mod oracle;

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{format_f64, FloatFormat, UNIT_ROUNDOFF};
use crate::matgen::EigenModel;

pub use lemmas::{elliptic_k, lemma1_integral, lemma2_integral, lemma2_modulus, lemma3_k_bound, resolvent_modulus_integral};
pub use oracle::{quad_oracle, Domain, Integrand, QuadResult};

/// Growth factor assumed when no factorization diagnostics are available.
pub const FALLBACK_RHO_HAT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEigenvalue {
    pub re: f64,
    pub im: f64,
}

impl ComplexEigenvalue {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexEigenvalue { re, im }
    }

    pub fn real(re: f64) -> Self {
        ComplexEigenvalue { re, im: 0.0 }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `λ²` as `(re, im)`.
    pub fn square(&self) -> (f64, f64) {
        (self.re * self.re - self.im * self.im, 2.0 * self.re * self.im)
    }
}

fn check_spectrum(lambdas: &[ComplexEigenvalue]) -> Result<()> {
    for (index, l) in lambdas.iter().enumerate() {
        if !(l.re.is_finite() && l.im.is_finite()) {
            return Err(Error::InvalidData(format!("eigenvalue {index} is not finite")));
        }
        if l.re == 0.0 {
            return Err(Error::ImaginaryAxis { index });
        }
    }
    Ok(())
}

fn check_count(n: usize, lambdas: &[ComplexEigenvalue]) -> Result<()> {
    if n == 0 || lambdas.len() != n {
        return Err(Error::DimensionMismatch(format!("n = {n} but {} eigenvalues given", lambdas.len())));
    }
    Ok(())
}

/// `γ_m = m·u / (1 − m·u)`.
pub fn gamma(m: usize) -> Result<f64> {
    let mu = m as f64 * UNIT_ROUNDOFF;
    if mu >= 1.0 {
        return Err(Error::Domain(format!("m·u = {mu} must be below 1 (m = {m})")));
    }
    Ok(mu / (1.0 - mu))
}

/// `γ_n κ⁴ + 3n² γ_{3n} ρ̂ κ³`. Overflow gives `+∞`.
pub fn c_coefficient(n: usize, kappa2_x: f64, rho_hat: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if !(kappa2_x >= 1.0) {
        return Err(Error::Domain(format!("κ₂(X) must be at least 1, got {kappa2_x}")));
    }
    if !(rho_hat >= 1.0) {
        return Err(Error::Domain(format!("growth factor must be at least 1, got {rho_hat}")));
    }
    let nf = n as f64;
    let k3 = kappa2_x.powi(3);
    Ok(gamma(n)? * k3 * kappa2_x + 3.0 * nf * nf * gamma(3 * n)? * rho_hat * k3)
}

/// `‖Λ‖_F`.
pub fn lambda_frobenius(lambdas: &[ComplexEigenvalue]) -> f64 {
    lambdas.iter().map(|l| l.re * l.re + l.im * l.im).sum::<f64>().sqrt()
}

/// `‖Λ‖_F³ · Σ 1/(|λ|²·|Re λ|)`, invariant under `λ → sλ`.
pub fn spectral_sum_e1(lambdas: &[ComplexEigenvalue]) -> Result<f64> {
    check_spectrum(lambdas)?;
    let sum: f64 = lambdas.iter().map(|l| 1.0 / (l.abs().powi(2) * l.re.abs())).sum();
    Ok(lambda_frobenius(lambdas).powi(3) * sum)
}

/// `n − (2/π) Σ ln(|Re λ|/|λ|)` with `n` the number of eigenvalues.
pub fn spectral_sum_e2(lambdas: &[ComplexEigenvalue]) -> Result<f64> {
    check_spectrum(lambdas)?;
    let logs: f64 = lambdas.iter().map(|l| (l.re.abs() / l.abs()).ln()).sum();
    Ok(lambdas.len() as f64 - FRAC_2_PI * logs)
}

/// Bound on the error made inside the resolvent solves.
pub fn e1_bound(n: usize, kappa2_x: f64, rho_hat: f64, lambdas: &[ComplexEigenvalue]) -> Result<f64> {
    check_count(n, lambdas)?;
    let spectral = spectral_sum_e1(lambdas)?;
    Ok(c_coefficient(n, kappa2_x, rho_hat)? * (4.0 * SQRT_2 / PI + spectral))
}

/// Bound on the error made while summing `M + 1` weighted terms.
pub fn e2_bound(n: usize, kappa2_x: f64, m_points: usize, lambdas: &[ComplexEigenvalue]) -> Result<f64> {
    check_count(n, lambdas)?;
    if m_points == 0 {
        return Err(Error::Domain("the grid needs at least two points".into()));
    }
    if !(kappa2_x >= 1.0) {
        return Err(Error::Domain(format!("κ₂(X) must be at least 1, got {kappa2_x}")));
    }
    Ok(gamma(m_points)? * kappa2_x * spectral_sum_e2(lambdas)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub kappa2_x: f64,
    pub e1_bound: f64,
    pub e2_bound: f64,
    pub total_bound: f64,
    pub c_nxl: f64,
    pub gamma_n: f64,
    pub gamma_3n: f64,
    pub gamma_m: f64,
    pub rho_hat: f64,
    pub m_points: usize,
    pub lambda_frob: f64,
    pub spectral_sum_e1: f64,
    pub spectral_sum_e2: f64,
    pub assumption_ok: bool,
    /// Some component overflowed to `+∞`.
    pub saturated: bool,
}

pub const BOUND_CSV_HEADER: &str = "n,kappa2_x,e1_bound,e2_bound,total_bound,c_nxl,gamma_n,gamma_3n,gamma_M,rho_hat,m_points,lambda_frob,spectral_sum_e1,spectral_sum_e2,assumption_ok,saturated";

impl BoundReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let f = |v: f64| format_f64(v, FloatFormat::Decimal);
        vec![
            ("n", self.n.to_string()),
            ("kappa2_x", f(self.kappa2_x)),
            ("e1_bound", f(self.e1_bound)),
            ("e2_bound", f(self.e2_bound)),
            ("total_bound", f(self.total_bound)),
            ("c_nxl", f(self.c_nxl)),
            ("gamma_n", f(self.gamma_n)),
            ("gamma_3n", f(self.gamma_3n)),
            ("gamma_M", f(self.gamma_m)),
            ("rho_hat", f(self.rho_hat)),
            ("m_points", self.m_points.to_string()),
            ("lambda_frob", f(self.lambda_frob)),
            ("spectral_sum_e1", f(self.spectral_sum_e1)),
            ("spectral_sum_e2", f(self.spectral_sum_e2)),
            ("assumption_ok", self.assumption_ok.to_string()),
            ("saturated", self.saturated.to_string()),
        ]
    }

    /// One `key=value` line per field.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.fields() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Values in [`BOUND_CSV_HEADER`] order, no trailing newline.
    pub fn to_csv_row(&self) -> String {
        self.fields().into_iter().map(|(_, v)| v).collect::<Vec<_>>().join(",")
    }
}

/// Checks `‖B⁻¹‖₂‖ΔB‖₂ ≤ 1/2` at the worst grid point `t = min|λ|` using
/// the first-order size of `ΔB` and `‖B⁻¹‖₂ ≤ κ₂(X)·‖(t²I + Λ²)⁻¹‖₂`.
fn assumption_holds(n: usize, kappa2_x: f64, rho_hat: f64, lambdas: &[ComplexEigenvalue]) -> Result<bool> {
    let t = lambdas.iter().map(ComplexEigenvalue::abs).fold(f64::INFINITY, f64::min);
    let t2 = t * t;
    let (mut inv_norm, mut shifted_norm) = (0.0f64, 0.0f64);
    for l in lambdas {
        let (re, im) = l.square();
        let m = (t2 + re).hypot(im);
        inv_norm = inv_norm.max(1.0 / m);
        shifted_norm = shifted_norm.max(m);
    }
    let nf = n as f64;
    let frob2 = lambda_frobenius(lambdas).powi(2);
    let perturbation = gamma(n)? * frob2 * kappa2_x * kappa2_x + nf * nf * gamma(3 * n)? * rho_hat * kappa2_x * shifted_norm;
    let proxy = 2.0 * kappa2_x * inv_norm * perturbation;
    Ok(proxy.is_finite() && proxy <= 1.0)
}

/// Assembles every bound quantity for a spectrum with known `κ₂(X)`.
pub fn bound_report_for(
    kappa2_x: f64,
    rho_hat: f64,
    m_points: usize,
    lambdas: &[ComplexEigenvalue],
) -> Result<BoundReport> {
    let n = lambdas.len();
    let e1 = e1_bound(n, kappa2_x, rho_hat, lambdas)?;
    let e2 = e2_bound(n, kappa2_x, m_points, lambdas)?;
    let report = BoundReport {
        n,
        kappa2_x,
        e1_bound: e1,
        e2_bound: e2,
        total_bound: e1 + e2,
        c_nxl: c_coefficient(n, kappa2_x, rho_hat)?,
        gamma_n: gamma(n)?,
        gamma_3n: gamma(3 * n)?,
        gamma_m: gamma(m_points)?,
        rho_hat,
        m_points,
        lambda_frob: lambda_frobenius(lambdas),
        spectral_sum_e1: spectral_sum_e1(lambdas)?,
        spectral_sum_e2: spectral_sum_e2(lambdas)?,
        assumption_ok: assumption_holds(n, kappa2_x, rho_hat, lambdas)?,
        saturated: false,
    };
    let saturated = !(report.e1_bound.is_finite() && report.e2_bound.is_finite() && report.total_bound.is_finite() && report.c_nxl.is_finite());
    Ok(BoundReport { saturated, ..report })
}

/// [`bound_report_for`] on a generated model's real spectrum.
pub fn bound_report(model: &EigenModel, rho_hat: f64, m_points: usize) -> Result<BoundReport> {
    let lambdas: Vec<ComplexEigenvalue> = model.lambda.iter().map(|&l| ComplexEigenvalue::real(l)).collect();
    bound_report_for(model.kappa2_x, rho_hat, m_points, &lambdas)
}
