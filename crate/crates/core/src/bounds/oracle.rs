//! Adaptive Gauss-Legendre quadrature over a fixed catalog of integrands,
//! used to check the closed forms in [`super::lemmas`] by a separate route.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_ORDER: usize = 10;
const INITIAL_PIECES: usize = 64;
const MAX_SUBINTERVALS: usize = 1_000_000;
const MAX_DEPTH: u32 = 60;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Integrands the oracle knows how to evaluate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integrand {
    Constant(f64),
    /// `1/|t² + λ²|²` with `λ = re + i·im`.
    QuarticModulus { re: f64, im: f64 },
    /// `1/|t² + λ²|` with `λ = re + i·im`.
    QuadraticModulus { re: f64, im: f64 },
    /// `1/√(x⁴ + 2c·x² + a⁴)`.
    Biquadratic { a: f64, c: f64 },
    /// `1/√(1 − k²·sin²θ)`.
    EllipticK { k: f64 },
}

impl Integrand {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Integrand::Constant(c) => c,
            Integrand::QuarticModulus { re, im } => {
                let real = x * x + re * re - im * im;
                let imag = 2.0 * re * im;
                1.0 / (real * real + imag * imag)
            }
            Integrand::QuadraticModulus { re, im } => {
                let real = x * x + re * re - im * im;
                let imag = 2.0 * re * im;
                1.0 / real.hypot(imag)
            }
            Integrand::Biquadratic { a, c } => {
                let x2 = x * x;
                1.0 / (x2 * x2 + 2.0 * c * x2 + a.powi(4)).sqrt()
            }
            Integrand::EllipticK { k } => {
                let s = x.sin();
                1.0 / (1.0 - k * k * s * s).sqrt()
            }
        }
    }

    /// Length scale used by the `tan` substitution on infinite domains.
    fn scale(&self) -> f64 {
        let s = match *self {
            Integrand::QuarticModulus { re, im } | Integrand::QuadraticModulus { re, im } => re.hypot(im),
            Integrand::Biquadratic { a, .. } => a,
            _ => 1.0,
        };
        if s > 0.0 && s.is_finite() {
            s
        } else {
            1.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, ∞)`
    HalfLine(f64),
    /// `(−∞, ∞)`
    WholeLine,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub subintervals: usize,
}

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and its derivative.
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * nodes.iter().zip(weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
}

struct Adaptive<'a> {
    f: &'a dyn Fn(f64) -> f64,
    tol: f64,
    abs_floor_per_width: f64,
    subintervals: usize,
}

impl Adaptive<'_> {
    fn refine(&mut self, a: f64, b: f64, whole: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = gl_panel(self.f, a, m);
        let right = gl_panel(self.f, m, b);
        let halves = left + right;
        self.subintervals += 1;
        if self.subintervals > MAX_SUBINTERVALS {
            return Err(Error::NonConvergence { iterations: MAX_SUBINTERVALS });
        }
        let diff = (halves - whole).abs();
        if diff <= self.tol * halves.abs() || diff <= self.abs_floor_per_width * (b - a) || depth >= MAX_DEPTH {
            return Ok(halves);
        }
        Ok(self.refine(a, m, left, depth + 1)? + self.refine(m, b, right, depth + 1)?)
    }
}

fn integrate_finite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let width = (b - a) / INITIAL_PIECES as f64;
    let pieces: Vec<(f64, f64, f64)> = (0..INITIAL_PIECES)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == INITIAL_PIECES { b } else { lo + width };
            (lo, hi, gl_panel(f, lo, hi))
        })
        .collect();
    let coarse: f64 = pieces.iter().map(|p| p.2).sum();
    let mut ad = Adaptive {
        f,
        tol,
        abs_floor_per_width: 1e-3 * tol * coarse.abs() / (b - a).abs(),
        subintervals: INITIAL_PIECES,
    };
    let mut value = 0.0;
    for (lo, hi, est) in pieces {
        value += ad.refine(lo, hi, est, 0)?;
    }
    Ok(QuadResult {
        value,
        subintervals: ad.subintervals,
    })
}

/// Integrates `integrand` over `domain`, refining each panel until a
/// 10-point Gauss-Legendre estimate and the sum over its two halves agree
/// to relative `tol`. Infinite domains are mapped by `t = a + s·tan θ`.
pub fn quad_oracle(integrand: Integrand, domain: Domain, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f = |x: f64| integrand.eval(x);
    let s = integrand.scale();
    match domain {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::Domain("finite domain needs finite endpoints".into()));
            }
            integrate_finite(&f, a, b, tol)
        }
        Domain::HalfLine(a) => {
            let g = move |th: f64| {
                let c = th.cos();
                f(a + s * th.tan()) * s / (c * c)
            };
            integrate_finite(&g, 0.0, FRAC_PI_2, tol)
        }
        Domain::WholeLine => {
            let g = move |th: f64| {
                let c = th.cos();
                f(s * th.tan()) * s / (c * c)
            };
            integrate_finite(&g, -FRAC_PI_2, FRAC_PI_2, tol)
        }
    }
}
