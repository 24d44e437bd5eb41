//! Closed forms for the scalar integrals that appear in the bounds.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::linalg::UNIT_ROUNDOFF;

const AGM_MAX_ITER: usize = 64;

fn check_modulus(k: f64) -> Result<f64> {
    if k.abs() < 1.0 {
        Ok(k.abs())
    } else {
        Err(Error::Domain(format!("elliptic modulus must satisfy |k| < 1, got {k}")))
    }
}

/// `∫ dt / |t² + λ²|²` over the real line, `π / (2|λ|²|Re λ|)`.
pub fn lemma1_integral(re: f64, im: f64) -> Result<f64> {
    if re == 0.0 || !re.is_finite() || !im.is_finite() {
        return Err(Error::Domain(format!("need finite λ off the imaginary axis, got {re}{im:+}i")));
    }
    let modulus = re.hypot(im);
    Ok(PI / (2.0 * modulus * modulus * re.abs()))
}

/// Complete elliptic integral of the first kind, `K(k)`, by the
/// arithmetic-geometric mean. Defined for `|k| < 1`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    let k = check_modulus(k)?;
    let mut a = 1.0f64;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * UNIT_ROUNDOFF * a {
            return Ok(FRAC_PI_2 / a);
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Err(Error::NonConvergence { iterations: AGM_MAX_ITER })
}

/// Modulus of the elliptic integral that evaluates [`lemma2_integral`].
pub fn lemma2_modulus(a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !c.is_finite() || c.abs() > a * a {
        return Err(Error::Domain(format!("need a > 0 and |c| ≤ a², got a={a}, c={c}")));
    }
    let k = (a * a - c).sqrt() / (a * SQRT_2);
    if k >= 1.0 {
        return Err(Error::Domain(format!("c = -a² gives a divergent integral (a={a})")));
    }
    Ok(k)
}

/// `∫₀^∞ dx / √(x⁴ + 2c·x² + a⁴)`, equal to `K(√(a²−c) / (a√2)) / a`.
pub fn lemma2_integral(a: f64, c: f64) -> Result<f64> {
    Ok(elliptic_k(lemma2_modulus(a, c)?)? / a)
}

/// Upper bound `(π/2)(1 − ln(1−k²)/π)` on `K(k)`.
pub fn lemma3_k_bound(k: f64) -> Result<f64> {
    let k = check_modulus(k)?;
    Ok(FRAC_PI_2 * (1.0 - (-k * k).ln_1p() / PI))
}

/// `∫₀^∞ dt / |t² + λ²|`, which reduces to [`lemma2_integral`] with
/// `a = |λ|`, `c = Re(λ²)`.
pub fn resolvent_modulus_integral(re: f64, im: f64) -> Result<f64> {
    let a = re.hypot(im);
    lemma2_integral(a, re * re - im * im)
}

#[cfg(test)]
mod tests {
    use super::super::oracle::{quad_oracle, Domain, Integrand, DEFAULT_TOL};
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn lemma1_examples() {
        assert!((lemma1_integral(1.0, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(rel(lemma1_integral(1.0, 1.0).unwrap(), PI / 4.0) < 1e-15);
        assert!(rel(lemma1_integral(3.0, 0.0).unwrap(), PI / 54.0) < 1e-15);
        assert!(lemma1_integral(0.0, 2.0).is_err());
    }

    fn lemma1_grid() -> Vec<(f64, f64)> {
        let mut grid = Vec::new();
        for &re in &[-3.0, -0.5, 0.2, 1.0, 2.5] {
            for &im in &[-1.5, 0.0, 0.7, 2.0] {
                grid.push((re, im));
            }
        }
        grid
    }

    fn lemma2_grid() -> Vec<(f64, f64)> {
        let mut grid = Vec::new();
        for &a in &[0.3, 1.0, 2.0, 5.0] {
            for &frac in &[-0.95, -0.5, 0.0, 0.25, 1.0] {
                grid.push((a, frac * a * a));
            }
        }
        grid.push((2.0, 1.0));
        grid
    }

    #[test]
    fn lemma1_matches_quadrature() {
        let mut grid = lemma1_grid();
        grid.push((1.0, 2.0));
        assert!(grid.len() >= 20);
        for (re, im) in grid {
            let q = quad_oracle(Integrand::QuarticModulus { re, im }, Domain::WholeLine, DEFAULT_TOL).unwrap();
            assert!(rel(lemma1_integral(re, im).unwrap(), q.value) < 1e-8, "λ = {re}{im:+}i");
        }
    }

    #[test]
    fn elliptic_k_reference_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        // K(1/√2) = Γ(1/4)² / (4√π)
        assert!(rel(elliptic_k(SQRT_2 / 2.0).unwrap(), 1.854_074_677_301_372) < 1e-15);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-1.0).is_err());
        assert!(elliptic_k(f64::NAN).is_err());
        for &k in &[0.1, 0.5, 0.9] {
            assert_eq!(elliptic_k(-k).unwrap(), elliptic_k(k).unwrap());
        }
    }

    #[test]
    fn elliptic_k_matches_quadrature() {
        for &k in &[0.0, 0.1, 0.5, SQRT_2 / 2.0, 0.9, 0.99] {
            let q = quad_oracle(Integrand::EllipticK { k }, Domain::Finite(0.0, FRAC_PI_2), 1e-13).unwrap();
            assert!(rel(elliptic_k(k).unwrap(), q.value) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn lemma2_examples() {
        // a = 1, c = 0 gives K(1/√2)
        let v = lemma2_integral(1.0, 0.0).unwrap();
        assert!(rel(v, elliptic_k(SQRT_2 / 2.0).unwrap()) < 1e-15);
        assert_eq!(lemma2_integral(1.0, 1.0).unwrap(), FRAC_PI_2);
        // c = a² gives k = 0 and ∫ dx/(x²+a²) = π/(2a)
        assert!(rel(lemma2_integral(2.0, 4.0).unwrap(), PI / 4.0) < 1e-15);
        assert!(lemma2_integral(1.0, -1.0).is_err());
        assert!(lemma2_integral(1.0, 1.5).is_err());
        assert!(lemma2_integral(0.0, 0.0).is_err());
    }

    #[test]
    fn lemma2_matches_quadrature() {
        let grid = lemma2_grid();
        assert!(grid.len() >= 20);
        for (a, c) in grid {
            let q = quad_oracle(Integrand::Biquadratic { a, c }, Domain::HalfLine(0.0), DEFAULT_TOL).unwrap();
            assert!(rel(lemma2_integral(a, c).unwrap(), q.value) < 1e-8, "a={a}, c={c}");
        }
    }

    #[test]
    fn resolvent_modulus_matches_quadrature() {
        for &(re, im) in &[(1.0, 0.0), (1.0, 1.0), (0.3, -2.0), (-4.0, 1.0)] {
            let q = quad_oracle(Integrand::QuadraticModulus { re, im }, Domain::HalfLine(0.0), DEFAULT_TOL).unwrap();
            assert!(rel(resolvent_modulus_integral(re, im).unwrap(), q.value) < 1e-8);
        }
    }

    #[test]
    fn lemma3_dominates_k_on_a_grid() {
        assert_eq!(lemma3_k_bound(0.0).unwrap(), FRAC_PI_2);
        for i in 0..=1000 {
            let k = i as f64 / 1001.0;
            assert!(lemma3_k_bound(k).unwrap() >= elliptic_k(k).unwrap(), "k = {k}");
        }
        for &k in &[0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-8, 1.0 - 1e-12, -0.5, -0.99] {
            assert!(lemma3_k_bound(k).unwrap() >= elliptic_k(k).unwrap(), "k = {k}");
        }
        assert!(lemma3_k_bound(1.0).is_err());
    }
}
