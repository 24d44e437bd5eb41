use super::matrix::DenseMatrix;

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    m.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Result of [`two_norm_estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// False when `max_iter` was exhausted; `value` is then the best estimate so far.
    pub converged: bool,
}

fn mat_vec(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_t_vec(m: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.cols()];
    for (i, &vi) in v.iter().enumerate() {
        for (o, a) in out.iter_mut().zip(m.row(i)) {
            *o += a * vi;
        }
    }
    out
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on `mᵀm`.
///
/// The estimate is `‖m·v‖` for a unit vector `v`, which never exceeds `‖m‖₂`.
pub fn two_norm_estimate(m: &DenseMatrix, tol: f64, max_iter: usize) -> NormEstimate {
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    // Deterministic start with no special alignment to coordinate axes.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 37 + 11) % 17) as f64 / 17.0).collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|x| *x /= s);

    let mut estimate = 0.0;
    for it in 1..=max_iter {
        let mv = mat_vec(m, &v);
        let sigma = norm2(&mv);
        if sigma == 0.0 {
            return NormEstimate {
                value: estimate,
                iterations: it,
                converged: true,
            };
        }
        let done = (sigma - estimate).abs() <= tol * sigma;
        estimate = sigma;
        if done {
            return NormEstimate {
                value: estimate,
                iterations: it,
                converged: true,
            };
        }
        let w = mat_t_vec(m, &mv);
        let wn = norm2(&w);
        if wn == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    NormEstimate {
        value: estimate,
        iterations: max_iter,
        converged: false,
    }
}
