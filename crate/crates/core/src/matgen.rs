//! Random diagonalizable test matrices `A = X·Λ·X⁻¹` with prescribed
//! condition numbers for `X` and `Λ`.
//!
//! `X = Q·D·Qᵀ` with `Q` Haar-distributed orthogonal and `D` a positive
//! diagonal whose extreme entries are pinned to `1` and `κ`, so `κ₂(X) = κ`
//! holds exactly. `X⁻¹ = Q·D⁻¹·Qᵀ` is formed from `D` directly, never by a
//! numerical inverse, so the reference sign carries no solve error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, matmul, DenseMatrix, FloatFormat};

const STREAM_ORTHOGONAL: u64 = 1;
const STREAM_DIAGONAL: u64 = 2;
const STREAM_SIGNED_DIAGONAL: u64 = 3;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ground-truth eigenstructure of a generated test matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenModel {
    pub x: DenseMatrix,
    pub x_inv: DenseMatrix,
    pub lambda: Vec<f64>,
    pub kappa2_x: f64,
    pub kappa2_lambda: f64,
    pub seed: u64,
}

impl EigenModel {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Builds `X = Q·diag(d)·Qᵀ` and its analytic inverse from an orthogonal `q`.
    pub fn from_factors(q: &DenseMatrix, d: &[f64], lambda: Vec<f64>, seed: u64) -> Result<Self> {
        if !q.is_square() || q.rows() != d.len() || d.len() != lambda.len() {
            return Err(Error::DimensionMismatch(format!(
                "q is {}x{}, d has {} entries, lambda has {}",
                q.rows(),
                q.cols(),
                d.len(),
                lambda.len()
            )));
        }
        if d.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::Domain("eigenvector scaling must be positive".into()));
        }
        let qt = q.transpose();
        let x = matmul(&q.scale_columns(d)?, &qt)?;
        let d_inv: Vec<f64> = d.iter().map(|v| 1.0 / v).collect();
        let x_inv = matmul(&q.scale_columns(&d_inv)?, &qt)?;
        let (dmin, dmax) = min_max(d.iter().copied());
        Ok(EigenModel {
            x,
            x_inv,
            kappa2_x: dmax / dmin,
            kappa2_lambda: spectral_ratio(&lambda),
            lambda,
            seed,
        })
    }

    /// Wraps an explicit eigenvector matrix and its inverse; `κ₂(X)` is
    /// estimated by power iteration on both.
    pub fn from_eigenvectors(x: DenseMatrix, x_inv: DenseMatrix, lambda: Vec<f64>) -> Result<Self> {
        let n = lambda.len();
        if x.rows() != n || x.cols() != n || x_inv.rows() != n || x_inv.cols() != n {
            return Err(Error::DimensionMismatch("eigenvector matrices must be n x n".into()));
        }
        let kappa2_x = linalg::two_norm_estimate(&x, 1e-14, 10_000).value
            * linalg::two_norm_estimate(&x_inv, 1e-14, 10_000).value;
        Ok(EigenModel {
            x,
            x_inv,
            kappa2_x,
            kappa2_lambda: spectral_ratio(&lambda),
            lambda,
            seed: 0,
        })
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn spectral_ratio(lambda: &[f64]) -> f64 {
    let (lo, hi) = min_max(lambda.iter().map(|v| v.abs()));
    hi / lo
}

/// Haar-distributed orthogonal matrix: Gaussian entries orthonormalized by
/// Gram-Schmidt applied twice. Gram-Schmidt yields the QR factor with a
/// positive triangular diagonal, which is the sign convention that makes
/// the distribution Haar.
pub fn random_orthogonal(n: usize, seed: u64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Domain("orthogonal matrix needs n >= 1".into()));
    }
    let mut rng = rng_for(seed, STREAM_ORTHOGONAL);
    let data: Vec<f64> = (0..n * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    // Orthonormalize rows; the transpose of an orthogonal matrix is orthogonal.
    let mut g = DenseMatrix::from_vec(n, n, data)?;
    for i in 0..n {
        for _pass in 0..2 {
            for j in 0..i {
                let (head, tail) = g.as_mut_slice().split_at_mut(i * n);
                let qj = &head[j * n..(j + 1) * n];
                let gi = &mut tail[..n];
                let proj: f64 = qj.iter().zip(gi.iter()).map(|(a, b)| a * b).sum();
                for (v, q) in gi.iter_mut().zip(qj) {
                    *v -= proj * q;
                }
            }
        }
        let row = g.row_mut(i);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Singular { column: i });
        }
        row.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(g.transpose())
}

/// `n` magnitudes log-uniform on `[1, κ]`, with one entry pinned to exactly
/// `1` and another to exactly `κ`. When `signed`, signs are random and both
/// signs are guaranteed to occur.
pub fn conditioned_diagonal(n: usize, kappa: f64, signed: bool, seed: u64) -> Result<Vec<f64>> {
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("condition number must be >= 1, got {kappa}")));
    }
    if n < 2 {
        return Err(Error::Domain("conditioned diagonal needs n >= 2".into()));
    }
    let stream = if signed { STREAM_SIGNED_DIAGONAL } else { STREAM_DIAGONAL };
    let mut rng = rng_for(seed, stream);
    let log_kappa = kappa.ln();
    let mut d: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * log_kappa).exp()).collect();
    let i_min = rng.random_range(0..n);
    let i_max = (i_min + rng.random_range(1..n)) % n;
    d[i_min] = 1.0;
    d[i_max] = kappa;
    if signed {
        for v in d.iter_mut() {
            if rng.random::<bool>() {
                *v = -*v;
            }
        }
        let positives = d.iter().filter(|v| **v > 0.0).count();
        if positives == 0 || positives == n {
            let flip = rng.random_range(0..n);
            d[flip] = -d[flip];
        }
    }
    Ok(d)
}

/// Model with `κ₂(X) = kappa_x` and `κ₂(Λ) = kappa_lambda`, both exact.
pub fn build_model(n: usize, kappa_x: f64, kappa_lambda: f64, seed: u64) -> Result<EigenModel> {
    let q = random_orthogonal(n, seed)?;
    let d = conditioned_diagonal(n, kappa_x, false, seed)?;
    let lambda = conditioned_diagonal(n, kappa_lambda, true, seed)?;
    EigenModel::from_factors(&q, &d, lambda, seed)
}

/// `A = X·diag(λ)·X⁻¹`.
pub fn assemble(model: &EigenModel) -> Result<DenseMatrix> {
    matmul(&model.x.scale_columns(&model.lambda)?, &model.x_inv)
}

/// `X·diag(sign λⱼ)·X⁻¹`.
pub fn reference_sign(model: &EigenModel) -> Result<DenseMatrix> {
    let signs = model
        .lambda
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            if l > 0.0 {
                Ok(1.0)
            } else if l < 0.0 {
                Ok(-1.0)
            } else {
                Err(Error::ImaginaryAxis { index: j })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    matmul(&model.x.scale_columns(&signs)?, &model.x_inv)
}

/// Writes `X.mat`, `X_inv.mat`, `lambda.mat` (a `1 x n` matrix) and `meta.txt`.
pub fn write_model(dir: &Path, model: &EigenModel, format: FloatFormat) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    linalg::write_matrix(&dir.join("X.mat"), &model.x, format)?;
    linalg::write_matrix(&dir.join("X_inv.mat"), &model.x_inv, format)?;
    let lambda = DenseMatrix::from_vec(1, model.n(), model.lambda.clone())?;
    linalg::write_matrix(&dir.join("lambda.mat"), &lambda, format)?;
    let mut meta = String::new();
    let _ = writeln!(meta, "n={}", model.n());
    let _ = writeln!(meta, "seed={}", model.seed);
    let _ = writeln!(meta, "kappa2_x={}", linalg::format_f64(model.kappa2_x, format));
    let _ = writeln!(meta, "kappa2_lambda={}", linalg::format_f64(model.kappa2_lambda, format));
    let path = dir.join("meta.txt");
    fs::write(&path, meta).map_err(|e| Error::io(&path, e))
}

/// Reads a directory written by [`write_model`].
pub fn read_model(dir: &Path) -> Result<EigenModel> {
    let x = linalg::read_matrix(&dir.join("X.mat"))?;
    let x_inv = linalg::read_matrix(&dir.join("X_inv.mat"))?;
    let lambda = linalg::read_matrix(&dir.join("lambda.mat"))?.into_vec();
    let path = dir.join("meta.txt");
    let meta = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut seed = 0;
    let mut kappa2_x = None;
    for (lno, line) in meta.lines().enumerate() {
        let Some((key, value)) = line.split_once('=') else { continue };
        let bad = || Error::Parse {
            path: path.clone(),
            line: lno + 1,
            message: format!("bad value for {key}"),
        };
        match key.trim() {
            "seed" => seed = value.trim().parse().map_err(|_| bad())?,
            "kappa2_x" => kappa2_x = Some(linalg::parse_f64(value.trim()).ok_or_else(bad)?),
            _ => {}
        }
    }
    let mut model = match kappa2_x {
        Some(k) => EigenModel {
            kappa2_lambda: spectral_ratio(&lambda),
            x,
            x_inv,
            lambda,
            kappa2_x: k,
            seed,
        },
        None => EigenModel::from_eigenvectors(x, x_inv, lambda)?,
    };
    model.seed = seed;
    if model.x.rows() != model.n() || !model.x.is_square() || model.x_inv.rows() != model.n() {
        return Err(Error::DimensionMismatch("model files disagree on n".into()));
    }
    Ok(model)
}
