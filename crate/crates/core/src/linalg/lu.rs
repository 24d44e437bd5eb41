//! LU factorization with partial pivoting, instrumented to record the growth
//! factor over every intermediate Schur-complement entry.

use super::kernels::{sub_rows, sub_rows_tracked};
use super::matrix::{DenseMatrix, COL_BLOCK};
use crate::error::{Error, Result};

/// Panel width of the blocked factorization.
const PANEL: usize = 32;

/// `P·B = L·U` with `L` unit lower triangular and `U` upper triangular.
///
/// Both factors are stored packed in one matrix; [`lower`](Self::lower) and
/// [`upper`](Self::upper) unpack them.
#[derive(Clone, Debug)]
pub struct LuFactorization {
    perm: Vec<usize>,
    packed: DenseMatrix,
    growth_factor: f64,
    max_abs_initial: f64,
}

impl LuFactorization {
    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `perm[i]` is the row of the original matrix that ends up in row `i`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Largest magnitude seen during elimination over the largest initial magnitude.
    pub fn growth_factor(&self) -> f64 {
        self.growth_factor
    }

    pub fn max_abs_initial(&self) -> f64 {
        self.max_abs_initial
    }

    pub fn lower(&self) -> DenseMatrix {
        let n = self.n();
        let mut l = DenseMatrix::identity(n);
        for i in 1..n {
            l.row_mut(i)[..i].copy_from_slice(&self.packed.row(i)[..i]);
        }
        l
    }

    pub fn upper(&self) -> DenseMatrix {
        let n = self.n();
        let mut u = DenseMatrix::zeros(n, n);
        for i in 0..n {
            u.row_mut(i)[i..].copy_from_slice(&self.packed.row(i)[i..]);
        }
        u
    }

    /// The permutation as a matrix `P` with `P·B = L·U`.
    pub fn permutation_matrix(&self) -> DenseMatrix {
        let n = self.n();
        let mut p = DenseMatrix::zeros(n, n);
        for (i, &src) in self.perm.iter().enumerate() {
            p[(i, src)] = 1.0;
        }
        p
    }
}

fn pivot_row(a: &DenseMatrix, k: usize) -> usize {
    let mut p = k;
    let mut best = a[(k, k)].abs();
    for i in k + 1..a.rows() {
        let v = a[(i, k)].abs();
        if v > best {
            best = v;
            p = i;
        }
    }
    p
}

/// Gaussian elimination with partial pivoting.
///
/// Panels of columns are factored first and the trailing columns updated
/// afterwards. Each entry still receives its elimination updates one at a
/// time in ascending step order, so the factors are bitwise identical to the
/// textbook right-looking loop. An exactly zero pivot column is an error;
/// tiny pivots are accepted.
pub fn lu_factor(b: &DenseMatrix) -> Result<LuFactorization> {
    if !b.is_square() || b.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "LU needs a nonempty square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let n = b.rows();
    let max_abs_initial = b.max_abs();
    let mut a = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut peak = max_abs_initial;

    for k0 in (0..n).step_by(PANEL) {
        let k1 = (k0 + PANEL).min(n);

        for k in k0..k1 {
            let p = pivot_row(&a, k);
            if a[(p, k)] == 0.0 {
                return Err(Error::Singular { column: k });
            }
            a.swap_rows(k, p);
            perm.swap(k, p);
            let pivot = a[(k, k)];
            let data = a.as_mut_slice();
            let (head, tail) = data.split_at_mut((k + 1) * n);
            let pivot_seg = &head[k * n + k + 1..k * n + k1];
            for row in tail.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                sub_rows_tracked(&mut row[k + 1..k1], &[l], &[pivot_seg], &mut peak);
            }
        }

        if k1 == n {
            continue;
        }
        let data = a.as_mut_slice();
        let (panel, below) = data.split_at_mut(k1 * n);
        // Finish the U rows of this panel, top to bottom.
        for i in k0 + 1..k1 {
            let (done, rest) = panel.split_at_mut(i * n);
            let (left, right) = rest[..n].split_at_mut(k1);
            let sources: Vec<&[f64]> = (k0..i).map(|k| &done[k * n + k1..(k + 1) * n]).collect();
            sub_rows_tracked(right, &left[k0..i], &sources, &mut peak);
        }
        let sources: Vec<&[f64]> = (k0..k1).map(|k| &panel[k * n + k1..(k + 1) * n]).collect();
        for row in below.chunks_exact_mut(n) {
            let (left, right) = row.split_at_mut(k1);
            sub_rows_tracked(right, &left[k0..k1], &sources, &mut peak);
        }
    }

    let growth_factor = if max_abs_initial > 0.0 {
        peak / max_abs_initial
    } else {
        1.0
    };
    Ok(LuFactorization {
        perm,
        packed: a,
        growth_factor,
        max_abs_initial,
    })
}

/// Solves `B·X = rhs` for every column of `rhs`, given the factorization of `B`.
pub fn lu_solve(f: &LuFactorization, rhs: &DenseMatrix) -> Result<DenseMatrix> {
    let n = f.n();
    if rhs.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, factorization is {n}x{n}",
            rhs.rows()
        )));
    }
    let m = rhs.cols();
    let mut x = DenseMatrix::zeros(n, m);
    for (i, &src) in f.perm.iter().enumerate() {
        x.row_mut(i).copy_from_slice(rhs.row(src));
    }
    let lu = &f.packed;
    let data = x.as_mut_slice();
    for j0 in (0..m).step_by(COL_BLOCK) {
        let j1 = (j0 + COL_BLOCK).min(m);
        // L·Z = P·rhs, unit diagonal
        for i in 1..n {
            let (done, rest) = data.split_at_mut(i * m);
            let sources: Vec<&[f64]> = (0..i).map(|k| &done[k * m + j0..k * m + j1]).collect();
            sub_rows(&mut rest[j0..j1], &lu.row(i)[..i], &sources);
        }
        // U·X = Z
        for i in (0..n).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * m);
            let target = &mut head[i * m + j0..i * m + j1];
            let u_row = lu.row(i);
            let sources: Vec<&[f64]> = (0..n - i - 1).map(|r| &tail[r * m + j0..r * m + j1]).collect();
            sub_rows(target, &u_row[i + 1..], &sources);
            let d = u_row[i];
            for t in target.iter_mut() {
                *t /= d;
            }
        }
    }
    Ok(x)
}

/// `B⁻¹`, through the factorization.
pub fn inverse(b: &DenseMatrix) -> Result<DenseMatrix> {
    let f = lu_factor(b)?;
    lu_solve(&f, &DenseMatrix::identity(b.rows()))
}
