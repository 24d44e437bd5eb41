//! Dense real linear algebra: products, instrumented LU, solves, norms and
//! the text matrix format.

mod io;
mod lu;
mod matrix;
mod norm;

pub use io::{format_f64, format_hex_f64, format_matrix, parse_f64, parse_matrix, read_matrix, write_matrix, FloatFormat};
pub use lu::{inverse, lu_factor, lu_solve, LuFactorization};
pub use matrix::{matmul, DenseMatrix};
pub use norm::{frobenius_norm, two_norm_estimate, NormEstimate};

/// Unit roundoff of IEEE binary64, `2⁻⁵³`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

mod kernels;
