//! C interface to `matsign`.
//!
//! Matrices and models cross the boundary as opaque handles that the caller
//! releases with the matching `_free` function. Every fallible call returns
//! an [`MsStatus`]; on failure, [`ms_last_error_message`] describes the
//! problem until the next call on the same thread. Matrix data is row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matsign::bounds::{self, ComplexEigenvalue};
use matsign::linalg::DenseMatrix;
use matsign::matgen::{self, EigenModel};
use matsign::sign::{build_grid, involution_residual, sign_de_with, sign_newton, DeOptions};
use matsign::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Singular = 4,
    SingularPoint = 5,
    NonConvergence = 6,
    DomainError = 7,
    IoError = 8,
    Panic = 9,
}

/// Opaque dense matrix.
pub struct MsMatrix(DenseMatrix);

/// Opaque generated test model with known eigenstructure.
pub struct MsModel(EigenModel);

/// Flat copy of a bound report.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MsBoundReport {
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
    pub saturated: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let clean = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(e: &Error) -> MsStatus {
    match e {
        Error::DimensionMismatch(_) => MsStatus::DimensionMismatch,
        Error::Singular { .. } => MsStatus::Singular,
        Error::SingularPoint { .. } => MsStatus::SingularPoint,
        Error::NonConvergence { .. } => MsStatus::NonConvergence,
        Error::ImaginaryAxis { .. } | Error::Domain(_) => MsStatus::DomainError,
        Error::InvalidData(_) => MsStatus::InvalidArgument,
        Error::Io { .. } | Error::Parse { .. } => MsStatus::IoError,
    }
}

struct Failure(MsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(MsStatus::NullPointer, format!("{name} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MsStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            MsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = value;
    Ok(())
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next `ms_` call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Creates a `rows`×`cols` matrix from `rows*cols` row-major values, or
/// zeros when `data` is null.
///
/// # Safety
/// `data` must be null or point to `rows*cols` readable doubles; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_matrix_new(rows: usize, cols: usize, data: *const f64, out: *mut *mut MsMatrix) -> MsStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or_else(|| Failure(MsStatus::InvalidArgument, "size overflows".into()))?;
        let m = if data.is_null() {
            DenseMatrix::zeros(rows, cols)
        } else {
            DenseMatrix::from_vec_finite(rows, cols, std::slice::from_raw_parts(data, len).to_vec())?
        };
        store(out, MsMatrix(m))
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_matrix_free(m: *mut MsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_matrix_rows(m: *const MsMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_matrix_cols(m: *const MsMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the entries, row-major, into `out`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ms_matrix_copy_data(m: *const MsMatrix, out: *mut f64, len: usize) -> MsStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let data = m.0.as_slice();
        if len != data.len() {
            return Err(Failure(MsStatus::DimensionMismatch, format!("buffer holds {len}, matrix has {}", data.len())));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(data);
        Ok(())
    })
}

/// sign(A) by the double-exponential rule with `2*n_points+1` points and
/// step `ln(8*d_const*n_points)/n_points`. `residual` receives
/// `‖S²−I‖_F` when not null.
///
/// # Safety
/// `a` must be a live handle, `out` a valid pointer, `residual` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ms_sign_de(
    a: *const MsMatrix,
    n_points: usize,
    d_const: f64,
    threads: usize,
    out: *mut *mut MsMatrix,
    residual: *mut f64,
) -> MsStatus {
    guard(|| {
        let a = deref(a, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if threads == 0 {
            return Err(Failure(MsStatus::InvalidArgument, "threads must be at least 1".into()));
        }
        let grid = build_grid(n_points, d_const)?;
        let r = sign_de_with(&a.0, &grid, &DeOptions { threads })?;
        if !residual.is_null() {
            *residual = r.residual_involution;
        }
        store(out, MsMatrix(r.sign_matrix))
    })
}

/// sign(A) by the Newton iteration `X ← (X + X⁻¹)/2`.
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_sign_newton(a: *const MsMatrix, tol: f64, max_iter: usize, out: *mut *mut MsMatrix) -> MsStatus {
    guard(|| {
        let a = deref(a, "matrix")?;
        let s = sign_newton(&a.0, tol, max_iter)?;
        store(out, MsMatrix(s))
    })
}

/// `‖S²−I‖_F`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_involution_residual(s: *const MsMatrix, out: *mut f64) -> MsStatus {
    guard(|| {
        let s = deref(s, "matrix")?;
        put(out, involution_residual(&s.0)?)
    })
}

/// Random model `A = XΛX⁻¹` with `κ₂(X) = kappa_x` and `κ₂(Λ) = kappa_lambda`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_model_build(n: usize, kappa_x: f64, kappa_lambda: f64, seed: u64, out: *mut *mut MsModel) -> MsStatus {
    guard(|| store(out, MsModel(matgen::build_model(n, kappa_x, kappa_lambda, seed)?)))
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_model_free(m: *mut MsModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_model_n(m: *const MsModel) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_model_assemble(m: *const MsModel, out: *mut *mut MsMatrix) -> MsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        store(out, MsMatrix(matgen::assemble(&m.0)?))
    })
}

/// `X·sign(Λ)·X⁻¹`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_model_reference_sign(m: *const MsModel, out: *mut *mut MsMatrix) -> MsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        store(out, MsMatrix(matgen::reference_sign(&m.0)?))
    })
}

/// Error bounds for a model, with growth factor `rho_hat` and `m_points`
/// summation gaps.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_bound_report(m: *const MsModel, rho_hat: f64, m_points: usize, out: *mut MsBoundReport) -> MsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        let r = bounds::bound_report(&m.0, rho_hat, m_points)?;
        put(
            out,
            MsBoundReport {
                n: r.n,
                kappa2_x: r.kappa2_x,
                e1_bound: r.e1_bound,
                e2_bound: r.e2_bound,
                total_bound: r.total_bound,
                c_nxl: r.c_nxl,
                gamma_n: r.gamma_n,
                gamma_3n: r.gamma_3n,
                gamma_m: r.gamma_m,
                rho_hat: r.rho_hat,
                m_points: r.m_points,
                lambda_frob: r.lambda_frob,
                spectral_sum_e1: r.spectral_sum_e1,
                spectral_sum_e2: r.spectral_sum_e2,
                assumption_ok: r.assumption_ok,
                saturated: r.saturated,
            },
        )
    })
}

/// `γ_m = m·u/(1 − m·u)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_gamma(m: usize, out: *mut f64) -> MsStatus {
    guard(|| put(out, bounds::gamma(m)?))
}

/// Complete elliptic integral of the first kind.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_elliptic_k(k: f64, out: *mut f64) -> MsStatus {
    guard(|| put(out, bounds::elliptic_k(k)?))
}

unsafe fn spectrum(n: usize, re: *const f64, im: *const f64) -> Result<Vec<ComplexEigenvalue>, Failure> {
    if re.is_null() {
        return Err(null("re"));
    }
    let re = std::slice::from_raw_parts(re, n);
    Ok(if im.is_null() {
        re.iter().map(|&r| ComplexEigenvalue::real(r)).collect()
    } else {
        let im = std::slice::from_raw_parts(im, n);
        re.iter().zip(im).map(|(&r, &i)| ComplexEigenvalue::new(r, i)).collect()
    })
}

/// Solve-error bound for `n` eigenvalues `re[j] + i·im[j]`; `im` may be
/// null for a real spectrum.
///
/// # Safety
/// `re` (and `im` when not null) must point to `n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ms_e1_bound(n: usize, kappa2_x: f64, rho_hat: f64, re: *const f64, im: *const f64, out: *mut f64) -> MsStatus {
    guard(|| put(out, bounds::e1_bound(n, kappa2_x, rho_hat, &spectrum(n, re, im)?)?))
}

/// Summation-error bound; arguments as for [`ms_e1_bound`].
///
/// # Safety
/// `re` (and `im` when not null) must point to `n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ms_e2_bound(n: usize, kappa2_x: f64, m_points: usize, re: *const f64, im: *const f64, out: *mut f64) -> MsStatus {
    guard(|| put(out, bounds::e2_bound(n, kappa2_x, m_points, &spectrum(n, re, im)?)?))
}
