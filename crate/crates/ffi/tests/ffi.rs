use std::ffi::CStr;
use std::ptr;

use matsign_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ms_last_error_message()) }.to_string_lossy().into_owned()
}

fn matrix(rows: usize, cols: usize, data: &[f64]) -> *mut MsMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ms_matrix_new(rows, cols, data.as_ptr(), &mut m) }, MsStatus::Ok);
    m
}

fn contents(m: *const MsMatrix) -> Vec<f64> {
    let len = unsafe { ms_matrix_rows(m) * ms_matrix_cols(m) };
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { ms_matrix_copy_data(m, buf.as_mut_ptr(), len) }, MsStatus::Ok);
    buf
}

#[test]
fn diagonal_sign_round_trip() {
    let a = matrix(2, 2, &[2.0, 0.0, 0.0, -3.0]);
    let mut s = ptr::null_mut();
    let mut residual = f64::NAN;
    assert_eq!(unsafe { ms_sign_de(a, 60, 1.0, 2, &mut s, &mut residual) }, MsStatus::Ok);
    let v = contents(s);
    assert!((v[0] - 1.0).abs() < 1e-12 && (v[3] + 1.0).abs() < 1e-12);
    assert!(v[1] == 0.0 && v[2] == 0.0);
    assert!(residual < 1e-11);
    let mut newton = ptr::null_mut();
    assert_eq!(unsafe { ms_sign_newton(a, 1e-14, 50, &mut newton) }, MsStatus::Ok);
    assert_eq!(contents(newton), vec![1.0, 0.0, 0.0, -1.0]);
    let mut r = f64::NAN;
    assert_eq!(unsafe { ms_involution_residual(newton, &mut r) }, MsStatus::Ok);
    assert_eq!(r, 0.0);
    unsafe {
        ms_matrix_free(a);
        ms_matrix_free(s);
        ms_matrix_free(newton);
    }
}

#[test]
fn model_workflow() {
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { ms_model_build(12, 10.0, 10.0, 3, &mut model) }, MsStatus::Ok);
    assert_eq!(unsafe { ms_model_n(model) }, 12);
    let (mut a, mut exact, mut s) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { ms_model_assemble(model, &mut a) }, MsStatus::Ok);
    assert_eq!(unsafe { ms_model_reference_sign(model, &mut exact) }, MsStatus::Ok);
    assert_eq!(unsafe { ms_sign_de(a, 60, 1.0, 1, &mut s, ptr::null_mut()) }, MsStatus::Ok);
    let err: f64 = contents(s).iter().zip(contents(exact)).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut report = MsBoundReport::default();
    assert_eq!(unsafe { ms_bound_report(model, 10.0, 120, &mut report) }, MsStatus::Ok);
    assert_eq!(report.n, 12);
    assert_eq!(report.total_bound, report.e1_bound + report.e2_bound);
    assert!(err <= report.total_bound, "{err} vs {}", report.total_bound);
    unsafe {
        ms_matrix_free(a);
        ms_matrix_free(exact);
        ms_matrix_free(s);
        ms_model_free(model);
    }
}

#[test]
fn scalar_functions() {
    let mut g = 0.0;
    assert_eq!(unsafe { ms_gamma(1, &mut g) }, MsStatus::Ok);
    assert_eq!(g, 2f64.powi(-53) / (1.0 - 2f64.powi(-53)));
    let mut k = 0.0;
    assert_eq!(unsafe { ms_elliptic_k(0.0, &mut k) }, MsStatus::Ok);
    assert_eq!(k, std::f64::consts::FRAC_PI_2);
    assert_eq!(unsafe { ms_elliptic_k(1.0, &mut k) }, MsStatus::DomainError);
    assert!(last_error().contains("|k| < 1"));

    let re = [1.0];
    let im = [1.0];
    let mut e2 = 0.0;
    assert_eq!(unsafe { ms_e2_bound(1, 1.0, 60, re.as_ptr(), im.as_ptr(), &mut e2) }, MsStatus::Ok);
    let mut gm = 0.0;
    unsafe { ms_gamma(60, &mut gm) };
    assert!((e2 - gm * (1.0 + 2f64.ln() / std::f64::consts::PI)).abs() < 1e-15 * e2);
    let mut e1 = 0.0;
    assert_eq!(unsafe { ms_e1_bound(1, 1.0, 1.0, re.as_ptr(), ptr::null(), &mut e1) }, MsStatus::Ok);
    assert!(e1 > 0.0);
    let zero = [0.0];
    assert_eq!(unsafe { ms_e1_bound(1, 1.0, 1.0, zero.as_ptr(), ptr::null(), &mut e1) }, MsStatus::DomainError);
}

#[test]
fn error_reporting() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ms_sign_de(ptr::null(), 60, 1.0, 1, &mut out, ptr::null_mut()) }, MsStatus::NullPointer);
    assert!(last_error().contains("null"));
    let rect = matrix(2, 3, &[1.0; 6]);
    assert_eq!(unsafe { ms_sign_de(rect, 60, 1.0, 1, &mut out, ptr::null_mut()) }, MsStatus::DimensionMismatch);
    assert_eq!(unsafe { ms_sign_de(rect, 60, 1.0, 0, &mut out, ptr::null_mut()) }, MsStatus::InvalidArgument);
    let mut buf = [0.0; 4];
    assert_eq!(unsafe { ms_matrix_copy_data(rect, buf.as_mut_ptr(), 4) }, MsStatus::DimensionMismatch);
    let nan = [f64::NAN];
    assert_eq!(unsafe { ms_matrix_new(1, 1, nan.as_ptr(), &mut out) }, MsStatus::InvalidArgument);
    // A² = −I puts a singular point at t = 1.
    let rot = matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    assert_eq!(unsafe { ms_sign_de(rot, 1, 1.0, 1, &mut out, ptr::null_mut()) }, MsStatus::SingularPoint);
    assert!(out.is_null());
    let mut zeros = ptr::null_mut();
    assert_eq!(unsafe { ms_matrix_new(2, 2, ptr::null(), &mut zeros) }, MsStatus::Ok);
    assert_eq!(contents(zeros), vec![0.0; 4]);
    assert_eq!(unsafe { ms_matrix_rows(ptr::null()) }, 0);
    unsafe {
        ms_matrix_free(rect);
        ms_matrix_free(rot);
        ms_matrix_free(zeros);
        ms_matrix_free(ptr::null_mut());
        ms_model_free(ptr::null_mut());
    }
    assert!(!unsafe { CStr::from_ptr(ms_version()) }.to_bytes().is_empty());
}
