use std::path::{Path, PathBuf};
use std::process::Command;

const EXPORTS: [&str; 22] = [
    "ms_last_error_message",
    "ms_version",
    "ms_matrix_new",
    "ms_matrix_free",
    "ms_matrix_rows",
    "ms_matrix_cols",
    "ms_matrix_copy_data",
    "ms_sign_de",
    "ms_sign_newton",
    "ms_involution_residual",
    "ms_model_build",
    "ms_model_free",
    "ms_model_n",
    "ms_model_assemble",
    "ms_model_reference_sign",
    "ms_bound_report",
    "ms_gamma",
    "ms_elliptic_k",
    "ms_e1_bound",
    "ms_e2_bound",
    "MS_STATUS_SINGULAR_POINT",
    "typedef struct MsMatrix MsMatrix",
];

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("matsign.h")
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(text.contains(name), "{name} missing from header");
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "matsign.h"

int main(void) {
    double data[4] = {2.0, 0.0, 0.0, -3.0};
    MsMatrix *a = NULL, *s = NULL;
    double out[4], residual = -1.0, k = 0.0;
    if (ms_matrix_new(2, 2, data, &a) != MS_STATUS_OK) return 10;
    if (ms_sign_de(a, 60, 1.0, 1, &s, &residual) != MS_STATUS_OK) return 11;
    if (ms_matrix_copy_data(s, out, 4) != MS_STATUS_OK) return 12;
    if (ms_elliptic_k(2.0, &k) != MS_STATUS_DOMAIN_ERROR) return 13;
    printf("%.3f %.3f %s\n", out[0], out[3], ms_last_error_message()[0] ? "message" : "empty");
    ms_matrix_free(a);
    ms_matrix_free(s);
    return 0;
}
"#;

#[test]
fn header_compiles_as_c() {
    if !have_cc() {
        eprintln!("skipped: no C compiler on PATH");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

/// Links the C program against the static library when cargo has built it
/// next to this test binary.
#[test]
fn c_program_runs_against_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libmatsign_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("skipped: no C compiler or no static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1.000 -1.000 message");
}
