use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matsign::linalg::read_matrix;

fn matsign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matsign")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sign_of_diagonal_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("diag23.mat");
    let output = dir.path().join("s.mat");
    let diag = dir.path().join("points.csv");
    fs::write(&input, "2 2\n2 0\n0 -3\n").unwrap();
    let out = matsign(&["sign", "--input", s(&input), "--output", s(&output), "--n-points", "30", "--diagnostics", s(&diag)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("involution_residual="));
    let m = read_matrix(&output).unwrap();
    assert!((m[(0, 0)] - 1.0).abs() < 1e-11 && (m[(1, 1)] + 1.0).abs() < 1e-11);
    let rows = fs::read_to_string(&diag).unwrap();
    assert!(rows.starts_with("k,t,weight,growth_factor,norm_Y\n"));
    assert_eq!(rows.lines().count(), 62);
}

#[test]
fn newton_and_hex_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.mat");
    let output = dir.path().join("s.mat");
    fs::write(&input, "2 2\n5 0\n0 -1\n").unwrap();
    let out = matsign(&["sign", "--input", s(&input), "--output", s(&output), "--method", "newton", "--hex-floats"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains("0x1.0000000000000p+0") && text.contains("-0x1.0000000000000p+0"));
}

#[test]
fn missing_input_names_the_path() {
    let out = matsign(&["sign", "--input", "/nonexistent/where.mat", "--output", "/tmp/unused.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/where.mat"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(matsign(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(matsign(&["sign", "--input", "x"]).status.code(), Some(2));
    let out = matsign(&["experiment", "--sweep", "n", "--trials", "0", "--threads", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 2);
    assert_eq!(matsign(&["--help"]).status.code(), Some(0));
}

#[test]
fn singular_point_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("rot.mat");
    fs::write(&input, "2 2\n0 1\n-1 0\n").unwrap();
    let out = matsign(&["sign", "--input", s(&input), "--output", s(&dir.path().join("s.mat")), "--n-points", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn thread_count_does_not_change_output_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model");
    let gen = matsign(&["gen", "--n", "40", "--kappa-x", "100", "--kappa-lambda", "100", "--seed", "5", "--output", s(&model)]);
    assert_eq!(gen.status.code(), Some(0));
    let input = model.join("A.mat");
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let output = dir.path().join(format!("s{threads}.mat"));
        let out = matsign(&["sign", "--input", s(&input), "--output", s(&output), "--threads", threads]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(fs::read(&output).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn bound_for_generated_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model");
    assert_eq!(matsign(&["gen", "--n", "30", "--seed", "2", "--output", s(&model)]).status.code(), Some(0));
    let csv = dir.path().join("bound.csv");
    let out = matsign(&["bound", "--model", s(&model), "--measure", "--csv", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{key}="))).unwrap();
        line.split_once('=').unwrap().1.parse().unwrap()
    };
    assert_eq!(value("n"), 30.0);
    assert!(value("measured_error_frob") <= value("total_bound"));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 2);

    let direct = matsign(&["bound", "--n", "30", "--seed", "2", "--rho-hat", "4"]);
    assert_eq!(direct.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&direct.stdout).contains("rho_hat=4.0000000000000000e0"));
}

#[test]
fn experiment_outputs_repeat_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = matsign(&[
            "experiment", "--sweep", "kappa-x", "--n", "10", "--grid", "10,100,1000", "--trials", "2", "--seed", "7",
            "--output-dir", s(&out_dir),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("error_slope="));
        let read = |name: &str| fs::read(out_dir.join(name)).unwrap();
        runs.push((read("sweep_kappa_x.csv"), read("sweep_kappa_x_summary.txt"), read("sweep_kappa_x.dat")));
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(String::from_utf8_lossy(&runs[0].0).lines().count(), 7);
}

#[test]
fn experiment_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "sweep = n\ngrid = 4,8\ntrials = 1\nfixed-kappa = 10\ntiming = false\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = matsign(&["experiment", "--config", s(&cfg), "--sweep", "n", "--output-dir", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("sweep_n.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(2).unwrap().starts_with("8,"));
}

#[test]
fn lemma_check_passes() {
    let out = matsign(&["lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert!(text.contains("lemma3: cases=20 violations=0"));
}
