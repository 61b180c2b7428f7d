//! End-to-end runs of the binary against golden outputs. Set
//! `QYBE_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qybe"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn assert_golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = golden_path(name);
    if std::env::var_os("QYBE_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(stdout, expected, "{name} differs from golden output");
}

fn assert_config_error(args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn sixj() {
    assert_golden("sixj_all_ones.json", &["sixj", "--args", "1 1 1 1 1 1"], 0);
    assert_golden("sixj_half_numeric.json", &["sixj", "--args", "1/2 1/2 1 1/2 1/2 1", "--mode", "numeric"], 0);
}

#[test]
fn rmatrix() {
    assert_golden("rmatrix_half.json", &["rmatrix", "--spin", "1/2"], 0);
    assert_golden(
        "rmatrix_half_numeric.json",
        &["rmatrix", "--spin", "1/2", "--mode", "numeric", "--q", "1.3", "--precision", "64"],
        0,
    );
    assert_golden("rmatrix_half_inverse.txt", &["rmatrix", "--spin", "1/2", "--inverse", "--format", "text"], 0);
}

#[test]
fn projectors() {
    assert_golden("projectors_half.json", &["projectors", "--spin", "1/2"], 0);
    assert_golden(
        "projectors_half_numeric.txt",
        &["projectors", "--spin", "1/2", "--mode", "numeric", "--precision", "64", "--format", "text"],
        0,
    );
}

#[test]
fn amatrix() {
    assert_golden("amatrix_1_2.json", &["amatrix", "--spin", "1", "--n", "2"], 0);
    assert_golden("amatrix_1_2_numeric.json", &["amatrix", "--spin", "1", "--n", "2", "--mode", "numeric"], 0);
}

#[test]
fn verify() {
    assert_golden("verify_1_all_exact.json", &["verify", "--spin", "1", "--suite", "all", "--mode", "exact"], 0);
    assert_golden(
        "verify_half_all_numeric.txt",
        &["verify", "--spin", "1/2", "--mode", "numeric", "--format", "text"],
        0,
    );
    assert_golden("verify_3_2_lemma3_n2.json", &["verify", "--spin", "3/2", "--suite", "lemma3", "--n", "2"], 0);
    assert_golden("verify_1_tlbwm.txt", &["verify", "--spin", "1", "--suite", "tlbwm", "--format", "text"], 0);
}

#[test]
fn verify_report_lists_every_check_passing() {
    let out = run(&["verify", "--spin", "1", "--suite", "all", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    for name in ["lemma1", "lemma2", "jgh1_j", "temperley_lieb_span", "racah", "braid_relation", "spectral_resolution"] {
        assert!(checks.iter().any(|c| c["check"] == name), "{name} missing");
    }
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn classify() {
    assert_golden("classify_3_2.json", &["classify", "--spin", "3/2", "--mode", "exact"], 0);
    assert_golden("classify_half.txt", &["classify", "--spin", "1/2", "--format", "text"], 0);
}

#[test]
fn enumerate() {
    let args = ["enumerate", "--spin", "1", "--q", "1.3", "--attempts", "200", "--seed", "42", "--format", "json"];
    assert_golden("enumerate_1.json", &args, 0);
    let single = run_with(&args, &[("QYBE_THREADS", "1")]);
    assert_eq!(single.stdout, std::fs::read(golden_path("enumerate_1.json")).unwrap());
    assert_golden("enumerate_half.txt", &["enumerate", "--spin", "1/2", "--attempts", "40", "--format", "text"], 0);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["amatrix", "--spin", "3/2", "--n", "3"];
    let direct = run(&args);
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    let out = run(&with_file);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["verify", "--spin", "1/2", "--mode", "numeric", "--q", "0.7", "--precision", "96"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn config_errors() {
    assert_config_error(&["verify", "--spin", "1", "--mode", "exact", "--q", "1.3"]);
    assert_config_error(&["verify", "--spin", "1", "--mode", "numeric", "--precision", "32"]);
    assert_config_error(&["verify", "--spin", "1", "--mode", "numeric", "--q", "1"]);
    assert_config_error(&["verify", "--spin", "0.5"]);
    assert_config_error(&["verify", "--spin", "5/2"]);
    assert_config_error(&["verify", "--spin", "1", "--suite", "lemma3", "--n", "3"]);
    assert_config_error(&["verify", "--spin", "1", "--suite", "nonsense"]);
    assert_config_error(&["amatrix", "--spin", "1", "--n", "4"]);
    assert_config_error(&["classify", "--spin", "1", "--mode", "numeric"]);
    assert_config_error(&["enumerate", "--spin", "1", "--mode", "exact"]);
    assert_config_error(&["enumerate", "--spin", "1", "--attempts", "0"]);
    assert_config_error(&["sixj", "--args", "1 1 1"]);
    let bad_threads = run_with(&["sixj", "--args", "1 1 1 1 1 1"], &[("QYBE_THREADS", "zero")]);
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn force_lifts_the_ceiling() {
    let out = run(&["amatrix", "--spin", "5/2", "--n", "1", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn numeric_mode_runs_above_the_ceiling() {
    let out = run(&["verify", "--spin", "5/2", "--suite", "ybe", "--mode", "numeric"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    assert_config_error(&["verify", "--spin", "5/2", "--suite", "lemma3", "--mode", "numeric"]);
    assert_config_error(&["classify", "--spin", "5/2"]);
    assert_config_error(&["rmatrix", "--spin", "5/2"]);
}
