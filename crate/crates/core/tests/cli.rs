use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

fn rmdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn converged_run_exits_zero() {
    let zero_cycle = model("zero_cycle.json");
    let out = rmdp(&[
        "--model",
        zero_cycle.to_str().unwrap(),
        "--algorithm",
        "bvi",
        "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["algorithm"], "bvi");
    assert!(!doc["trace"].as_array().unwrap().is_empty());
}

#[test]
fn no_guarantee_exits_two() {
    // minimizing cumulative reward on a polytopic model: no stopping criterion applies
    let polytope_trap = model("polytope_trap.json");
    let out = rmdp(&[
        "--model",
        polytope_trap.to_str().unwrap(),
        "--direction",
        "min",
        "--max-iterations",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["converged"], false);
    assert!(!doc["caveats"].as_array().unwrap().is_empty());
}

#[test]
fn conflicting_flags_exit_one() {
    let zero_cycle = model("zero_cycle.json");
    let m = zero_cycle.to_str().unwrap();
    for args in [
        vec!["--model", m, "--gamma", "0.9"],
        vec!["--model", m, "--objective", "lra", "--semantics", "inf"],
        vec!["--model", m, "--semantics", "inf"],
        vec![
            "--model",
            m,
            "--objective",
            "ssp",
            "--direction",
            "max",
            "--targets",
            "s",
        ],
        vec!["--model", m, "--objective", "disc"],
        vec!["--model", m, "--objective", "disc", "--gamma", "1.0"],
        vec!["--model", m, "--targets", "nowhere"],
        vec!["--model", m, "--epsilon", "0"],
        vec!["--objective", "tr"],
    ] {
        let out = rmdp(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).contains("error"), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn parse_errors_point_into_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"states": ["a"], "initial": "a", "actions": [
            {"from": "a", "label": "x", "reward": 0, "support": ["b"],
             "uncertainty": {"kind": "singleton", "dist": [1]}}]}"#,
    )
    .unwrap();
    let out = rmdp(&["--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("/actions/0/support/0"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("chain.json");
    let result_path = dir.path().join("result.json");
    let out = rmdp(&[
        "generate",
        "chain",
        "12",
        "--radius",
        "0.05",
        "--output",
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = rmdp(&[
        "--model",
        model_path.to_str().unwrap(),
        "--objective",
        "ssp",
        "--output",
        result_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&result_path).unwrap()).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 12);
    let lower = doc["initial"]["lower"].as_f64().unwrap();
    // at least one step per remaining state, at cost >= 1 each
    assert!(lower >= 11.0, "{lower}");
}

#[test]
fn threads_switch_to_jacobi_and_agree() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("grid.json");
    let out = rmdp(&[
        "generate",
        "grid",
        "8",
        "--seed",
        "3",
        "--output",
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m = model_path.to_str().unwrap();
    let one: Value =
        serde_json::from_slice(&rmdp(&["--model", m, "--epsilon", "1e-8"]).stdout).unwrap();
    let two: Value = serde_json::from_slice(
        &rmdp(&["--model", m, "--epsilon", "1e-8", "--threads", "2"]).stdout,
    )
    .unwrap();
    let a = one["initial"]["lower"].as_f64().unwrap();
    let b = two["initial"]["lower"].as_f64().unwrap();
    assert!((a - b).abs() <= 2e-8, "{a} vs {b}");
}
