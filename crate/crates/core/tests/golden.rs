//! Shipped models against their `.expected.json` sidecars, through the CLI.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn number(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) if s == "inf" => f64::INFINITY,
        Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
        other => panic!("not a number: {other}"),
    }
}

fn run(model: &Path, spec: &Value) -> Value {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rmdp"));
    cmd.arg("--model").arg(model);
    for key in ["objective", "direction", "algorithm", "semantics"] {
        if let Some(v) = spec.get(key) {
            cmd.arg(format!("--{key}")).arg(v.as_str().unwrap());
        }
    }
    for key in ["epsilon", "gamma"] {
        if let Some(v) = spec.get(key) {
            cmd.arg(format!("--{key}")).arg(number(v).to_string());
        }
    }
    let out = cmd.output().expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}: {spec}\n{}",
        model.display(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("result is JSON")
}

#[test]
fn sidecars_match() {
    let mut checked = 0;
    for entry in std::fs::read_dir(models_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_owned();
        let Some(stem) = name.strip_suffix(".expected.json") else {
            continue;
        };
        let model = path.with_file_name(format!("{stem}.json"));
        let sidecar: Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for spec in sidecar["runs"].as_array().unwrap() {
            let eps = number(&spec["epsilon"]);
            let result = run(&model, spec);
            assert_eq!(result["converged"], Value::Bool(true));
            for (state, expected) in spec["values"].as_object().unwrap() {
                let expected = number(expected);
                let row = result["states"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .find(|r| r["state"] == *state)
                    .unwrap_or_else(|| panic!("{stem}: no state {state}"));
                let (lo, hi) = (number(&row["lower"]), number(&row["upper"]));
                // bounds bracket the value up to rounding and are eps-tight
                assert!(
                    lo <= expected + 1e-9 && expected <= hi + 1e-9 && hi - lo <= eps,
                    "{stem} {spec}: {state} in [{lo}, {hi}], expected {expected}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "only {checked} values checked");
}
