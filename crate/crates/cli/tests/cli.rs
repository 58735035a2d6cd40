//! End-to-end tests of the `lustab` binary: argument handling, exit codes,
//! both input formats, and deterministic output.

use std::path::Path;
use std::process::{Command, Output};

fn lustab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lustab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn analyze_named_ghz() {
    let out = lustab(&["analyze", "--state", "ghz", "--n", "5", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["kernel_dim"], 4);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["n"], 5);
    assert_eq!(v["classification"]["bound_name"], "nonproduct");
    assert_eq!(v["classification"]["saturated"], true);
}

#[test]
fn analyze_named_ghz_with_coefficients() {
    let out = lustab(&[
        "analyze", "--state", "ghz", "--n", "3", "--alpha", "2/3", "--beta", "1/5", "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["kernel_dim"], 2);
}

#[test]
fn analyze_without_input_fails() {
    let out = lustab(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--input") && err.contains("--state"), "{err}");
}

#[test]
fn analyze_m4_in_exact_mode_fails() {
    let out = lustab(&["analyze", "--state", "m4", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_m4_in_float_mode_finds_the_block() {
    let out = lustab(&["analyze", "--state", "m4", "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["kernel_dim"], 3);
    assert_eq!(v["blocks"], serde_json::json!([[1, 2, 3, 4]]));
    assert_eq!(v["mode"], "float");
}

#[test]
fn analyze_unknown_state_fails() {
    let out = lustab(&["analyze", "--state", "no_such_state", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_tolerance_out_of_range_fails() {
    for tol in ["1e-3", "1e-14", "nan"] {
        let out = lustab(&["analyze", "--state", "singlet", "--tol", tol]);
        assert_eq!(out.status.code(), Some(2), "tol {tol}");
    }
}

#[test]
fn analyze_ket_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("singlet.ket");
    std::fs::write(&path, "|01> - |10>\n").unwrap();
    let out = lustab(&["analyze", "--input", path.to_str().unwrap(), "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["kernel_dim"], 3);
    assert_eq!(v["blocks"], serde_json::json!([[1, 2]]));
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["classification"]["singlet_pairs"], serde_json::json!([[1, 2]]));
}

#[test]
fn analyze_json_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("state.json");
    std::fs::write(
        &input,
        r#"{"n": 2, "mode": "exact", "amplitudes": [
            {"index": "01", "re": "1", "im": "0"},
            {"index": "10", "re": "-1", "im": "0"}
        ]}"#,
    )
    .unwrap();
    let output = dir.path().join("report.json");
    let out = lustab(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--json",
        "--out",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["kernel_dim"], 3);
}

#[test]
fn analyze_malformed_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ket");
    std::fs::write(&path, "|01> + |0>").unwrap();
    let out = lustab(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = Path::new("definitely-missing-file.ket");
    let out = lustab(&["analyze", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_is_deterministic() {
    let a = lustab(&["table", "--n", "4", "--json"]);
    let b = lustab(&["table", "--n", "4", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "table output must be reproducible");
    let v = stdout_json(&a);
    let rows = v.as_array().unwrap();
    assert!(rows
        .iter()
        .any(|r| r["family"] == "ghz" && r["n"] == 4 && r["expected_dim"] == 3));
    assert!(rows.iter().all(|r| r["agree"] == true));
}

#[test]
fn verify_small_suite_passes() {
    let out = lustab(&[
        "verify", "--n", "4", "--trials", "2", "--seed", "11", "--json",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    let props = v["properties"].as_array().unwrap();
    assert!(props.iter().any(|p| p["name"] == "structure_lemmas"));
    assert!(props.iter().all(|p| p["failures"] == 0));
}

#[test]
fn scan_finds_the_four_qubit_states() {
    let out = lustab(&["scan", "--n", "4", "--trials", "2", "--json"]);
    let v = stdout_json(&out);
    let hits = v.as_array().unwrap();
    let families: Vec<&str> = hits
        .iter()
        .map(|h| h["family"].as_str().unwrap())
        .collect();
    assert!(families.contains(&"block4"), "{families:?}");
    assert!(families.contains(&"m4"), "{families:?}");
    for h in hits {
        assert_eq!(h["kernel_dim"], 3);
        assert_eq!(h["n"], 4);
    }
}

#[test]
fn catalog_lists_named_states() {
    let out = lustab(&["catalog", "--n", "4", "--json"]);
    let v = stdout_json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for expected in ["singlet", "ghz_3", "w_4", "block4", "m4"] {
        assert!(names.contains(&expected), "missing {expected}: {names:?}");
    }
}
