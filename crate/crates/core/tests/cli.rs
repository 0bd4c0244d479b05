use std::process::{Command, Output};

use serde_json::Value;

fn critent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critent")).args(args).output().unwrap()
}

fn data_lines(stdout: &[u8]) -> Vec<String> {
    String::from_utf8(stdout.to_vec())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn dimer_csv_has_one_row_per_temperature() {
    let out = critent(&["dimer", "--t-min", "0.1", "--t-max", "10", "--t-count", "100", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = data_lines(&out.stdout);
    assert_eq!(lines[0], "model,T,lambda,N,r,S_i,S_j,S_ij,MI,tag");
    assert_eq!(lines.len(), 101);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# T in units of the exchange coupling J"));
}

#[test]
fn ising_sweep_grid_and_json() {
    let out = critent(&["ising2d", "sweep", "--t-min", "2", "--t-max", "3", "--t-count", "3", "--n-max", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 15);
    assert_eq!(recs[0]["model"], "ising2d");
    assert_eq!(recs[0]["tag"], "symmetric");
    for r in recs {
        let identity = r["S_i"].as_f64().unwrap() + r["S_j"].as_f64().unwrap() - r["S_ij"].as_f64().unwrap();
        assert!((identity - r["MI"].as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn tfim_mi_matches_library() {
    let out = critent(&["tfim", "mi", "--lambda", "2", "--n", "100", "--r", "10", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mi = v["records"][0]["MI"].as_f64().unwrap();
    let lib = critent::tfim::mi_at(2.0, 0.0, 100, 10, critent::tfim::Sector::Even).unwrap();
    assert_eq!(mi, lib);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["tfim", "sweep", "--lambda-count", "5", "--sizes", "30", "--r-max", "15", "--workers", "3"];
    let a = critent(&args);
    let b = critent(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    // validation
    assert_eq!(critent(&["tfim", "mi", "--lambda", "1", "--n", "9", "--r", "2"]).status.code(), Some(1));
    assert_eq!(critent(&["ising2d", "mi", "--t", "-1", "--n", "3"]).status.code(), Some(1));
    // usage
    let usage = critent(&["ising2d", "frobnicate"]);
    assert_eq!(usage.status.code(), Some(1));
    assert!(!usage.stderr.is_empty());
    // comparison threshold
    assert_eq!(critent(&["oracle", "compare", "--n", "8", "--lambda", "1.5"]).status.code(), Some(0));
    assert_eq!(
        critent(&["oracle", "compare", "--n", "8", "--lambda", "1.5", "--t", "1"]).status.code(),
        Some(3)
    );
}

#[test]
fn fit_reads_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xy.csv");
    let rows: String = (1..=20).map(|k| format!("{},{}\n", k, 3.0 * (k as f64).powf(-0.5))).collect();
    std::fs::write(&path, format!("x,y\n{rows}")).unwrap();
    let out = critent(&["fit", "power", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "power_law");
    assert!((v["amplitude"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn props_suite_passes() {
    let out = critent(&["props", "--trials", "200", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn json_records_follow_schema_keys() {
    let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
    let record = &schema["$defs"]["record"];
    let allowed: Vec<&str> = record["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    let required: Vec<&str> = record["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    for args in [
        vec!["dimer", "--t-count", "3", "--format", "json"],
        vec!["ising2d", "sweep", "--t-count", "2", "--n-max", "2", "--format", "json"],
        vec!["tfim", "sweep", "--lambda-count", "2", "--sizes", "8", "--r-max", "4", "--format", "json"],
    ] {
        let out = critent(&args);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        for rec in v["records"].as_array().unwrap() {
            let obj = rec.as_object().unwrap();
            assert!(obj.keys().all(|k| allowed.contains(&k.as_str())), "{obj:?}");
            assert!(required.iter().all(|k| obj.contains_key(*k)), "{obj:?}");
        }
    }
}
