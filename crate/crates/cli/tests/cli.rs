use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqdensity")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn polyadic_distance_prints_fraction_and_decimal() {
    let out = bin(&["polyadic", "dist", "0", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "7/64 = 0.109375");
    let out = bin(&["polyadic", "dist", "5", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0 = 0");
    let out = bin(&["polyadic", "dist", "-3", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn density_of_a_progression() {
    let out = bin(&["density", "--pred", r#"{"ap":{"r":2,"m":4}}"#, "--grid", "1e3..1e6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((v["result"]["value"].as_f64().unwrap() - 0.25).abs() < 1e-5);
    assert_eq!(v["result"]["exact"], "1/4");
}

#[test]
fn density_with_ladder_reports_certificates() {
    let out = bin(&["density", "--pred", "\"squares\"", "--grid", "1e3..1e5", "--ladder", "factorial:4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let certs = v["result"]["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    let gaps = v["result"]["measurability"]["levels"].as_array().unwrap();
    assert_eq!(gaps.last().unwrap()["modulus"], 24);
}

#[test]
fn uniform_sum_at_one_is_one_half() {
    let out = bin(&["dist", "conv", "--uniform", "--uniform", "--eval", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let g = v["result"]["evals"][0]["value"].as_f64().unwrap();
    assert!((g - 0.5).abs() <= 5e-3, "{g}");
}

#[test]
fn dist_verbs_run() {
    let vdc2 = r#"{"kind":"vdc","chain":{"ratio":2,"levels":2}}"#;
    let vdc3 = r#"{"kind":"vdc","chain":{"ratio":3,"levels":2}}"#;
    let v = json_of(&bin(&["dist", "moments", "--spec", vdc2, "-n", "4096"]));
    assert!((v["result"]["mean"].as_f64().unwrap() - 0.5).abs() < 1e-3);
    let v = json_of(&bin(&["dist", "corr", "--spec", vdc2, "--spec2", vdc2, "-n", "4096"]));
    assert!((v["result"]["rho"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let v = json_of(&bin(&["dist", "indep", "--spec", vdc2, "--spec2", vdc3, "-n", "100000"]));
    assert_eq!(v["result"]["interval"]["independent"], true);
    assert_eq!(v["result"]["statistical"]["independent"], true);
    let out = bin(&["dist", "edf", "--spec", vdc2, "-n", "8", "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("x,F"));
}

#[test]
fn gate_failures_exit_one() {
    assert_eq!(bin(&["exp", "niven", "--index", "multiple:2"]).status.code(), Some(1));
    let out = bin(&["exp", "resample", "--index", "multiple:2", "-n", "20000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("uniformly distributed"));
    assert_eq!(bin(&["exp", "niven", "--index", "pair-swap"]).status.code(), Some(0));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(bin(&["gen", "--spec", "{bad"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["density", "--pred", "\"primes\"", "--grid", "10..5"]).status.code(), Some(2));
    assert_eq!(bin(&["polyadic", "sample", "--levels", "2,3"]).status.code(), Some(2));
    let out = bin(&["polyadic", "dist", "0", "6", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
}

#[test]
fn echoed_config_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("run.json");
    let first_s = first.to_str().unwrap();
    let out = bin(&[
        "exp", "metric-ud", "--count", "30", "--alphas", "5", "--seed", "42", "--out", first_s,
    ]);
    assert!(out.status.code().unwrap() <= 1);
    let before = fs::read(&first).unwrap();
    let again = bin(&["--config", first_s]);
    assert_eq!(again.status.code(), out.status.code());
    assert_eq!(fs::read(&first).unwrap(), before);

    // the echoed config alone, redirected elsewhere, gives the same result
    let doc: Value = serde_json::from_slice(&before).unwrap();
    let bare = dir.path().join("config.json");
    fs::write(&bare, serde_json::to_string(&doc["config"]).unwrap()).unwrap();
    let second = dir.path().join("second.json");
    bin(&["--config", bare.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    let doc2: Value = serde_json::from_slice(&fs::read(&second).unwrap()).unwrap();
    assert_eq!(doc2["result"], doc["result"]);
    assert_eq!(doc2["config"]["seed"], 42);
}

#[test]
fn sampling_depends_only_on_seed() {
    let a = json_of(&bin(&["polyadic", "sample", "--seed", "7", "--levels", "factorial:12"]));
    let b = json_of(&bin(&["polyadic", "sample", "--seed", "7", "--levels", "factorial:12"]));
    let c = json_of(&bin(&["polyadic", "sample", "--seed", "8", "--levels", "factorial:12"]));
    assert_eq!(a["result"], b["result"]);
    assert_ne!(a["result"], c["result"]);
    let residues = a["result"]["residues"].as_array().unwrap();
    let levels = a["result"]["levels"].as_array().unwrap();
    assert_eq!(residues.len(), 12);
    for (r, m) in residues.iter().zip(levels) {
        assert!(r.as_u64().unwrap() < m.as_u64().unwrap());
    }
}

#[test]
fn csv_output_writes_series_and_json_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = bin(&[
        "density", "--pred", "\"squares\"", "--grid", "1e2..1e4:5", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,ratio"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 2);
        cols[1].parse::<f64>().unwrap();
    }
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("profile.csv.json")).unwrap()).unwrap();
    assert_eq!(side["config"]["format"], "csv");
}

#[test]
fn experiments_run_from_the_command_line() {
    let out = bin(&["exp", "clt", "-k", "12", "-n", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["result"]["statistics"]["kolmogorov_distance"].as_f64().unwrap() <= 0.05);
    assert_eq!(bin(&["exp", "weaklaw"]).status.code(), Some(0));
    let out = bin(&["exp", "sss", "--spec", r#"{"kind":"vdc","chain":{"ratio":2,"levels":2}}"#,
        "--spec", r#"{"kind":"vdc","chain":{"ratio":3,"levels":2}}"#, "--g", "x^2,x", "--index", "pair-swap"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bin(&["polyadic", "integrate", "--spec", r#"{"kind":"simple","parts":[{"r":1,"m":3,"c":1.0}]}"#]);
    assert_eq!(json_of(&out)["result"]["value"].as_f64().unwrap(), 1.0 / 3.0);
    let out = bin(&["polyadic", "profile", "--spec", r#"{"kind":"vdc","chain":{"ratio":2,"levels":2}}"#,
        "-n", "4096", "--ladder", "powers:2:10", "--eps", "0.125"]);
    assert_eq!(json_of(&out)["result"]["pairs"][0]["modulus"], 8);
}
