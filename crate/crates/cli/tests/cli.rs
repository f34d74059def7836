use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fqeuclid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqeuclid")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().next().unwrap()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fqeuclid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn spectrum_f3_plane() {
    let out = fqeuclid(&["spectrum", "--p", "3", "--d", "2", "--dense-check"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert_eq!(r["ramanujan_ok"], true);
        assert_eq!(r["valency"], 4);
        assert!(r["dense_max_diff"].as_f64().unwrap() < 1e-9);
        let ev: Vec<f64> = r["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!((ev[0] - 4.0).abs() < 1e-9);
    }
    assert_eq!(v["config"]["p"], 3);
}

#[test]
fn edgeless_pair_count() {
    let pattern = scratch("edgeless.json", r#"{"k": 2, "edges": []}"#);
    let out = fqeuclid(&[
        "count",
        "--p",
        "5",
        "--pattern",
        pattern.to_str().unwrap(),
        "--subset-size",
        "11",
        "--seed",
        "4",
    ]);
    assert!(out.status.success());
    let r = &stdout_json(&out)["results"];
    assert_eq!(r["ordered_count"], 110);
    assert_eq!(r["aut"], 2);
    assert_eq!(r["unordered_count"], 55);
    assert_eq!(r["subset_size"], 11);
}

#[test]
fn report_config_replays_through_run() {
    let first = fqeuclid(&["mixing", "--p", "5", "--samples", "50", "--seed", "9", "--color", "2"]);
    assert!(first.status.success());
    let report = stdout_json(&first);
    let config = scratch("config.json", &report["config"].to_string());
    let again = fqeuclid(&["run", "--config", config.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn csv_grid_output() {
    let out = fqeuclid(&["certify", "--q-grid", "5,7", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,d,color,valency,max_nontrivial,d_min,lambda_max,rc_ok");
    assert_eq!(lines.count(), 4 + 6);
}

#[test]
fn csv_refused_for_count() {
    let pattern = scratch("edge.json", r#"{"k": 2, "edges": [[0, 1, 1]]}"#);
    let out = fqeuclid(&["count", "--p", "3", "--pattern", pattern.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "config");
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["sphere", "--p", "4"],
        vec!["sphere", "--p", "2"],
        vec!["spectrum", "--p", "5", "--color", "0"],
        vec!["spectrum", "--p", "5", "--color", "[1, 0]"],
        vec!["sphere", "--q-grid", "5,6"],
        vec!["sphere", "--p", "3", "--r", "2", "--modulus", "[2, 0, 1]"],
        vec!["sphere", "--form", "{\"dim\": 2, \"gram\": [[1, 0], [0, 0]]}"],
    ] {
        let out = fqeuclid(&args);
        assert_eq!(out.status.code(), Some(2), "{:?}", args);
        let err = stderr_json(&out);
        assert_eq!(err["error"]["exit_code"], 2, "{:?}", args);
        assert!(err["error"]["message"].as_str().unwrap().len() > 1);
    }
}

#[test]
fn bad_files_exit_2() {
    let garbage = scratch("garbage.json", "{not json");
    let out = fqeuclid(&["count", "--p", "3", "--pattern", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "file_format");

    let short = scratch("short.json", r#"{"table": [0, 1]}"#);
    let out = fqeuclid(&["fdist", "--p", "3", "--table", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shrunken_lambda_reports_violations_without_failing() {
    let out = fqeuclid(&["mixing", "--p", "5", "--samples", "300", "--lambda-scale", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let control = fqeuclid(&["mixing", "--p", "5", "--samples", "300", "--lambda-scale", "0.1", "--seed", "1"]);
    assert_eq!(control.status.code(), Some(0));
    assert!(stdout_json(&control)["results"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["violations"].as_u64().unwrap() > 0));
}

#[test]
fn fdist_builtin_and_table_agree() {
    let out = fqeuclid(&["fdist", "--p", "5", "--expr", "quadratic", "--j", "1"]);
    assert!(out.status.success());
    let from_expr = stdout_json(&out)["results"].clone();
    assert_eq!(from_expr["symmetric"], true);
    assert_eq!(from_expr["connection_size"], 4);

    let table: Vec<u32> = (0..25u32).map(|v| ((v % 5).pow(2) + (v / 5).pow(2)) % 5).collect();
    let path = scratch("table.json", &serde_json::json!({ "table": table }).to_string());
    let out = fqeuclid(&["fdist", "--p", "5", "--table", path.to_str().unwrap(), "--j", "[1]"]);
    assert!(out.status.success());
    let from_table = &stdout_json(&out)["results"];
    assert_eq!(from_table["eigenvalues"], from_expr["eigenvalues"]);
}

#[test]
fn sphere_points_listed() {
    let out = fqeuclid(&["sphere", "--p", "3", "--points"]);
    let v = stdout_json(&out);
    let spheres = v["results"][0]["spheres"].as_array().unwrap();
    assert_eq!(spheres[1]["t"], serde_json::json!([1]));
    assert_eq!(spheres[1]["points"].as_array().unwrap().len(), 4);
    assert!((spheres[0]["normalized_double"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn timing_is_opt_in() {
    let pattern = scratch("edge2.json", r#"{"k": 2, "edges": [[0, 1, 1]]}"#);
    let p = pattern.to_str().unwrap();
    let plain = stdout_json(&fqeuclid(&["count", "--p", "5", "--pattern", p]));
    assert!(plain["results"].get("timing_ms").is_none());
    let timed = stdout_json(&fqeuclid(&["count", "--p", "5", "--pattern", p, "--timing"]));
    assert!(timed["results"]["timing_ms"].as_f64().is_some());
}
