//! End-to-end tests of the `hsz` binary: ingestion forms, output formats,
//! verdict exit codes, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hsz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("hsz-cli-{}-{name}", std::process::id()));
    path
}

#[test]
fn gamma_from_constant_weight_is_zero() {
    let out = hsz(&["gamma", "--weight", "constant", "--order", "6"]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    for pair in value["gamma"].as_array().expect("array") {
        let re = pair[0].as_f64().unwrap();
        let im = pair[1].as_f64().unwrap();
        assert!(re.hypot(im) <= 1e-12);
    }
    assert_eq!(value["terminal_unimodular"], serde_json::json!(false));
}

#[test]
fn gamma_from_moment_spike_cross_checks() {
    let out = hsz(&["gamma", "--moments", "[1, 0.3]"]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    let g0 = &value["gamma"][0];
    assert!((g0[0].as_f64().unwrap() - 0.3).abs() <= 1e-12);
    let discrepancy = value["provenance"]["cross_check_discrepancy"]
        .as_f64()
        .expect("cross-check runs for moment sources");
    assert!(discrepancy <= 1e-10);
}

#[test]
fn gamma_detects_terminal_blaschke() {
    let out = hsz(&["gamma", "--theta", "[0, 1]"]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["terminal_unimodular"], serde_json::json!(true));
    assert_eq!(value["gamma"].as_array().unwrap().len(), 2);
    assert!((value["gamma"][1][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn exactly_one_source_is_enforced() {
    let out = hsz(&["gamma", "--weight", "constant", "--moments", "[1]"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hsz(&["gamma"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn theta_of_constant_parameter() {
    let out = hsz(&[
        "theta", "--gamma", "[0.3]", "--order", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,re,im"));
    assert_eq!(lines.next(), Some("0,0.3,0"));
    assert_eq!(lines.next(), Some("1,0,0"));
}

#[test]
fn lmatrix_factor_hand_constants_csv() {
    let out = hsz(&[
        "lmatrix",
        "--gamma",
        "[0.0, 0.6, 0.8]",
        "--size",
        "2",
        "--matrix",
        "factor",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    let first: Vec<f64> = rows[0].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((first[0] - 0.8).abs() <= 1e-14);
    let second: Vec<f64> = rows[1].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((second[0] + 0.48).abs() <= 1e-14);
    assert!((second[2] - 0.6).abs() <= 1e-14);
}

#[test]
fn lmatrix_routes_agree() {
    let gamma = "[0.2, -0.3, 0.4, 0.1]";
    let a = hsz(&[
        "lmatrix", "--gamma", gamma, "--size", "5", "--route", "product",
    ]);
    let b = hsz(&[
        "lmatrix", "--gamma", gamma, "--size", "5", "--route", "direct",
    ]);
    assert!(a.status.success() && b.status.success());
    let (a, b) = (stdout_json(&a), stdout_json(&b));
    for r in 0..5 {
        for c in 0..5 {
            let av = a["entries"][r][c][0].as_f64().unwrap();
            let bv = b["entries"][r][c][0].as_f64().unwrap();
            assert!((av - bv).abs() <= 1e-12);
        }
    }
}

#[test]
fn verify_small_campaign_passes() {
    let out = hsz(&["verify", "--trials", "5", "--size", "6", "--support", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("pass"));
}

#[test]
fn gamma_output_feeds_back_into_diagnose() {
    // the gamma JSON emitted with provenance must still parse as a
    // parameter file for every other subcommand
    let path = temp_path("roundtrip-gamma.json");
    let out = hsz(&[
        "gamma",
        "--family",
        "geometric:0.4,8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = hsz(&[
        "diagnose",
        "--gamma-file",
        path.to_str().unwrap(),
        "--sizes",
        "4,8,16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value = stdout_json(&out);
    assert_eq!(value["verdict"], serde_json::json!("certified_hs"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn diagnose_constant_weight_certifies() {
    let out = hsz(&[
        "diagnose", "--weight", "constant", "--sizes", "4,8,16", "--order", "16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value = stdout_json(&out);
    assert_eq!(value["verdict"], serde_json::json!("certified_hs"));
    assert!((value["strong_szego"]["c_bound"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn diagnose_boundary_zero_weight_rejects() {
    let dir = temp_path("zero-squared");
    let out = hsz(&[
        "diagnose",
        "--weight",
        "zero-squared",
        "--sizes",
        "4,8,16,32,64",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let value = stdout_json(&out);
    assert_eq!(value["verdict"], serde_json::json!("likely_not_hs"));
    for name in [
        "report.json",
        "sigma_sweep.csv",
        "riesz_sweep.csv",
        "conjugation_sweep.csv",
    ] {
        let path = dir.join(name);
        assert!(path.exists(), "missing {name}");
    }
    let csv = std::fs::read_to_string(dir.join("sigma_sweep.csv")).unwrap();
    assert!(csv.starts_with("n,value\n4,"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn diagnose_terminal_gamma_file_violates_necessity() {
    let path = temp_path("terminal.json");
    std::fs::write(
        &path,
        r#"{"gamma": [[0.2, 0.0], [0.0, 1.0]], "terminal_unimodular": true}"#,
    )
    .unwrap();
    let out = hsz(&["diagnose", "--gamma-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let value = stdout_json(&out);
    assert_eq!(
        value["verdict"],
        serde_json::json!("not_hs_necessary_violation")
    );
    std::fs::remove_file(&path).ok();
}

#[test]
fn diagnose_output_is_deterministic() {
    let args = [
        "diagnose",
        "--family",
        "geometric:0.5,12",
        "--sizes",
        "4,8,16",
        "--order",
        "16",
        "--seed",
        "9",
    ];
    let a = hsz(&args);
    let b = hsz(&args);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout, "byte-identical reports");
}

#[test]
fn diagnose_reads_weight_csv() {
    let path = temp_path("weight.csv");
    let grid = 512;
    let samples: Vec<f64> = (0..grid)
        .map(|l| {
            let angle = std::f64::consts::TAU * l as f64 / grid as f64;
            1.0 + 0.6 * angle.cos()
        })
        .collect();
    let mut text = String::from("angle,value\n");
    for (l, v) in samples.iter().enumerate() {
        text.push_str(&format!("{},{}\n", l as f64 / grid as f64, v));
    }
    std::fs::write(&path, text).unwrap();
    let out = hsz(&[
        "diagnose",
        "--weight-csv",
        path.to_str().unwrap(),
        "--sizes",
        "4,8,16",
        "--order",
        "16",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value = stdout_json(&out);
    assert_eq!(value["verdict"], serde_json::json!("certified_hs"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn riesz_oracle_reports_sweeps() {
    let out = hsz(&[
        "riesz",
        "--weight",
        "cosine:0.6",
        "--sizes",
        "2,4,8",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,riesz,conjugation"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "2");
    let value: f64 = first[1].parse().unwrap();
    assert!((1.0..2.0).contains(&value));
}

#[test]
fn riesz_rejects_gamma_sources() {
    let out = hsz(&["riesz", "--gamma", "[0.3]"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_input_exits_with_error_code() {
    let out = hsz(&["gamma", "--moments", "[1, 1.7]"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "indefinite moments are rejected"
    );
    let out = hsz(&["gamma", "--theta", "not json"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hsz(&["diagnose", "--weight", "unknown-family"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hsz(&["diagnose", "--weight", "constant", "--sizes", "16,4"]);
    assert_eq!(out.status.code(), Some(3), "sweep sizes must ascend");
}
