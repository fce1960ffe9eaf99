use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use zeta_at_infinity::minkowski::DimensionEstimate;
use zeta_at_infinity::tube::TubeScan;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn zinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zinf")).args(args).output().expect("zinf runs")
}

fn ok(args: &[&str]) -> String {
    let out = zinf(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn region(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn tube_scan_has_64_rows() {
    let power = region("power2.json");
    let text = ok(&["tube-scan", "--region", &power, "--norm", "sup", "--t0", "1", "--ratio", "1.1892", "--count", "64"]);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["t", "volume", "stderr", "norm"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 64);
    // V(t) = 1/t for the α = 2 subgraph
    for row in &rows {
        let t: f64 = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        assert!((v * t - 1.0).abs() < 1e-12);
    }
}

#[test]
fn exp_scan_is_exponential() {
    let exp = region("exp.json");
    let text = ok(&["tube-scan", "--region", &exp, "--t0", "1", "--ratio", "1.5", "--count", "12"]);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    for row in rd.records().map(Result::unwrap) {
        let t: f64 = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        assert!((v / (-t).exp() - 1.0).abs() < 1e-12, "t = {t}: {v}");
    }
}

#[test]
fn monte_carlo_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cantor = region("cantor_13_2.json");
    let files: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("scan{i}.csv"))).collect();
    for f in &files {
        let path = f.to_string_lossy();
        ok(&[
            "tube-scan", "--region", &cantor, "--norm", "euclidean", "--method", "mc", "--samples", "5000",
            "--t0", "3", "--count", "6", "--seed", "17", "--out", &path,
        ]);
    }
    let a = std::fs::read(&files[0]).unwrap();
    let b = std::fs::read(&files[1]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    let other = ok(&[
        "tube-scan", "--region", &cantor, "--norm", "euclidean", "--method", "mc", "--samples", "5000",
        "--t0", "3", "--count", "6", "--seed", "18",
    ]);
    assert_ne!(other.as_bytes(), &a[..]);
}

#[test]
fn json_scan_round_trips() {
    let power = region("power3.json");
    let text = ok(&["tube-scan", "--region", &power, "--count", "8", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    let scan: TubeScan = serde_json::from_value(v).unwrap();
    assert_eq!(scan.samples.len(), 8);
}

#[test]
fn dim_of_interval_chain() {
    let text = ok(&["dim", "--region", &region("ic23.json")]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    let est: DimensionEstimate = serde_json::from_value(v).unwrap();
    let d = est.d_hat.finite().unwrap();
    assert!((d + 2.0).abs() < 0.05, "{d}");
}

#[test]
fn poles_of_cantor_drum() {
    let text = ok(&["poles", "--region", &region("cantor_13_2.json"), "--window", "-2.5", "-2.2", "-12", "12"]);
    let rows: Vec<Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 5);
    let d = 2f64.ln() / 3f64.ln() - 3.0;
    for row in &rows {
        assert_eq!(row["schema"], 1);
        assert_eq!(row["order"], 1);
        assert!((row["re"].as_f64().unwrap() - d).abs() < 1e-8);
    }
}

#[test]
fn measure_of_cantor_drum() {
    let text = ok(&["measure", "--region", &region("cantor_13_2.json")]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert!((v["measure"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn residue_and_zeta_outputs() {
    let power = region("power3.json");
    let text = ok(&["residue", "--region", &power, "--at", "-4"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!((v["res_re"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let text = ok(&["zeta", "--region", &power, "--mode", "closed-form", "--s", "-3", "--s", "-2.5,1"]);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["re_s", "im_s", "re_zeta", "im_zeta", "abs_err"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    // sup closed form T^{-z}/z at T = 1, z = s + 4
    let z: f64 = rows[0][2].parse().unwrap();
    assert!((z - 1.0).abs() < 1e-12);

    let text = ok(&["zeta", "--region", &power, "--grid", "-3,-2,0,1,2,2"]);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn invert_check_passes() {
    let text = ok(&[
        "invert-check", "--region", &region("power2.json"), "--norm", "euclidean", "--s", "-2.5", "--samples", "200000",
        "--seed", "3",
    ]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    // configuration errors
    assert_eq!(zinf(&["dim"]).status.code(), Some(2));
    assert_eq!(zinf(&["dim", "--region", "/nonexistent/region.json"]).status.code(), Some(2));
    assert_eq!(zinf(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"family":"power_subgraph","params":{"alpha":0.5}}"#).unwrap();
    assert_eq!(zinf(&["measure", "--region", &bad.to_string_lossy()]).status.code(), Some(2));
    let power3 = region("power3.json");
    assert_eq!(zinf(&["residue", "--region", &power3, "--norm", "euclidean", "--at", "-4"]).status.code(), Some(2));

    // numeric and domain errors
    let stacked = region("stacked.json");
    assert_eq!(zinf(&["poles", "--region", &stacked, "--window", "-2.5", "-2", "-1", "1"]).status.code(), Some(3));
    let power = region("power2.json");
    assert_eq!(zinf(&["zeta", "--region", &power, "--s", "-3.5"]).status.code(), Some(3));

    let out = zinf(&["invert-check", "--region", &power, "--norm", "euclidean", "--s", "-2.9", "--samples", "5000"]);
    assert_eq!(out.status.code(), Some(3));
    let out = zinf(&["invert-check", "--region", &power, "--s", "-2.5", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_is_not_an_error() {
    let out = zinf(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("tube-scan"));
}
