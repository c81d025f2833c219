use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gml(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gml"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn verify_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("verify");
    let o = gml(&["verify", "--N", "7", "--q", "0.5", "--s", "1"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["results"]["passed"], true);
    assert!(out.join("verify.csv").exists());
}

#[test]
fn seq_invert_default_residual() {
    let tmp = tempfile::tempdir().unwrap();
    let o = gml(&["seq-invert", "--s", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(tmp.path());
    assert!(r["results"]["residual_l1"].as_f64().unwrap() < 1e-8);
    assert!(r["results"]["neumann"].is_object());
}

#[test]
fn seq_invert_vanishing_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, r#"{"options": {"sequence": {"dim": 1, "entries": [[[0], 1.0, 0.0], [[1], -1.0, 0.0]]}}}"#).unwrap();
    let out = tmp.path().join("out");
    let o = gml(&["seq-invert", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "vanishing-fourier-series");
}

#[test]
fn bad_chi_exits_2_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = gml(&["envelope", "--N", "7", "--chi", "1,1,1,1"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn envelope_csv_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let o = gml(&["envelope", "--N", "5", "--chi", "0,1,-1,0"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(tmp.path().join("envelope.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["mu_k", "mu_l", "value"]);
    assert_eq!(rdr.records().count(), 25);
}

#[test]
fn runs_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["compose", "--N", "7", "--chi", "2,1,1,1", "--symbol", "random", "--seed", "5"];
    assert_eq!(gml(&args, &a).status.code(), Some(0));
    assert_eq!(gml(&args, &b).status.code(), Some(0));
    assert_eq!(fs::read(a.join("envelope.csv")).unwrap(), fs::read(b.join("envelope.csv")).unwrap());
}

#[test]
fn zero_symbol_not_invertible() {
    let tmp = tempfile::tempdir().unwrap();
    let sym = tmp.path().join("zero.json");
    let rows = vec![vec![[0.0f64, 0.0]; 5]; 5];
    fs::write(&sym, serde_json::to_string(&rows).unwrap()).unwrap();
    let o = gml(&["invert", "--N", "5", "--symbol", sym.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |threads: &str, dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_gml"))
            .env("GML_THREADS", threads)
            .args(["gabor-matrix", "--N", "5", "--out"])
            .arg(dir)
            .output()
            .unwrap()
    };
    let (a, b) = (tmp.path().join("one"), tmp.path().join("four"));
    assert_eq!(run("1", &a).status.code(), Some(0));
    assert_eq!(run("4", &b).status.code(), Some(0));
    assert_eq!(fs::read(a.join("gabor_matrix.csv")).unwrap(), fs::read(b.join("gabor_matrix.csv")).unwrap());
    assert_eq!(run("zero", &tmp.path().join("bad")).status.code(), Some(2));
}

#[test]
fn amalgam_and_factorize_run() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("amalgam");
    assert_eq!(gml(&["amalgam", "--q", "1", "--s", "0"], &a).status.code(), Some(0));
    let r = report(&a);
    assert_eq!(r["results"]["gl_invariance"].as_array().unwrap().len(), 5);
    let f = tmp.path().join("factorize");
    assert_eq!(gml(&["factorize", "--N", "11", "--chi", "3,2,4,3"], &f).status.code(), Some(0));
    let r = report(&f);
    assert!(r["results"]["factorization"]["residual_left"].as_f64().unwrap() < 1e-9);
}
