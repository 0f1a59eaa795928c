use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divcurve")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn curve(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/curves")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn torus_line_is_finite() {
    let v = json(&["torus", "--curve", &curve("line.curve")]);
    assert_eq!(v["status"], "finite");
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
}

#[test]
fn torus_mobius_is_infinite() {
    let v = json(&["torus", "--curve", &curve("mobius.curve"), "--tol", "1e-6"]);
    assert_eq!(v["status"], "infinite");
    assert!(v["witness"].is_object());
}

#[test]
fn heights_with_places() {
    let v = json(&["heights", "--minpoly", "t^2 - 2", "--root-index", "1", "--places"]);
    let h = v["h"].as_f64().unwrap();
    assert!((h - 2f64.ln() / 2.0).abs() < 1e-12);
    assert!(v["places"].is_object());
}

#[test]
fn certify_archimedean_and_padic() {
    let v = json(&["certify", "--poly", "X + Y - 1", "--x1", "100000000", "--x2", "-99999999"]);
    assert_eq!(v["j"], serde_json::json!([1, -1]));
    assert_eq!(v["case"], "inequality");
    let p = json(&["certify", "--poly", "X + Y - 1", "--x1", "1/7", "--x2", "6/7", "--padic", "7"]);
    assert_eq!(p["j"], serde_json::json!([1, -1]));
}

#[test]
fn divisible_and_coset() {
    let v = json(&["divisible", "--curve", &curve("line.curve"), "--n", "7"]);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["is_torsion"] == true && r["degree"] == 2));
    let c = json(&["coset", "--curve", &curve("torsion_coset.curve")]);
    assert_eq!(c["status"], "torsion_coset");
    assert_eq!(c["relation"], serde_json::json!([2, 0, -1]));
}

#[test]
fn survey_writes_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = run(&[
            "survey", "--curve", &curve("line.curve"), "--n-min", "2", "--n-max", "7", "--primes", "2,3", "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["config"]["primes"], serde_json::json!([2, 3]));
    assert_eq!(v["per_n"].as_array().unwrap().len(), 6);
}

#[test]
fn survey_refuses_cosets() {
    let o = run(&["survey", "--curve", &curve("torsion_coset.curve"), "--n-min", "2", "--n-max", "3"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[2, 0, -1]"), "{}", err);
}

#[test]
fn parse_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.curve");
    std::fs::write(&f, "N = 2\ncoord1 = t\ncoord2 = 1 - * t\n").unwrap();
    let o = run(&["coset", "--curve", f.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
