use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn err_json(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn side_file(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const B2_SIDE: &str = r#"{
  "family": "B", "rank": 2,
  "classes": [
    {"angles": ["0", "0"], "coeff": {"re": 2.0, "im": 0.0}},
    {"angles": ["0", "1/2"], "coeff": {"re": 100.0, "im": 0.0}}
  ],
  "principal_index": 0
}"#;

#[test]
fn dim_example() {
    let out = run(&["dim", "--family", "B", "--rank", "2", "--weight", "1,0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"dim":"5"}"#);
    let v = ok_json(&["dim", "--family", "B", "--rank", "2", "--lattice", "spin", "--weight", "1/2,1/2"]);
    assert_eq!(v["dim"], "4");
}

#[test]
fn ep_example() {
    let v = ok_json(&["ep", "--preset", "gl2n", "--n", "2"]);
    assert_eq!(v["P1"], 2);
    assert_eq!(v["epsilon"], -1);
    assert_eq!(v["q"], 3);
    assert_eq!(v["lef_steinberg"], 2);
    assert_eq!(v["lef_trivial"], 2);
}

#[test]
fn ep_explicit_matrices() {
    let v = ok_json(&["ep", "--theta-s", "0,1;1,0"]);
    assert_eq!(v["P"], serde_json::json!([1, 0, -1]));
    assert_eq!(v["P1"], 0);
    assert_eq!(v["vanishing"], true);
    let v = ok_json(&["cohomology-check", "--preset", "gl2n", "--n", "1"]);
    assert_eq!(v["alternating_sum"], 2);
    err_json(&["ep", "--theta-s", "2"], 2);
}

#[test]
fn norm_of_gamma0() {
    let v = ok_json(&["norm", "--n", "1", "--angles", "0", "--matrix", "1,0;0,-1"]);
    let spectrum = v["norm_spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 3);
    for z in spectrum {
        assert!((z["re"].as_f64().unwrap() - 1.0).abs() < 1e-10);
        assert!(z["im"].as_f64().unwrap().abs() < 1e-10);
    }
    assert_eq!(v["elliptic"], true);
    assert!(v["source"]["matrix"].is_array());
}

#[test]
fn norm_and_ellipticity() {
    let v = ok_json(&["norm", "--n", "1", "--matrix", "2,0;0,0.5"]);
    assert_eq!(v["elliptic"], false);
    let v = ok_json(&["elliptic", "--n", "2", "--angles", "1/3,1/7"]);
    assert_eq!(v["elliptic"], true);
    err_json(&["norm", "--n", "1", "--matrix", "1,1;0,-1"], 3);
    err_json(&["norm", "--n", "1", "--matrix", "1,0;0,0"], 3);
    err_json(&["norm", "--n", "1"], 2);
}

#[test]
fn characters() {
    let v = ok_json(&["char", "--family", "B", "--rank", "2", "--weight", "1,0", "--angles", "0,1/2"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    for method in ["oracle", "regular", "singular"] {
        let v = ok_json(&[
            "char", "--family", "C", "--rank", "2", "--weight", "2,1", "--angles", "1/5,1/7", "--method", method,
        ]);
        let o = ok_json(&["char", "--family", "C", "--rank", "2", "--weight", "2,1", "--angles", "1/5,1/7", "--method", "oracle"]);
        assert!((v["value"]["re"].as_f64().unwrap() - o["value"]["re"].as_f64().unwrap()).abs() < 1e-9);
    }
    err_json(
        &["char", "--family", "B", "--rank", "2", "--weight", "1,0", "--angles", "0,0", "--method", "regular"],
        3,
    );
    let r = ok_json(&["char-report", "--family", "B", "--rank", "2", "--weight", "1,0", "--angles", "0,1/2"]);
    assert!(r["terms"].as_array().unwrap().len() > 1);
    let d = ok_json(&["decay", "--family", "B", "--rank", "2", "--weight", "4,2", "--angles", "0,1/2"]);
    assert!(d["decay_ratio"].as_str().unwrap().contains('/'));
}

#[test]
fn multiplicities_and_ortho() {
    let v = ok_json(&["mults", "--family", "B", "--rank", "2", "--weight", "1,1"]);
    let total: u64 = v["multiplicities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 10);
    let out = run(&["mults", "--family", "A", "--rank", "1", "--weight", "1,-1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("weight,multiplicity"));
    assert_eq!(text.lines().count(), 4);
    let v = ok_json(&["ortho", "--family", "B", "--rank", "2", "--weight", "1,0", "--weight2", "1,0"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    err_json(
        &["ortho", "--family", "B", "--rank", "2", "--weight", "1,0", "--weight2", "1,0", "--grid", "2"],
        2,
    );
}

#[test]
fn twisted_commands() {
    let v = ok_json(&["twisted-denom", "--x", "0.5+1i"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["value"]["im"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    err_json(&["twisted-denom", "--x", "0,1"], 2);
    let v = ok_json(&["twisted-char", "--n", "1", "--p", "1/2", "--angles", "1/5"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["sign"], 1);
    err_json(&["twisted-char", "--n", "1", "--p", "3/2", "--angles", "1/2"], 3);
    let v = ok_json(&["params", "--n", "1", "--p", "5/2"]);
    assert_eq!(v["m_h"], serde_json::json!(["2"]));
    assert_eq!(v["m_pi"], serde_json::json!(["2", "-2"]));
    let v = ok_json(&["params", "--n", "2", "--weight", "0,0"]);
    assert_eq!(v["p"], serde_json::json!(["3/2", "1/2"]));
    err_json(&["params", "--n", "2", "--p", "1/2,3/2"], 2);
}

#[test]
fn side_commands() {
    let path = side_file("b2_side.json", B2_SIDE);
    let p = path.to_str().unwrap();
    let v = ok_json(&["side-eval", "--side", p, "--weight", "1,0"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 110.0).abs() < 1e-9);

    let v = ok_json(&["dominance", "--side", p, "--direction", "2,1", "--kmax", "20"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows {
        assert!(r["deviation"].as_f64().unwrap() <= r["bound"].as_f64().unwrap() * (1.0 + 1e-8));
    }
    assert!(rows[19]["bound"].as_f64().unwrap() < 0.05);
    assert!(v["certified_k"].as_u64().unwrap() >= 1);

    let out = run(&["dominance", "--side", p, "--direction", "2,1", "--kmax", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,ratio_re,ratio_im"));
    assert_eq!(text.lines().count(), 6);

    let v = ok_json(&["positivity", "--side", p, "--height-cap", "5"]);
    assert!(v["verdict"].is_string());
    assert_eq!(v["height_cap"], 5);

    err_json(&["dominance", "--side", p, "--direction", "1,1", "--kmax", "5"], 2);
    err_json(&["side-eval", "--side", "/nonexistent/side.json", "--weight", "0,0"], 2);
    let bad = side_file("bad_side.json", r#"{"family":"B","rank":2,"classes":[],"principal_index":0}"#);
    err_json(&["side-eval", "--side", bad.to_str().unwrap(), "--weight", "0,0"], 2);
}

#[test]
fn errors_are_machine_readable() {
    let e = err_json(&["frobnicate"], 2);
    assert_eq!(e["error"]["kind"], "validation");
    let e = err_json(&["dim", "--family", "E", "--rank", "6", "--weight", "0"], 2);
    assert!(e["error"]["message"].is_string());
    let e = err_json(&["dim", "--family", "B", "--rank", "2", "--weight", "1,x"], 2);
    assert_eq!(e["error"]["kind"], "validation");
    err_json(&["dim", "--family", "B", "--rank", "2", "--weight", "1,0", "--format", "csv"], 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["char-report", "--family", "B", "--rank", "3", "--weight", "2,1,0", "--angles", "0,1/2,1/3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again = serde_json::to_vec(&v).unwrap();
    let v2: Value = serde_json::from_slice(&again).unwrap();
    assert_eq!(v, v2);
}

#[test]
fn output_flag_writes_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dim_out.json");
    let out = run(&["dim", "--family", "C", "--rank", "2", "--weight", "1,0", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dim"], "4");
}
