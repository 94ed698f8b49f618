use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2alpha")).args(args).output().expect("spawn l2alpha")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data rows of CSV/TSV output, skipping `#` header lines and the column header.
fn rows(text: &str, sep: char) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(sep).map(str::to_string).collect()).collect()
}

const ZZ: &str = r#"{"rows":2,"cols":2,"entries":[
  [[[1,1,1,0,1]], [[0,1,1,0,1]]],
  [[[0,1,1,0,1]], [[1,1,1,0,1]]]]}"#;
const Z_MINUS_TWO: &str = r#"{"rows":1,"cols":1,"entries":[[[[0,-2,1,0,1],[1,1,1,0,1]]]]}"#;
const Z: &str = r#"{"rows":1,"cols":1,"entries":[[[[1,1,1,0,1]]]]}"#;
const IDENTITY: &str = r#"{"rows":1,"cols":1,"entries":[[[[0,1,1,0,1]]]]}"#;

#[test]
fn ns_of_the_counterexample() {
    let v = json(&["ns", "counterexample"]);
    assert_eq!(v["ns"], serde_json::json!({"type": "finite", "num": 1, "den": 1}));
    assert_eq!(v["unit_circle_roots"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["tol_rank"], 1e-8);
}

#[test]
fn ns_of_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["ns", &write(dir.path(), "zz.json", ZZ)]);
    assert_eq!(v["ns_text"]["display"], "1");
    assert_eq!(v["invariant_factors"], serde_json::json!(["1", "z^2 - 1"]));
    let v = json(&["ns", &write(dir.path(), "z2.json", Z_MINUS_TWO)]);
    assert_eq!(v["ns"]["type"], "infinity_plus");
    assert_eq!(v["ns_text"]["display"], "∞⁺");
}

#[test]
fn ns_over_a_group() {
    let v = json(&["ns", "dinf-xt"]);
    assert_eq!(v["ns_text"]["display"], "∞⁺");
    let dir = tempfile::tempdir().unwrap();
    let xt = write(dir.path(), "xt.json", r#"{"rows":1,"cols":1,"entries":[[[[1,1,1,1,0,1],[0,2,1,1,0,1]]]]}"#);
    let v = json(&["ns", &xt, "--group", "ZxZ2"]);
    assert_eq!(v["ns_text"]["display"], "1");
}

#[test]
fn alpha_rows_follow_the_closed_form() {
    let text = stdout(&["alpha", "z-1", "--levels", "3..10"]);
    let rs = rows(&text, ',');
    assert_eq!(rs.len(), 8);
    for r in rs {
        let i: f64 = r[0].parse().unwrap();
        if i == 6.0 {
            assert_eq!(r[6], "alpha_undefined");
            continue;
        }
        let exact = (2.0 / i).ln() / (2.0 * (std::f64::consts::PI / i).sin()).ln();
        let got: f64 = r[5].parse().unwrap();
        assert!(((got - exact) / exact).abs() < 1e-9, "level {i}: {got} vs {exact}");
    }
}

#[test]
fn alpha_of_a_unit_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let rs = rows(&stdout(&["alpha", &write(dir.path(), "z.json", Z), "--level-list", "2,5,9"]), ',');
    assert_eq!(rs.len(), 3);
    assert!(rs.iter().all(|r| r[5].is_empty() && r[6].contains("alpha_undefined")));
}

#[test]
fn alpha_of_zz_at_level_two() {
    let dir = tempfile::tempdir().unwrap();
    let rs = rows(&stdout(&["alpha", &write(dir.path(), "zz.json", ZZ), "--level-list", "2"]), ',');
    // Blocks [[1,1],[1,1]] and [[-1,1],[1,-1]] each have singular values {2, 0}.
    assert_eq!(&rs[0][..5], ["2", "2", "2", "2", "2"]);
    assert_eq!(rs[0][5].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn sdf_steps() {
    let rs = rows(&stdout(&["sdf", "z-1", "--level", "2"]), '\t');
    assert_eq!(rs, [["0", "0.5"], ["2", "1"]]);
    let dir = tempfile::tempdir().unwrap();
    let rs = rows(&stdout(&["sdf", &write(dir.path(), "id.json", IDENTITY), "--level", "3"]), '\t');
    assert_eq!(rs, [["0", "0"], ["1", "1"]]);
    let rs = rows(&stdout(&["sdf", "z-1", "--level", "3"]), '\t');
    assert_eq!(rs[0][1].parse::<f64>().unwrap(), 1.0 / 3.0);
    assert!((rs[1][0].parse::<f64>().unwrap() - 3f64.sqrt()).abs() < 1e-14);
}

#[test]
fn net_of_z_minus_one_is_near_one() {
    let v = json(&["net", "z-1", "--i-max", "5000", "--n-max", "1000"]);
    let e = &v["net_estimate"];
    for key in ["liminf_est", "limsup_est"] {
        let x = e[key].as_f64().unwrap();
        assert!((x - 1.0).abs() < 0.3, "{key} = {x}");
    }
}

#[test]
fn net_refuses_infinite_ns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["net", &write(dir.path(), "z2.json", Z_MINUS_TWO)]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("∞⁺") && err.contains("hypothesis"), "{err}");
}

#[test]
fn counterexample_with_baker_floor() {
    let text = stdout(&["counterexample", "--n-max", "1000", "--i-max", "3000", "--baker-D", "10", "--format", "tsv"]);
    assert!(text.lines().any(|l| l == "# liminf_floor: 0.09090909090909091"), "{text}");
    assert!(text.lines().any(|l| l == "# circle_runner_pass: true"));
    let v = json(&["counterexample", "--n-max", "1000", "--i-max", "3000", "--baker-D", "10"]);
    assert!((v["baker"]["liminf_floor"].as_f64().unwrap() - 1.0 / 11.0).abs() < 1e-15);
    assert_eq!(v["baker"]["window_above_floor"], true);
}

#[test]
fn counterexample_default_run() {
    let small = json(&["counterexample", "--n-max", "1000", "--i-max", "3000"]);
    let full = json(&["counterexample"]);
    assert_eq!(full["ns_text"]["display"], "1");
    let min = |v: &Value| v["min_window_alpha"].as_f64();
    let (s, f) = (min(&small).unwrap(), min(&full).unwrap());
    assert!(f <= 0.65, "{f}");
    assert!(s > f, "{s} vs {f}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["alpha", "counterexample", "--levels", "100..160"],
        vec!["counterexample", "--n-max", "500", "--i-max", "2000", "--baker-D", "3"],
        vec!["net", "z-1", "--i-max", "2000", "--format", "csv"],
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        for p in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--out", p.to_str().unwrap()]);
            assert!(run(&full).status.success());
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    let dup = write(dir.path(), "dup.json", r#"{"rows":1,"cols":1,"entries":[[[[0,1,1,0,1],[0,2,1,0,1]]]]}"#);
    for args in [
        vec!["ns", "/nonexistent/matrix.json"],
        vec!["ns", bad.as_str()],
        vec!["ns", dup.as_str()],
        vec!["alpha", "z-1", "--levels", "9..3"],
        vec!["alpha", "z-1", "--levels", "3..9", "--format", "tsv"],
        vec!["counterexample", "--baker-D", "0.5"],
        vec!["ns", "z-1", "--group", "Q8"],
        vec!["alpha", "z-1", "--levels", "3..9", "--precision-bits", "8"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}
