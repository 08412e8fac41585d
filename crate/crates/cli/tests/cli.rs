use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropcong"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const ONE_PLUS_X_OVER_X: &str = r#"{"num": {"nvars": 1, "terms": [{"coeff": "0", "exp": [0]}, {"coeff": "0", "exp": [1]}]},
 "den": {"nvars": 1, "terms": [{"coeff": "0", "exp": [1]}]}}"#;
const X: &str = r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [1]}]}"#;
const X_PLUS_X: &str = r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [1]}, {"coeff": "0", "exp": [1]}]}"#;
const ZERO_OR_X: &str = r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [0]}, {"coeff": "0", "exp": [1]}]}"#;

#[test]
fn eval_rational_at_negative_point() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", ONE_PLUS_X_OVER_X);
    let o = run(&["eval", &f, "-3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\n");
    let o = run(&["eval", &f, "[\"1/2\"]"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn canon_drops_dominated_term() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "p.json",
        r#"{"nvars": 1, "terms": [{"coeff": "0", "exp": [0]}, {"coeff": "-3", "exp": [1]}, {"coeff": "0", "exp": [2]}]}"#,
    );
    let o = run(&["canon", &p]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(terms.iter().all(|t| t["exp"] != serde_json::json!([1])));
}

#[test]
fn eq_reports_truth_and_witness() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", X);
    let xx = write(&dir, "xx.json", X_PLUS_X);
    let zx = write(&dir, "zx.json", ZERO_OR_X);
    assert_eq!(stdout(&run(&["eq", &xx, &x])), "true\n");
    let out = stdout(&run(&["eq", &zx, &x]));
    assert!(out.starts_with("false\nwitness: ["), "{out}");
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(run(&["canon", &bad]).status.code(), Some(2));
    let f = write(&dir, "f.json", ONE_PLUS_X_OVER_X);
    assert_eq!(run(&["eval", &f, "1/0"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["canon", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dimension_mismatch_exits_3() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", ONE_PLUS_X_OVER_X);
    let o = run(&["eval", &f, "1,2"]);
    assert_eq!(o.status.code(), Some(3));
    let y = write(&dir, "y.json", r#"{"nvars": 2, "terms": [{"coeff": "0", "exp": [0, 1]}]}"#);
    let x = write(&dir, "x.json", X);
    assert_eq!(run(&["eq", &x, &y]).status.code(), Some(3));
}

#[test]
fn precondition_exits_4() {
    let c = data("complexes/04_interval.json");
    let o = run(&["chart", c.to_str().unwrap(), "--ray", "0"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["chart", c.to_str().unwrap(), "--segment", "7"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn curve_check_flags_parallel_rays() {
    let o = run(&["curve-check", data("parallel_rays.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["duplicate_rays"].as_array().unwrap().len(), 1);
    let o = run(&["curve-check", data("complexes/02_trivalent_star.json").to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn chart_interval_tent() {
    let c = data("complexes/04_interval.json");
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("chart.json");
    let o = run(&["chart", c.to_str().unwrap(), "--segment", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let chart = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&chart).unwrap();
    assert_eq!(v["construction"], "segment-tent");
    let f = write(&dir, "f.json", &chart);
    for (x, want) in [("1", "0\n"), ("0", "-1\n"), ("2", "-1\n"), ("5", "-1\n")] {
        assert_eq!(stdout(&run(&["eval", &f, x])), want, "at {x}");
    }
}

#[test]
fn chart_requires_exactly_one_target() {
    let c = data("complexes/02_trivalent_star.json");
    let c = c.to_str().unwrap();
    assert_eq!(run(&["chart", c]).status.code(), Some(2));
    assert_eq!(run(&["chart", c, "--ray", "0", "--segment", "0"]).status.code(), Some(2));
    assert_eq!(run(&["chart", c, "--ray", "0", "--eps", "1/2"]).status.code(), Some(2));
    assert!(run(&["chart", c, "--vertex", "0", "--eps", "1/2"]).status.success());
}

#[test]
fn generate_then_verify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();
    let u = data("unions/two_boxes.json");
    assert!(run(&["generate", u.to_str().unwrap(), "--out", cert]).status.success());
    let a = run(&["verify", cert, "--seed", "3", "--samples", "200"]);
    let b = run(&["verify", cert, "--seed", "3", "--samples", "200"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(run(&["verify", cert, "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn verify_fails_on_wrong_certificate() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let u = data("unions/origin.json");
    assert!(run(&["generate", u.to_str().unwrap(), "--out", cert.to_str().unwrap()]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["variety"] = serde_json::from_str(&std::fs::read_to_string(data("unions/halfplane.json")).unwrap()).unwrap();
    let tampered = write(&dir, "tampered.json", &v.to_string());
    let o = run(&["verify", &tampered, "--samples", "100"]);
    assert_eq!(o.status.code(), Some(1));
}
