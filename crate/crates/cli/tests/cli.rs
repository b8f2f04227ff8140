use std::path::Path;
use std::process::{Command, Output};

use hermsym::formats::MatrixFile;
use hermsym::random::{random_hermitian, trial_rng};
use hermsym::ComplexMatrix;
use serde_json::{json, Value};
use tempfile::TempDir;

fn hermsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermsym")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not a report ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_json(dir: &TempDir, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.display().to_string()
}

fn signature(v: &Value, label: &str) -> Vec<i64> {
    v["signatures"][label]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_i64().unwrap())
        .collect()
}

fn classes(v: &Value) -> Vec<String> {
    v["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["classification"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn demo_reports_energies_operators_and_audit() {
    let out = hermsym(&["demo", "1", "3", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["command"], "demo");
    assert_eq!(v["verdict"], "Pass");
    assert_eq!(v["details"]["energies"], json!([6.0, -4.0]));
    let theta = v["details"]["theta"].as_f64().unwrap();
    assert!((theta - (4.0f64 / 3.0).atan()).abs() < 1e-15);
    assert_eq!(signature(&v, "PT"), [1, -1]);
    assert_eq!(signature(&v, "CPT"), [1, 1]);
    // complex numbers are [re, im]
    let overlap = v["details"]["naive_time_reversal"]["overlap"].as_array().unwrap();
    assert_eq!(overlap.len(), 2);
    for (_, r) in v["residuals"].as_object().unwrap() {
        assert!(r["tolerance"].as_f64().is_some());
    }
}

#[test]
fn demo_at_zero_angle_gives_swap_and_bare_conjugation() {
    let v = report(&hermsym(&["demo", "0", "1", "0"]));
    let close = |m: &Value, want: [[f64; 2]; 2]| {
        (0..2).all(|i| (0..2).all(|j| (m[i][j].as_f64().unwrap() - want[i][j]).abs() <= 1e-15))
    };
    assert!(close(&v["details"]["P"]["re"], [[0.0, 1.0], [1.0, 0.0]]));
    assert!(close(&v["details"]["P"]["im"], [[0.0, 0.0], [0.0, 0.0]]));
    assert!(close(&v["details"]["T"]["re"], [[1.0, 0.0], [0.0, 1.0]]));
    assert!(close(&v["details"]["T"]["im"], [[0.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn demo_rejects_undefined_angle() {
    let out = hermsym(&["demo", "1", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_random_fixture_passes_with_alternating_pt_signature() {
    let dir = TempDir::new().unwrap();
    let h = random_hermitian(4, &mut trial_rng(11, 0));
    let path = write_json(&dir, "h.json", &MatrixFile::from(h.matrix()));
    let out = hermsym(&["verify", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["verdict"], "Pass");
    assert_eq!(signature(&v, "PT"), [1, -1, 1, -1]);
    assert_eq!(signature(&v, "CPT"), [1, 1, 1, 1]);

    let desc = report(&hermsym(&["verify", &path, "--ordering", "paper"]));
    assert_eq!(desc["verdict"], "Pass");
    assert_eq!(desc["inputs"]["ordering"], "paper_two_by_two");
}

#[test]
fn verify_identity_passes_with_degeneracy_warning() {
    let dir = TempDir::new().unwrap();
    let path = write_json(&dir, "id.json", &MatrixFile::from(&ComplexMatrix::identity(3)));
    let out = hermsym(&["verify", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["verdict"], "PassWithWarnings");
    assert!(v["warnings"][0].as_str().unwrap().contains("degenerate"));
}

#[test]
fn verify_input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let non_hermitian = json!({"dim": 2, "re": [[1.0, 2.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]});
    let path = write_json(&dir, "bad.json", &non_hermitian);
    let out = hermsym(&["verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Hermitian"));

    let renamed = json!({"n": 1, "re": [[1.0]], "im": [[0.0]]});
    let path = write_json(&dir, "fields.json", &renamed);
    assert_eq!(hermsym(&["verify", &path]).status.code(), Some(2));

    let missing = dir.path().join("nope.json");
    assert!(!Path::new(&missing).exists());
    assert_eq!(hermsym(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tolerance_flag_is_echoed_and_can_fail_a_run() {
    let dir = TempDir::new().unwrap();
    let h = random_hermitian(6, &mut trial_rng(5, 0));
    let path = write_json(&dir, "h.json", &MatrixFile::from(h.matrix()));
    let v = report(&hermsym(&["verify", &path, "--tol", "1e-9"]));
    assert_eq!(v["tolerances"]["verification"], 1e-9);
    assert_eq!(v["verdict"], "Pass");

    // Too strict to meet in double precision: a verification failure, not an input error.
    let out = hermsym(&["verify", &path, "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["verdict"], "Fail");
    let echoed = v["residuals"]["P.involution"]["tolerance"].as_f64().unwrap();
    assert!((echoed / 1e-30 - 1.0).abs() < 1e-12);
    assert_eq!(hermsym(&["verify", &path, "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn analyze_problem_files() {
    let dir = TempDir::new().unwrap();
    let problem = |potential: &str| json!({"potential": potential, "xmin": -8.0, "xmax": 8.0, "npoints": 401, "mass": 1.0, "num_states": 4});
    let harmonic = write_json(&dir, "harmonic.json", &problem("0.5*x^2"));
    let v = report(&hermsym(&["analyze", &harmonic]));
    assert_eq!(classes(&v), ["E", "O", "E", "O"]);
    assert!(
        v["residuals"]["reflection.parity_difference"]["value"]
            .as_f64()
            .unwrap()
            <= 1e-8
    );

    let quartic = write_json(&dir, "quartic.json", &problem("x^4 - 2*x^2 + 0.3*x"));
    let v = report(&hermsym(&["analyze", &quartic]));
    assert_eq!(classes(&v), ["E", "O", "E", "O"]);
    for s in v["states"].as_array().unwrap() {
        assert_eq!(s["agreement"], true);
    }
    assert!(v["residuals"].get("reflection.parity_difference").is_none());
    assert!(v["details"]["parity_reflection_difference"].as_f64().unwrap() >= 0.1);
}

#[test]
fn analyze_flags_and_parse_errors() {
    let v = report(&hermsym(&[
        "analyze",
        "--potential",
        "x^2",
        "--xmin",
        "-5",
        "--xmax",
        "5",
        "--npoints",
        "201",
        "--states",
        "3",
    ]));
    assert_eq!(v["states"].as_array().unwrap().len(), 3);
    assert_eq!(v["inputs"]["npoints"], 201);

    let out = hermsym(&["analyze", "--potential", "x^2 + foo(x)", "--npoints", "51"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 6"));

    assert_eq!(hermsym(&["analyze"]).status.code(), Some(2));
}

#[test]
fn random_suite_is_deterministic() {
    let a = hermsym(&["random", "-n", "2", "--trials", "100", "--seed", "7"]);
    let b = hermsym(&["random", "-n", "2", "--trials", "100", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = report(&a);
    assert_eq!(v["verdict"], "Pass");
    for (label, r) in v["residuals"].as_object().unwrap() {
        if !label.starts_with("signatures.") {
            assert!(r["value"].as_f64().unwrap() <= 1e-10, "{label}");
        }
    }
    let c = hermsym(&["random", "-n", "2", "--trials", "100", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);

    let v = report(&hermsym(&["random", "-n", "16", "--trials", "20"]));
    assert_eq!(v["verdict"], "Pass");
}

#[test]
fn random_suite_usage_errors() {
    assert_eq!(hermsym(&["random", "-n", "4", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(hermsym(&["random", "-n", "1"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_report_and_pretty_renders_a_table() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = hermsym(&["demo", "0", "1", "1", "--output", path.to_str().unwrap(), "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("demo: Pass"));
    assert!(text.contains("PT   (+, -)"));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["command"], "demo");
}
