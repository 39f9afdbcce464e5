use std::path::PathBuf;
use std::process::{Command, Output};

use nijenhuis_cli::input::algebra_to_file;
use nijenhuis_core::samples;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nijenhuis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn list_names_every_suite() {
    let o = run(&["--suite", "list"]);
    assert_eq!(code(&o), 0);
    let listed: Vec<String> = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(listed, nijenhuis_cli::SUITES.map(String::from).to_vec());
}

#[test]
fn coefficients_pass() {
    let o = run(&["--suite", "freelie-coefficients"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8(o.stdout).unwrap().contains("c = 1/6"));
}

#[test]
fn cobar_residue_is_zero() {
    let o = run(&["--suite", "cobar-d2", "--arity", "2", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["detail"].as_str().unwrap().ends_with(" 0 residue terms"), "{c}");
    }
}

#[test]
fn broken_structure_fails_with_witness() {
    let file = serde_json::to_string(&algebra_to_file(&samples::broken_compatibility())).unwrap();
    let path = scratch("broken.json", &file);
    let o = run(&["--suite", "prelie2-axioms", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("FAIL compatibility"), "{text}");
    assert!(text.contains("witness:"), "{text}");
}

#[test]
fn malformed_json_is_a_parse_error() {
    let path = scratch("malformed.json", "{\"basis\": [\n  {\"name\": \"e\" \"degree\": 0}]}");
    let o = run(&["--suite", "prelie2-axioms", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
}

#[test]
fn inconsistent_structure_is_a_validation_error() {
    let path = scratch(
        "unknown_name.json",
        r#"{"basis": [{"name": "e", "degree": 0}],
            "ops": {"circ": [{"inputs": ["e", "e"], "output": "z", "coeff": "1"}]}}"#,
    );
    let o = run(&["--suite", "prelie2-axioms", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = run(&["--suite", "cobar-d2", "--arity", "0"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn unknown_suite() {
    let o = run(&["--suite", "no-such-suite"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8(o.stderr).unwrap().contains("fn-constant"));
}

#[test]
fn resource_ceiling() {
    let o = run(&["--suite", "cobar-d2", "--arity", "12", "--ceiling", "1000"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn out_file_matches_structured_stdout() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("smodule.json");
    let o = run(&["--suite", "smodule-dims", "--format", "structured", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "smodule-dims");
    assert_eq!(v["bounds"]["arity"], 4);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--suite", "maurer-cartan", "--seed", "7", "--samples", "8", "--format", "structured"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
