use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const PROBLEM: &str = r#"{
  "schema": 1,
  "P": "x^3 + 2*y^3 - z^3 + x*y*z",
  "Q": "x^2 + 3*y^2 - 5*z^2 + x*z",
  "commands": ["check", "milnor", "basis"],
  "seed": 7
}"#;

fn scratch_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("foliation-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_foliation-kit")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn report_is_byte_identical_across_runs() {
    let path = scratch_file("ok.json", PROBLEM);
    let p = path.to_str().unwrap();
    let (code, first, _) = run(&["run", p]);
    let (_, second, _) = run(&["run", p]);
    assert_eq!(code, 0);
    assert_eq!(first, second);

    let report: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["exit_code"], 0);
    let blocks = report["results"].as_array().unwrap();
    let names: Vec<&str> = blocks.iter().map(|b| b["command"].as_str().unwrap()).collect();
    assert_eq!(names, ["check", "milnor", "basis"]);
    assert!(blocks.iter().all(|b| b["status"] == "ok"));
    assert_eq!(report["provenance"]["seed"], 7);
}

#[test]
fn out_file_and_seed_override() {
    let path = scratch_file("seeded.json", PROBLEM);
    let out = path.with_file_name("report.json");
    let (code, stdout, _) = run(&["run", path.to_str().unwrap(), "--seed", "11", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["provenance"]["seed"], 11);
}

#[test]
fn timing_adds_seconds() {
    let path = scratch_file("timed.json", PROBLEM);
    let (_, stdout, _) = run(&["run", path.to_str().unwrap(), "--timing"]);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert!(report["results"].as_array().unwrap().iter().all(|b| b["seconds"].is_number()));
}

#[test]
fn malformed_input_exits_with_2() {
    let path = scratch_file("bad.json", r#"{"schema": 1, "P": "x^3 +", "Q": "z^2", "commands": ["milnor"]}"#);
    let (code, _, stderr) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("foliation-kit: "));

    let (code, _, _) = run(&["run", "/nonexistent/problem.json"]);
    assert_eq!(code, 2);
}

#[test]
fn non_generic_data_is_an_input_error() {
    // P and Q share the line x = 0
    let path = scratch_file("degenerate.json", r#"{"schema": 1, "P": "x^3 + x*y*z", "Q": "x^2 + x*z", "commands": ["check"]}"#);
    let (code, stdout, stderr) = run(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{stdout}{stderr}");
}
