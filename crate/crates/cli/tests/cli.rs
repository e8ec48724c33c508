//! End-to-end runs of the binary with frozen outputs.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlspringer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn staircase_form_text() {
    let out = run(&["weyr", "--partition", "2,2", "--field", "2,1,1"]);
    assert_eq!(
        stdout(&out),
        "4 4 2 1 1\n1 0 1 0\n0 1 0 1\n0 0 1 0\n0 0 0 1\n"
    );
}

#[test]
fn point_counts() {
    let out = run(&[
        "count", "--kind", "dl", "--w", "2,1,4,3", "--n", "4", "--q", "2", "--k", "2",
    ]);
    assert_eq!(stdout(&out).trim(), "140");

    let out = run(&["count", "--kind", "full", "--n", "2", "--q", "2", "--k", "2"]);
    assert_eq!(stdout(&out).trim(), "5");

    let out = run(&[
        "count",
        "--kind",
        "intersection",
        "--partition",
        "2,1",
        "--w",
        "1,3,2",
        "--n",
        "3",
        "--q",
        "2",
        "--k",
        "3",
    ]);
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn matrix_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.mat");
    let weyr = run(&["weyr", "--partition", "3,1", "--field", "2,1,2"]);
    std::fs::write(&path, stdout(&weyr)).unwrap();

    let out = run(&["jordan", "--matrix", path.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "3,1");

    let out = run(&["beta", "--matrix", path.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "2,1,3,4");
}

#[test]
fn twisted_count_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.mat");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, "0 1\n1 0\n\n0 0\n0 0\n").unwrap();
    drop(f);
    let out = run(&[
        "lefschetz",
        "--d",
        "2",
        "--r",
        "2",
        "--q",
        "2",
        "--w",
        "2,1,4,3",
        "--g",
        path.to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn verify_emits_passing_json() {
    let out = run(&[
        "verify", "thm-a", "--partition", "2,1", "--q", "2", "--kmax", "2", "--json",
    ]);
    let text = stdout(&out);
    let mut lines = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], serde_json::json!(true), "line: {line}");
        assert_eq!(v["claim_id"], serde_json::json!("thm4.1a"));
        lines += 1;
    }
    assert_eq!(lines, 16);
}

#[test]
fn verify_all_and_examples_pass() {
    let out = run(&["verify", "all", "--n-max", "2", "--q", "2", "--kmax", "2"]);
    assert!(out.status.success());
    let out = run(&["examples", "--q", "2", "--kmax", "2"]);
    assert!(out.status.success());
}

#[test]
fn enumeration_emits_flag_json() {
    let out = run(&["enumerate", "--kind", "full", "--n", "2", "--q", "2", "--k", "1"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n"], serde_json::json!(2));
        assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn histogram_mode_reported() {
    let out = run(&[
        "relpos-hist",
        "--partition",
        "2,2",
        "--p-tab",
        "1,3;2,4",
        "--q-tab",
        "1,2;3,4",
        "--q",
        "2",
        "--k",
        "2",
        "--json",
    ]);
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["expected"], serde_json::json!("2,4,1,3"));
    assert_eq!(v["pass"], serde_json::json!(true));
}

#[test]
fn missing_argument_is_a_usage_error() {
    let out = run(&["count", "--kind", "dl", "--n", "4", "--q", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--w"));
}
