use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rasa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rasa-verify")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const MU: &str = r#"{"atoms": [["0", "1/16"], ["1", "3/8"], ["2", "9/16"]]}"#;
const NU: &str = r#"{"atoms": [["0", "5/72"], ["1", "31/72"], ["2", "31/72"], ["3", "5/72"]]}"#;

#[test]
fn check_cx_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (mu, nu) = (write(dir.path(), "mu.json", MU), write(dir.path(), "nu.json", NU));

    let out = rasa(&["check", "cx", s(&mu), s(&nu), "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dominated"], true);
    assert_eq!(v["reason"], "holds");
    assert!(v["oracle"]["refuted_by"].is_null());

    let out = rasa(&["check", "cx", s(&nu), s(&mu)]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["reason"], "stop-loss-violation");
    assert_eq!(v["witness"]["t"], "1/1");
    assert_eq!(v["witness"]["lhs"], "41/72");
    assert_eq!(v["witness"]["rhs"], "9/16");
}

#[test]
fn malformed_input_names_file_and_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"atoms\": [[\"0\", \"1/2\"],\n  [\"1\" \"1/2\"]]}");
    let out = rasa(&["check", "cx", s(&bad), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
}

#[test]
fn domain_errors_print_exact_values() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "mass.json", r#"{"atoms": [["0", "1/2"], ["1", "1/3"]]}"#);
    let out = rasa(&["check", "cx", s(&bad), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("5/6"), "{}", stderr(&out));

    let decimal = write(dir.path(), "dec.json", r#"{"atoms": [["0", "0.5"], ["1", "1/2"]]}"#);
    assert_eq!(rasa(&["check", "cx", s(&decimal), s(&decimal)]).status.code(), Some(2));
}

#[test]
fn vector_commands() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"entries": ["3/4", "3/4", "0"]}"#);
    let q = write(dir.path(), "q.json", r#"{"entries": ["5/6", "1/2", "1/6"]}"#);
    let wide = write(dir.path(), "w.json", r#"{"entries": ["1", "1/2", "0"]}"#);

    let out = rasa(&["majorize", s(&p), s(&q)]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(1), r#"{"majorizes":false}"#));
    let out = rasa(&["sigma", s(&p), s(&q)]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(0), r#"{"sigma_criterion":true}"#));

    let out = rasa(&["pinch", s(&wide), s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert!(!steps.is_empty() && steps.len() <= 2);

    assert_eq!(rasa(&["pinch", s(&p), s(&q)]).status.code(), Some(2));
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("r.json");
    let out =
        rasa(&["verify", "split", "--n", "1..2", "--grid-denominator", "2", "--f", "hinge:1/2", "--out", s(&json)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["summary"]["total"], 2 * 9 * 3);
    assert_eq!(v["summary"]["failures"], 0);

    let out = rasa(&["verify", "rasa", "--n", "1", "--grid-denominator", "1", "--f", "square", "--format", "csv"]);
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("inequality_id,params,f,lhs,rhs,margin,holds"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn verify_fixed_cases() {
    let out = rasa(&["verify", "general", "--ns", "1,2,3", "--xs", "0,1/2,1", "--f", "battery"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = rasa(&["verify", "chains", "--ns", "1,2", "--xs", "1/4,3/4", "--f", "abs:1/2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = rasa(&["verify", "hlp", "--n", "1..2", "--trials", "10", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn function_file_and_bad_flags() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"[{"kind": "piecewise-linear", "breakpoints": ["0", "1/2", "1"], "values": ["1", "0", "1"]}, {"kind": "square"}]"#,
    );
    let out = rasa(&["verify", "rasa", "--n", "1..2", "--grid-denominator", "2", "--f", s(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    assert_eq!(rasa(&["verify", "rasa", "--n", "3..1"]).status.code(), Some(2));
    assert_eq!(rasa(&["verify", "rasa", "--f", "hinge:0.5"]).status.code(), Some(2));
    assert_eq!(rasa(&["verify", "general", "--ns", "1,2"]).status.code(), Some(2));
}

#[test]
fn examples_reproduce_golden_values() {
    let out = rasa(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for needle in ["155/324", "5/72", "31/72", "stop-loss-violation", "4/9"] {
        assert!(text.contains(needle), "missing {needle}");
    }
    assert!(!text.contains("MISMATCH"));
}
