use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const EXAMPLE: &str = "field Q\ngens x,y,z,w\nrel y*x\nrel z*z*y\nrel w*z\n";
const MODULE: &str = "free 0,0\nrel x,0\nrel 0,y\n";

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bikoszul"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn betti_entries(v: &Value) -> Vec<(u64, u64, u64)> {
    let mut e: Vec<_> = v["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["i"].as_u64().unwrap(), r["j"].as_u64().unwrap(), r["beta"].as_u64().unwrap()))
        .collect();
    e.sort();
    e
}

#[test]
fn resolve_reports_table_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.alg", EXAMPLE);
    let out = run(&["resolve", a.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(
        betti_entries(&v),
        [(0, 0, 1), (1, 1, 4), (2, 2, 2), (2, 3, 1), (3, 4, 2), (4, 5, 1)]
    );
    assert_eq!(v["certificate"]["composites_vanish"], true);
    assert_eq!(v["window"]["length"], 5);
}

#[test]
fn classify_reads_supports_from_stdin() {
    let out = run(&["classify", "--betti", "-", "--format", "json"], Some("0;1;3,4;6;7\n"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let matched: Vec<&Value> = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] == "matches-in-window")
        .collect();
    assert_eq!(matched.len(), 1);
    assert_eq!(matched[0]["pattern"]["kind"], "bi-koszul");
    assert_eq!(matched[0]["pattern"]["d"], 3);

    let out = run(&["classify", "--betti", "-", "--d", "2"], Some("0;1;3,4;6;7\n"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_splits_the_example_module() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.alg", EXAMPLE);
    let m = write(dir.path(), "m.mod", MODULE);
    let out = run(
        &["decompose", a.to_str().unwrap(), "--module", m.to_str().unwrap(), "--format", "json"],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["d"], 2);
    assert!(v["transcript"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let x3 = write(dir.path(), "x3.alg", "field Q\ngens x\nrel x*x*x\n");
    let bad = write(dir.path(), "bad.alg", "field Q\ngens x\nrel x*\n");
    let example = write(dir.path(), "a.alg", EXAMPLE);

    // x³ is 3-Koszul but not bi-Koszul.
    let out = run(&["obstruction", x3.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["resolve", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error["));

    let out = run(&["resolve", dir.path().join("missing.alg").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["obstruction", example.to_str().unwrap(), "--length", "4"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E-WINDOW"));

    let out = run(&["classify", "--betti", "-"], Some("0;1;9\n"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.alg", EXAMPLE);
    let args = ["yoneda", a.to_str().unwrap(), "--seed", "11", "--format", "json"];
    let first = run(&args, None);
    let second = run(&args, None);
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}
