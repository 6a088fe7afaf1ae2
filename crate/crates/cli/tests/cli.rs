use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn restrained(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restrained")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn success_goes_to_stdout() {
    let o = restrained(&["bounds", "--g", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let v = stdout_json(&o);
    assert_eq!(v["nakajima"], json!(504));
    assert_eq!(v["stichtenoth"], json!({ "value": 6048, "exact": true }));
}

#[test]
fn output_is_reproducible() {
    let args = ["classify", "--p", "2", "--s", "1", "--d", "2", "--m", "4"];
    assert_eq!(restrained(&args).stdout, restrained(&args).stdout);
}

#[test]
fn usage_error_exit_code() {
    let o = restrained(&["classify", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(stderr_json(&o)["error"]["kind"], json!("UsageError"));
}

#[test]
fn domain_error_exit_code() {
    let o = restrained(&["canonical-form", "--n", "3", "--p", "2", "--s", "1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert_eq!(stderr_json(&o)["error"]["kind"], json!("OrderMismatch"));
}

#[test]
fn help_is_not_an_error() {
    let o = restrained(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("selftest"));
}

#[test]
fn rhz_from_file() {
    let path = write_tmp(
        "kg-cover.json",
        r#"{"base_genus":0,"group_order":12,"branch_points":[{"kind":"tame","e":3},{"kind":"restrained","n":3,"d":1,"q":4}]}"#,
    );
    let o = restrained(&["rhz", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o), json!({ "genus": 0 }));

    let bad = write_tmp("bad-cover.json", r#"{"base_genus":0}"#);
    assert_eq!(restrained(&["rhz", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn immobile_from_file() {
    let path = write_tmp(
        "curve.json",
        r#"{"p":3,"restrained":true,"quotient_genus":0,"branch_indices":[6,2],"wild_points":[{"n_x":3,"s_x":2,"t_x":2}]}"#,
    );
    let o = restrained(&["immobile", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["immobile"], json!(true));

    let incomplete = write_tmp("incomplete.json", r#"{"p":3}"#);
    let o = restrained(&["immobile", "--spec", incomplete.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], json!("IncompleteDescriptor"));
}
