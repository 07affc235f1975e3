use std::process::{Command, Output};

use serde_json::Value;

fn weaklam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaklam")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = weaklam(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn parse_renames_shadowed_binders() {
    assert_eq!(stdout(&["parse", "\\x. \\x. x"]).trim(), "\\x. \\x1. x1");
    let v = json(&["parse", "\\x. x y", "--json"]);
    assert_eq!(v["free_vars"], serde_json::json!(["y"]));
    assert_eq!(v["size"], 4);
}

#[test]
fn reduce_trace_shape() {
    let v = json(&["reduce", "(\\x. x x) (\\x. x x)", "--fuel", "5", "--json"]);
    let steps = v.as_array().unwrap();
    assert_eq!(steps.len(), 6);
    assert_eq!(steps[0]["redex"], serde_json::json!([]));
    assert_eq!(steps[5]["status"], "fuel-exhausted");
    let v = json(&["reduce", "x y", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["status"], "normal");
}

#[test]
fn reduce_respects_the_barrier() {
    let v = json(&["reduce", "(\\x. x) y", "--barrier", "y", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["barrier"], serde_json::json!(["y"]));
}

#[test]
fn superdev_undefined_and_witness() {
    assert_eq!(stdout(&["superdev", "x @a y", "--k", "1"]).trim(), "undefined");
    let v = json(&["superdev", "\\u. (\\y. y) u", "--k", "1", "--witness", "--json"]);
    assert_eq!(v["erased"], "\\u. u");
    assert_eq!(v["chain"]["k"], 1);
    let segs = v["chain"]["segments"].as_array().unwrap();
    assert_eq!(segs.len(), 2);
    assert_eq!(segs[0]["peel"]["var"], "u");
    assert!(segs[1]["peel"].is_null());
}

#[test]
fn superstep_targets_and_derivations() {
    let v = json(&["superstep", "(\\x. x) ((\\y. y) z)", "--json"]);
    let targets = v["targets"].as_array().unwrap();
    assert_eq!(targets.len(), 3);
    let v = json(&["superstep", "\\x. (\\y. y) x", "--k", "1", "--target", "\\x. x", "--json"]);
    assert_eq!(v["derivable"], true);
    let v = json(&["superstep", "\\x. (\\y. y) x", "--target", "\\x. x", "--json"]);
    assert_eq!(v["derivable"], false);
}

#[test]
fn label_and_mark() {
    assert_eq!(stdout(&["label", "(\\x. x) y"]).trim(), "(\\x^a. x) @a y");
    assert_eq!(stdout(&["mark", "(\\x. x) y"]).trim(), "(\\*x. x) y");
    let v = json(&["mark", "\\u. (\\x. x) u", "--json"]);
    assert_eq!(v["redexes"], serde_json::json!([]));
}

#[test]
fn creations_json() {
    let v = json(&["creations", "(\\*x. x) (\\y. y) z", "--at", "0", "--json"]);
    assert_eq!(v, serde_json::json!([{"case": "I", "created": [], "contracted": [0]}]));
    let v = json(&["creations", "(\\*x. x z) (\\y. y)", "--json"]);
    assert_eq!(v[0]["case"], "III");
}

#[test]
fn check_lists_and_runs() {
    let list = stdout(&["check", "--list"]);
    assert!(list.lines().any(|l| l.starts_with("diamond")));
    let v = json(&["check", "diamond", "--count", "20", "--json"]);
    assert_eq!(v[0]["passed"], true);
    assert_eq!(v[0]["cases"], 20);
    assert!(v[0].get("wall_time_ms").is_none());
    let v = json(&["check", "diamond", "--count", "5", "--timings", "--json"]);
    assert!(v[0]["wall_time_ms"].is_u64());
}

#[test]
fn reports_are_byte_identical() {
    let a = stdout(&["check", "confluence", "shape-lemma", "--count", "50", "--seed", "7"]);
    let b = stdout(&["check", "confluence", "shape-lemma", "--count", "50", "--seed", "7"]);
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(weaklam(&["parse", "\\x x"]).status.code(), Some(2));
    assert_eq!(weaklam(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(weaklam(&["creations", "(\\*x. x) y", "--at", "1"]).status.code(), Some(2));
    assert_eq!(weaklam(&["frobnicate"]).status.code(), Some(2));
}
