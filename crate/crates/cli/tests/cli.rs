use std::process::{Command, Output};

use serde_json::Value;

fn semifact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semifact")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = semifact(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    semifact(args).status.code().expect("exit code")
}

#[test]
fn conducted_additive_atoms() {
    let v = json(&["atoms", "--semialgebra", "conducted:2", "--mode", "add", "--max-den", "6"]);
    let atoms: Vec<&str> = v["atoms"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
    assert_eq!(&atoms[..6], ["1", "5/2", "7/3", "8/3", "9/4", "11/4"]);
    assert!(atoms.contains(&"11/5"));
    assert!(!atoms.contains(&"2") && !atoms.contains(&"3"));
    assert_eq!(v["complete"], false);
}

#[test]
fn matrix_factorization() {
    let v = json(&["mat-factorize", "--semialgebra", "nat", "--matrix", "1,2;0,2"]);
    assert_eq!(v["complete"], true);
    assert_eq!(v["count"], 2);
    assert_eq!(v["lengths"], serde_json::json!([2, 3]));
    assert_eq!(v["weight"], 3);
    let first = &v["factorizations"][0];
    assert_eq!(first["length"], 2);
    assert_eq!(first["factors"][0], serde_json::json!({"type": "add", "pos": [1, 2], "atom": "1"}));
    assert_eq!(first["factors"][1], serde_json::json!({"type": "mult", "pos": [2, 2], "atom": "2"}));
}

#[test]
fn verify_suite_has_no_failures() {
    let out = semifact(&["verify", "--suite", "lemma", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let reports: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["status"] != "Fail"));
    assert_eq!(reports[2]["status"], "Inconclusive");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["member", "-s", "nat", "-x", "3"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["member", "-s", "nat", "-x", "three"]), 1);
    assert_eq!(code(&["member", "-s", "cyclic:0", "-x", "1"]), 1);
    assert_eq!(code(&["factorize", "-s", "nat", "-x", "1/2"]), 2);
    assert_eq!(code(&["hfm", "-s", "nat", "--m", "1"]), 2);
    assert_eq!(code(&["mat-atom", "-s", "nat", "-m", "0,1;0,1"]), 2);
    assert_eq!(code(&["factorize", "-s", "conducted:2", "-x", "9/2", "--max-den", "6"]), 0);
    assert_eq!(code(&["factorize", "-s", "conducted:2", "-x", "9/2", "--max-den", "6", "--strict"]), 3);
}

#[test]
fn memory_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_semifact"))
        .args(["mat-factorize", "-s", "nat", "-m", "1,4,4;0,1,4;0,0,1"])
        .env("SEMIFACT_MAX_MEM", "1M")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_semifact"))
        .args(["hfm", "-s", "nat", "--m", "2"])
        .env("SEMIFACT_MAX_MEM", "64M")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn printed_values_reparse() {
    let v = json(&["hfm", "-s", "conducted:2", "--m", "4"]);
    let m = v["matrix"].as_str().unwrap();
    assert_eq!(m, "1,4;0,4");
    let again = json(&["mat-factorize", "-s", "conducted:2", "-m", m]);
    assert_eq!(again["matrix"], m);
    let lens: Vec<u64> = again["lengths"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(lens.contains(&6) && lens.contains(&3));
    let d = json(&["divisors", "-s", "cyclic:2/3", "-x", "8/9", "--mode", "mult"]);
    for x in d["divisors"].as_array().unwrap() {
        let x = x.as_str().unwrap();
        assert_eq!(json(&["member", "-s", "cyclic:2/3", "-x", x])["member"], true);
    }
    let e = json(&["factorize", "-s", "exp", "-x", "e:{0:2,1/2:1}"]);
    assert_eq!(e["element"], "e:{0:2,1/2:1}");
}

#[test]
fn identical_arguments_identical_bytes() {
    let args = ["apl-probe", "-s", "cyclic:2/3", "-m", "1,2/3;0,1"];
    let a = semifact(&args).stdout;
    let b = semifact(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["outcome"], "witness");
    assert_eq!(v["x"], "2/3,0;0,1");
    assert_eq!(v["y"], "1,1;0,1");
}

#[test]
fn probes_and_digits() {
    let v = json(&["accp-probe", "-s", "cyclic:2/3", "-x", "2", "--depth", "4"]);
    assert_eq!(v["outcome"], "chain");
    assert_eq!(v["chain"], serde_json::json!(["2", "4/3", "8/9", "16/27", "32/81"]));
    let v = json(&["accp-probe", "-s", "nat", "-x", "5"]);
    assert_eq!(v["outcome"], "none_found");
    let v = json(&["digits", "-s", "cyclic:2/3", "-x", "4/3"]);
    assert_eq!(v["digits"], serde_json::json!(["0", "2"]));
    let v = json(&["lengths", "-s", "cyclic:3/2", "-x", "3"]);
    assert_eq!(v["lengths"], serde_json::json!([2, 3]));
    assert_eq!(v["complete"], true);
}

#[test]
fn table_format() {
    let out = semifact(&["mat-atom", "-s", "nat", "-m", "2,0;0,1", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("atom") && l.trim_end().ends_with("true")));
    assert!(text.contains("matrix"));
}
