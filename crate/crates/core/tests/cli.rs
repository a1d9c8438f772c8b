use std::process::{Command, Output};

use serde_json::Value;

fn btquot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btquot")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_y2_x3_minus_x() {
    let out = btquot(&["--field", "5", "--curve", "0,0,0,-1,0", "classify"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let r = &v["result"];
    assert_eq!(r["points"], 8);
    assert_eq!(r["case_counts"]["unique"], 4);
    assert_eq!(r["case_counts"]["two"], 2);
    assert_eq!(r["case_counts"]["no_solution"], 0);
}

#[test]
fn classify_y2_x3_plus_x_plus_1() {
    let v = json(&btquot(&["--field", "5", "--curve", "0,0,0,1,1", "classify"]));
    assert_eq!(v["result"]["points"], 9);
    assert_eq!(v["result"]["case_counts"]["no_solution"], 1);
}

#[test]
fn field_of_four_elements() {
    for spec in ["4", "2^2"] {
        let v = json(&btquot(&["--field", spec, "--curve", "0,0,1,0,0", "classify"]));
        assert_eq!(v["field"], "2^2");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(btquot(&["--field", "6", "--curve", "0,0,0,1,1", "classify"]).status.code(), Some(2));
    assert_eq!(btquot(&["--field", "5", "--curve", "0,0,1", "classify"]).status.code(), Some(2));
    assert_eq!(btquot(&["--field", "5", "classify"]).status.code(), Some(2));
    let out = btquot(&["--field", "5", "--curve", "0,0,0,1,1", "--budget", "10", "stabilizers"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn output_is_byte_identical() {
    let args = ["--field", "5", "--curve", "0,0,0,1,1", "--depth", "3", "domain"];
    let (a, b) = (btquot(&args), btquot(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn domain_structure() {
    let v = json(&btquot(&["--field", "5", "--curve", "0,0,0,-1,0", "--depth", "3", "domain"]));
    let r = &v["result"];
    assert_eq!(r["cusps"].as_array().unwrap().len(), 8);
    let ids: Vec<&str> = r["vertices"].as_array().unwrap().iter().map(|x| x["id"].as_str().unwrap()).collect();
    assert_eq!(ids.iter().filter(|s| s.starts_with("v(")).count(), 6);
    assert!(ids.contains(&"o"));
    assert!(ids.contains(&"c((2,1),3)"));
}

#[test]
fn export_dot() {
    let out = btquot(&["--field", "5", "--curve", "0,0,0,1,1", "--depth", "2", "export-dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph domain {"));
    assert!(dot.contains("\"o\" -- \"v(1)\";"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn homology_and_certify() {
    let v = json(&btquot(&["--field", "5", "--curve", "0,0,0,1,1", "homology"]));
    assert_eq!(v["result"]["decomposition"], "Z/2 + 4 Z/4 + Z/6");
    let out = btquot(&["--field", "5", "--curve", "0,0,0,-1,0", "certify"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "PASS");
    assert_eq!(v["result"]["ledger"].as_array().unwrap().len(), 6);
}

#[test]
fn singular_cubic() {
    let v = json(&btquot(&["--field", "5", "--curve", "0,0,0,0,0", "homology"]));
    let s = v["result"]["summands"].as_array().unwrap();
    let at0 = s.iter().find(|x| x["l"] == "0").unwrap();
    assert_eq!(at0["order"], 4);
    assert_eq!(at0["source"], "c((0,0),1)");
    let out = btquot(&["--field", "5", "--curve", "0,0,0,0,0", "certify"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["result"]["verdict"], "FAIL");
}

#[test]
fn stabilizers_to_file() {
    let path = std::env::temp_dir().join(format!("btquot-stab-{}.json", std::process::id()));
    let out = btquot(&["--field", "5", "--curve", "0,0,0,-1,0", "--depth", "1", "--out", path.to_str().unwrap(), "stabilizers"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    for s in v["result"]["stabilizers"].as_array().unwrap() {
        assert_eq!(s["order"], s["expected_order"], "{}", s["vertex"]);
        assert_ne!(s["family_agrees"], false);
        assert_eq!(s["witness"]["verified"], true, "{}", s["vertex"]);
    }
}
