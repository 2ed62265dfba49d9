use std::process::Command;

use serde_json::Value;

fn rcf(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rcf")).args(args).output().expect("run rcf");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

#[test]
fn pell_example() {
    let (code, out, _) = rcf(&["pell", "--delta", "62", "--p", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("6 points, cyclic, generator (3, 2)"), "{out}");
    let (_, out, _) = rcf(&["pell", "--delta", "62", "--p", "5", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["order"].as_u64(), v["norm_kernel"].as_u64()), (Some(6), Some(6)));
}

#[test]
fn degrees_example() {
    let (code, out, _) = rcf(&["degrees", "--d1", "15", "--d2", "26", "--N", "5", "--p", "37", "--mu", "0", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let entries = v["degree_table"]["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["from"] == "K_(185)" && e["to"] == "K~^{1,2}" && e["index"] == 1));
    let pairs: std::collections::HashSet<_> = entries.iter().map(|e| (e["from"].to_string(), e["to"].to_string())).collect();
    assert_eq!(pairs.len(), entries.len(), "repeated edges");
}

#[test]
fn siegel_eval_agrees_with_gamma() {
    let (code, out, _) = rcf(&["siegel-eval", "--r1", "0", "--r2", "1/5", "--field", "2", "--d", "2", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exponent"], 60);
    assert!(v["re"].as_str().unwrap().starts_with("8.2698483855338"));
    let (_, out, _) = rcf(&["gamma", "--d1", "31", "--d2", "2", "--p", "5", "--I", "2"]);
    assert!(out.starts_with("γ = 8.2698483855338"), "{out}");
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(rcf(&["degrees", "--d1", "15"]).0, 3);
    assert_eq!(rcf(&["reproduce", "--example", "1-1"]).0, 3);
    assert_eq!(rcf(&["siegel-eval", "--r1", "1", "--r2", "2", "--field", "1", "--d", "7"]).0, 3);
    assert_eq!(rcf(&["gamma", "--d1", "31", "--d2", "2", "--p", "5", "--prec-bits", "16"]).0, 3);
    // hypothesis: h_1 = 3 puts the quartic out of scope, and p | N is excluded
    let (code, _, err) = rcf(&["minpoly", "--d1", "31", "--d2", "2", "--p", "5", "--I", "1"]);
    assert_eq!(code, 1, "{err}");
    assert_eq!(rcf(&["norm-gen", "--d1", "15", "--d2", "26", "--N", "37", "--p", "37"]).0, 1);
    // precision: the N(i,j) need 4096 bits
    let (code, _, err) = rcf(&["normal-basis", "--d1", "31", "--d2", "2", "--p", "5", "--I", "2", "--max-prec-bits", "1024"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("1024 bits"));
    assert_eq!(rcf(&["--help"]).0, 0);
}

#[test]
fn report_round_trips_through_validator() {
    let path = std::env::temp_dir().join(format!("rcf-report-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = rcf(&["report", "--d1", "31", "--d2", "2", "--p", "5", "--I", "2", "--degrees", "--minpoly", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
    let (code, out, _) = rcf(&["validate", p]);
    assert_eq!(code, 0, "{out}");
    std::fs::write(&path, r#"{"schema_version": "rcf-invariants/1"}"#).unwrap();
    assert_eq!(rcf(&["validate", p]).0, 3);
    std::fs::remove_file(&path).unwrap();
}
