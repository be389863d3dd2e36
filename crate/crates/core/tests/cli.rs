use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn trilie(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_trilie")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = trilie(&all);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    assert!(v.get("op").is_some(), "{v}");
    assert!(
        (v.get("passed").is_some() && v.get("witnesses").is_some())
            || (v.get("result").is_some() && v.get("data").is_some()),
        "{v}"
    );
    (code, v)
}

#[test]
fn check_a3_passes() {
    let (code, out, _) = trilie(&["check", &fixture("a3.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fundamental identity: pass"));
}

#[test]
fn check_counterexample_fails_with_witness() {
    let (code, out, _) = trilie(&["check", &fixture("fi_counterexample.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("(e2,e4,e5,e2,e3)"), "{out}");
    let (code, v) = json(&["check", &fixture("fi_counterexample.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let ws = v["witnesses"]["fundamental_identity"]["violations"].as_array().unwrap();
    assert!(ws.iter().any(|w| w["witness"] == serde_json::json!([2, 4, 5, 2, 3])));
}

#[test]
fn classify_outcomes() {
    let (code, v) = json(&["classify", &fixture("t1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["family"], "T1");
    assert_eq!(v["data"]["params"]["alpha"], "2");
    assert_eq!(v["data"]["witness"], serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));

    let (code, v) = json(&["classify", &fixture("not_tp.json")]);
    assert_eq!((code, v["result"].as_str().unwrap()), (1, "not-transposed-poisson"));
    assert_eq!(v["data"]["witness"], serde_json::json!([3, 1, 2, 3]));

    let (code, v) = json(&["classify", &fixture("needs_extension.json")]);
    assert_eq!(code, 3);
    assert_eq!(v["data"], serde_json::json!({"family": "T1", "radicand": "1/2", "degree": 4}));

    let (code, v) = json(&["classify", &fixture("zero_product.json")]);
    assert_eq!((code, v["result"].as_str().unwrap()), (3, "unclassified"));
}

#[test]
fn transport_and_back() {
    let (code, out, _) = trilie(&["transport", &fixture("t1.json"), "--matrix", &fixture("diag.json")]);
    assert_eq!(code, 0);
    let moved = std::env::temp_dir().join(format!("trilie-moved-{}.json", std::process::id()));
    std::fs::write(&moved, out.trim_end()).unwrap();
    let (code, v) = json(&["classify", moved.to_str().unwrap()]);
    std::fs::remove_file(&moved).unwrap();
    assert_eq!(code, 0);
    assert_eq!(v["data"]["family"], "T1");
    assert_eq!(v["data"]["params"]["alpha"], "2");
}

#[test]
fn spaces_and_fingerprint() {
    let (code, v) = json(&["derivations", &fixture("a3.json"), "--delta", "1/3"]);
    assert_eq!((code, v["data"]["dim"].as_u64()), (0, Some(6)));
    let (code, v) = json(&["tp-space", &fixture("a3.json")]);
    assert_eq!((code, v["data"]["dim"].as_u64()), (0, Some(9)));
    let (code, v) = json(&["fingerprint", &fixture("a3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["data"], serde_json::json!([6, 0, 3, 0, 0]));
}

#[test]
fn verify_paper_cases() {
    assert_eq!(trilie(&["verify-paper", "--case", "1-a", "--seed", "7"]).0, 0);
    let (code, v) = json(&["verify-paper", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 16);
}

#[test]
fn input_errors_exit_2() {
    let bad = std::env::temp_dir().join(format!("trilie-bad-{}.json", std::process::id()));
    std::fs::write(&bad, r#"{"dim":3,"bracket":[{"args":[2,1,3],"value":{"1":"1"}}]}"#).unwrap();
    let (code, _, err) = trilie(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1") && err.contains("non-monotone"), "{err}");
    let (code, v) = json(&["check", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!((code, v["result"].as_str().unwrap()), (2, "error"));
    assert_eq!(trilie(&["classify"]).0, 2);
    assert_eq!(trilie(&["nonsense"]).0, 2);
}
