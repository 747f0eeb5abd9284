use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn liecert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liecert")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> TempDir {
        let p = std::env::temp_dir().join(format!("liecert-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        TempDir(p)
    }

    fn file(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_sl2() {
    let out = liecert(&["analyze", "--builder", "sl:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["dim"], 3);
    assert_eq!(v["semisimple"], true);
    assert_eq!(v["nilpotent"], false);
    assert_eq!(v["center_dim"], 0);
}

#[test]
fn killing_sl2_gram_strings() {
    let v = json(&liecert(&["killing", "--builder", "sl:2"]));
    assert_eq!(v["gram"], serde_json::json!([["8", "0", "0"], ["0", "0", "4"], ["0", "4", "0"]]));
    assert_eq!(v["semisimple"], true);
    assert_eq!(v["radical_dim"], 0);
    let h = json(&liecert(&["killing", "--builder", "heisenberg:1"]));
    assert_eq!(h["radical_dim"], 3);
}

#[test]
fn roots_sl2() {
    let v = json(&liecert(&["roots", "--builder", "sl:2"]));
    assert_eq!(v["roots"].as_array().unwrap().len(), 2);
    assert_eq!(v["d"], serde_json::json!(["1", "0", "0"]));
    assert_eq!(v["q"], serde_json::json!(["0", "1", "1"]));
    assert_eq!(v["d_regular_semisimple"], true);
}

#[test]
fn roots_of_nilpotent_algebra_is_an_input_error() {
    let out = liecert(&["roots", "--builder", "heisenberg:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn build_round_trip_reproduces_analysis() {
    let dir = TempDir::new("roundtrip");
    for spec in ["sl:3", "heisenberg:2", "filiform:5", "abelian:3"] {
        let path = dir.file("alg.json");
        assert!(liecert(&["build", "--builder", spec, "--output", s(&path)]).status.success());
        for cmd in ["analyze", "killing", "derivations"] {
            let direct = liecert(&[cmd, "--builder", spec]);
            let via_file = liecert(&[cmd, "--file", s(&path)]);
            let via_auto = liecert(&[cmd, "--algebra", s(&path)]);
            assert_eq!(direct.stdout, via_file.stdout, "{cmd} {spec}");
            assert_eq!(direct.stdout, via_auto.stdout, "{cmd} {spec}");
        }
    }
}

#[test]
fn derivations_with_basis() {
    let v = json(&liecert(&["derivations", "--builder", "heisenberg:1", "--basis"]));
    assert_eq!(v["derivation_dim"], 6);
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
    let v = json(&liecert(&["derivations", "--builder", "sl:2"]));
    assert_eq!(v["derivation_dim"], 3);
    assert!(v.get("basis").is_none());
}

#[test]
fn exp_of_ad_and_rejections() {
    let dir = TempDir::new("exp");
    let ad = dir.file("ad.json");
    std::fs::write(&ad, r#"[["0","0","0"],["0","0","0"],["0","1","0"]]"#).unwrap();
    let out = liecert(&["exp", "--builder", "heisenberg:1", "--map", s(&ad)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nilpotency_order"], 2);
    assert_eq!(v["exp"], serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "1", "1"]]));

    let not_der = dir.file("bad.json");
    std::fs::write(&not_der, r#"[["1","0","0"],["0","0","0"],["0","0","0"]]"#).unwrap();
    let out = liecert(&["exp", "--builder", "heisenberg:1", "--map", s(&not_der)]);
    assert_eq!(out.status.code(), Some(1));

    let not_nil = dir.file("ss.json");
    std::fs::write(&not_nil, r#"[["1","0","0"],["0","0","0"],["0","0","1"]]"#).unwrap();
    let out = liecert(&["exp", "--builder", "heisenberg:1", "--map", s(&not_nil)]);
    assert_eq!(out.status.code(), Some(1));

    let garbage = dir.file("garbage.json");
    std::fs::write(&garbage, "[[1,2],").unwrap();
    let out = liecert(&["exp", "--builder", "heisenberg:1", "--map", s(&garbage)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim().lines().count(), 1);
}

#[test]
fn counterexample_heisenberg_example() {
    let out = liecert(&["counterexample", "--builder", "heisenberg:1", "--pairs", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 100);
    assert!(pairs.iter().all(|p| p["verified"] == true));
    assert_eq!(v["nonadditivity"]["defect"], serde_json::json!(["0", "0", "-1/2"]));
    assert_eq!(v["verdict"], "both");
    assert_eq!(v["setup"]["complement"], serde_json::json!([0, 1]));
}

#[test]
fn shifted_f_is_refuted_with_exit_one() {
    let out = liecert(&["counterexample", "--builder", "heisenberg:1", "--pairs", "20", "--f", "cubic+1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "refuted-not-automorphism");
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn certify_accepts_and_detects_tampering() {
    let dir = TempDir::new("certify");
    let cert = dir.file("cert.json");
    let out = liecert(&["counterexample", "--builder", "filiform:4", "--pairs", "30", "--output", s(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let ok = liecert(&["certify", s(&cert)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["pairs"][5]["b"] = Value::from("7");
    let bad = dir.file("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = liecert(&["certify", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["verdict"] = Value::from("certified-2-local-on-sample");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(liecert(&["certify", s(&bad)]).status.code(), Some(1));

    std::fs::write(&bad, "{}").unwrap();
    assert_eq!(liecert(&["certify", s(&bad)]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two_with_one_line() {
    for args in [
        vec!["analyze", "--builder", "lie:3"],
        vec!["analyze"],
        vec!["analyze", "--builder", "sl:2", "--file", "x.json"],
        vec!["counterexample", "--builder", "sl:2"],
        vec!["counterexample", "--builder", "heisenberg:1", "--seed", "0"],
        vec!["analyze", "--file", "/nonexistent/alg.json"],
    ] {
        let out = liecert(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}
