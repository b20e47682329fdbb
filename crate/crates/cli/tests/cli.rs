use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twpart"))
        .args(args)
        .env("TWPART_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn last_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().last().expect("some output")).expect("json line")
}

fn gen(dir: &Path, n: usize) -> (String, String) {
    let g = dir.join("g.txt").display().to_string();
    let w = dir.join("w.txt").display().to_string();
    let out = twpart(&["gen", "--family", "forest", "--n", &n.to_string(), "--seed", "5", "--output", &g, "--witness", &w]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    (g, w)
}

#[test]
fn global_and_local_sweep_agree_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = gen(dir.path(), 120);
    let p1 = dir.path().join("p1.txt").display().to_string();
    let p2 = dir.path().join("p2.txt").display().to_string();
    let a = twpart(&["partition", "--input", &g, "--seed", "3", "--output", &p1]);
    let b = twpart(&["partition", "--input", &g, "--seed", "3", "--mode", "local-sweep", "--output", &p2]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

    let stats = last_json(&a);
    for key in ["n", "m", "cut_edges", "max_component", "queries_total", "max_queries_per_call", "seed", "k", "delta", "c", "config"] {
        assert!(stats.get(key).is_some(), "missing {key}");
    }
    assert_eq!(stats["n"], 120);
    assert!(stats["max_component"].as_u64().unwrap() <= 20);
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = gen(dir.path(), 80);
    let a = twpart(&["partition", "--input", &g, "--seed", "9"]);
    let b = twpart(&["partition", "--input", &g, "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 81);
}

#[test]
fn witness_validates_and_normalizes() {
    let dir = tempfile::tempdir().unwrap();
    let (g, w) = gen(dir.path(), 60);
    let out = twpart(&["decomp", "validate", "--input", &g, "--decomp", &w]);
    assert!(out.status.success());
    assert_eq!(last_json(&out)["valid"], true);

    let n = dir.path().join("n.txt").display().to_string();
    let out = twpart(&["decomp", "normalize", "--input", &g, "--decomp", &w, "--output", &n]);
    assert!(out.status.success());
    let out = twpart(&["decomp", "validate", "--input", &g, "--decomp", &n]);
    assert_eq!(last_json(&out)["valid"], true);
}

#[test]
fn queries_and_searches() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = gen(dir.path(), 50);
    let out = twpart(&["oracle-query", "--input", &g, "--vertex", "7"]);
    assert!(out.status.success());
    let v = last_json(&out);
    assert!(v["component"].as_array().unwrap().iter().any(|x| x == 7));

    let out = twpart(&["find-neighborhood", "--input", &g, "--vertex", "7", "--k", "10", "--delta", "1/2", "--c", "2"]);
    assert!(out.status.success());
    let v = last_json(&out);
    assert!(v["set"].as_array().unwrap().iter().any(|x| x == 7));
}

#[test]
fn estimate_and_test_emit_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = gen(dir.path(), 60);
    let out = twpart(&["estimate", "--input", &g, "--problem", "matching", "--accuracy", "0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(last_json(&out)["estimate"].is_number());

    let out = twpart(&["test", "--input", &g, "--property", "forest", "--accuracy", "0.5"]);
    assert!(out.status.success());
    assert_eq!(last_json(&out)["accept"], true);
}

#[test]
fn bench_prints_csv() {
    let out = twpart(&["bench", "--sizes", "50,100", "--calls", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,max_queries_per_call");
    assert!(lines[1].starts_with("50,") && lines[2].starts_with("100,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = gen(dir.path(), 30);
    assert_eq!(twpart(&["partition", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(twpart(&["partition", "--input", &g, "--delta", "x"]).status.code(), Some(1));
    let missing = dir.path().join("none.txt").display().to_string();
    assert_eq!(twpart(&["partition", "--input", &missing]).status.code(), Some(2));
    assert_eq!(twpart(&["partition", "--input", &g, "--param-mode", "theoretical"]).status.code(), Some(3));
    assert_eq!(twpart(&["partition", "--input", &g, "--delta", "3/2"]).status.code(), Some(3));
    assert_eq!(twpart(&["--help"]).status.code(), Some(0));
}
