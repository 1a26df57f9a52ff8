use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cy3lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn first_case_across_tables() {
    let out = run(&["report", "--cases", "0-1", "--tasks", "normalizer,picard,hodge,pi1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "cy3lab/1");
    let case = &v["cases"][0];
    assert_eq!(case["normalizer"]["L0tag"], "S^3⋊S_3");
    assert_eq!(case["normalizer"]["matchesTable1"], true);
    assert_eq!(case["picard"]["rankQ"], 0);
    assert_eq!(case["geometry"]["h11"], 51);
    assert_eq!(case["geometry"]["h21"], 3);
    assert_eq!(case["geometry"]["pi1"], "Zero");
    assert_eq!(case["geometry"]["resolutionChoicesUpperBound"], "340282366920938463463374607431768211456");
    assert_eq!(v["allMatched"], true);
}

#[test]
fn all_hodge_rows_match() {
    let out = run(&["report", "--cases", "all", "--tasks", "hodge,pi1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 35);
    assert!(cases.iter().all(|c| c["geometry"]["matchesTable3"] == true));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["report", "--cases", "9-9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown case label"));
    assert_eq!(run(&["report", "--tasks", "hodge,volume"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--cases", "1-6", "--tasks", "picard"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tampered_catalog_is_a_mismatch() {
    let text = include_str!("../../cy3lab/data/catalog.txt").replace("0-1 | (0+,0-,0-) (0-,0+,0-) | - | 51 3", "0-1 | (0+,0-,0-) (0-,0+,0-) | - | 50 3");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.txt");
    std::fs::write(&path, text).unwrap();
    let out = run(&["report", "--tasks", "hodge", "--catalog", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table3 0-1"));
    let v = json(&out);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 1);
}

#[test]
fn unreadable_or_broken_catalog() {
    assert_eq!(run(&["report", "--catalog", "/nonexistent/catalog.txt"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.txt");
    std::fs::write(&path, "0-1 | nonsense\n").unwrap();
    assert_eq!(run(&["report", "--catalog", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_file_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table2.md");
    let out = run(&["report", "--tasks", "picard", "--format", "markdown", "--out", path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&path).unwrap();
    assert!(md.contains("## Table 2"));
    assert!(md.contains(include_str!("../../cy3lab/data/table2.md")));
    // the published rank of 2-12 is not reproduced
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["report", "--cases", "0-1,2-5", "--tasks", "normalizer,hodge,pi1,toric,modular", "--samples", "10", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["modular"]["samples"], 10);
    assert_eq!(v["toric"]["triangulations"].as_array().unwrap().len(), 4);
}

#[test]
fn coarse_tolerance_still_passes() {
    let out = run(&["report", "--tasks", "modular", "--tol", "1e-3", "--samples", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["modular"]["passed"], true);
}

#[test]
fn verify_prints_every_criterion() {
    let out = run(&["verify", "--format", "markdown", "--samples", "20"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for id in 1..=10 {
        assert!(text.contains(&format!("criterion {id:>2} ")), "{text}");
    }
    let failed = text.lines().filter(|l| l.contains(" FAIL ")).count();
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
