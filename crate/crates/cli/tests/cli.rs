use std::path::PathBuf;
use std::process::Command;

use koszul_cli::{parse, print, run, Options, Status};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn corpus_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn koszul(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_koszul")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

/// Integer tokens of a text report.
fn text_numbers(text: &str) -> Vec<i64> {
    let mut v: Vec<i64> = text.split(|c: char| c.is_whitespace() || ",:[]".contains(c)).filter_map(|t| t.parse().ok()).collect();
    v.sort();
    v
}

fn json_numbers(v: &Value, out: &mut Vec<i64>) {
    match v {
        Value::Number(n) => out.push(n.as_i64().unwrap()),
        Value::String(s) => out.extend(s.parse::<i64>().ok()),
        Value::Array(a) => a.iter().for_each(|x| json_numbers(x, out)),
        Value::Object(m) => m.values().for_each(|x| json_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn corpus_validates() {
    let files = corpus_files();
    assert!(files.len() >= 5);
    let (mut categories, mut coalgebras, mut curved) = (0, 0, 0);
    for f in &files {
        let (code, out) = koszul(&["validate", &f.to_string_lossy()]);
        assert_eq!(code, 0, "{}: {out}", f.display());
        let ws = parse(&std::fs::read_to_string(f).unwrap(), None).unwrap();
        categories += ws.categories.len();
        coalgebras += ws.coalgebras.len();
        curved += ws.coalgebras.values().filter(|c| c.is_curved()).count();
    }
    assert!(categories >= 10 && coalgebras >= 10 && curved >= 2, "{categories} {coalgebras} {curved}");
}

#[test]
fn parse_print_round_trip() {
    for f in corpus_files() {
        let ws = parse(&std::fs::read_to_string(&f).unwrap(), None).unwrap();
        let text = koszul_cli::print_text(&ws);
        let again = parse(&text, None).unwrap();
        assert_eq!(print(&again), print(&ws), "{}", f.display());
        assert_eq!(koszul_cli::print_text(&again), text);
    }
}

#[test]
fn hh_of_dual_numbers_over_f3() {
    let (code, out) = koszul(&["hh", &path("dual_numbers.json"), "dual", "--out", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let dims: Vec<u64> = v["report"]["dims"].as_array().unwrap().iter().map(|d| d["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![2, 1, 1, 1, 1]);
}

#[test]
fn hh_of_a2_is_the_ground_field() {
    let (code, out) = koszul(&["hh", &path("categories.json"), "A2", "--out", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let dims: Vec<u64> = v["report"]["dims"].as_array().unwrap().iter().map(|d| d["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 0, 0, 0]);
}

#[test]
fn ez_check_on_two_primitives() {
    let (code, out) = koszul(&["ez-check", &path("two_primitives.json"), "p1", "p2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("dims_equal_on_window: yes"), "{out}");
    let (code, out) = koszul(&["ez-check", &path("curved_pair.json"), "w", "v"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("associated_graded: yes") && out.contains("dims_equal_on_window: yes"), "{out}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{\"categories\": {").unwrap();
    assert_eq!(koszul(&["validate", &bad_json.to_string_lossy()]).0, 3);

    let dangling = dir.path().join("dangling.json");
    std::fs::write(&dangling, r#"{"coalgebras": {"c": {"objects": ["*"], "cells": [{"name": "t", "src": "*", "tgt": "y", "deg": 1}]}}}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_koszul")).args(["validate", &dangling.to_string_lossy()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'y'"));

    // a·a = 1 with |a| = 1 breaks the grading
    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"categories": {"bad": {"objects": ["o"], "arrows": [{"name": "1", "src": "o", "tgt": "o", "deg": 0},
            {"name": "a", "src": "o", "tgt": "o", "deg": 1}], "unit_arrows": {"o": "1"}, "differential": [["1", "a", 1]]}}}"#,
    )
    .unwrap();
    assert_eq!(koszul(&["validate", &invalid.to_string_lossy()]).0, 1);

    assert_eq!(koszul(&["hh", &path("categories.json"), "exterior"]).0, 2);
    let (code, out) = koszul(&["hh", &path("categories.json"), "exterior", "--mode", "stabilize:3", "--degree-window", "0..2"]);
    assert!(code == 0 || code == 2, "{out}");
}

#[test]
fn text_and_json_agree_on_numbers() {
    let cases: Vec<(&str, &str, Vec<&str>, Vec<&str>)> = vec![
        ("validate", "categories.json", vec![], vec![]),
        ("bar", "categories.json", vec!["A3"], vec!["--weight-cap", "3"]),
        ("cobar", "coalgebras.json", vec!["tensor3"], vec!["--degree-window", "0..3"]),
        ("materialize", "coalgebras.json", vec!["path3"], vec!["--weight-cap", "2"]),
        ("adjoint-check", "adjunction_f2.json", vec!["arrow", "A2"], vec![]),
        ("conv", "adjunction_f2.json", vec!["prim_neg", "dual"], vec![]),
        ("mc-enum", "adjunction_f2.json", vec!["prim_neg", "dual"], vec![]),
        ("mc-cat", "adjunction_f2.json", vec!["prim_neg", "dual"], vec!["--degree-window", "-1..1"]),
        ("ihom", "adjunction_f2.json", vec!["arrow", "A2"], vec!["--weight-cap", "2"]),
        ("ez-check", "two_primitives.json", vec!["p1", "p2"], vec![]),
        ("hh", "dual_numbers.json", vec!["dual"], vec![]),
        ("hh-vs-mc", "dual_numbers.json", vec!["dual"], vec!["--degree-window", "0..2"]),
    ];
    for (cmd, file, names, flags) in cases {
        let text = std::fs::read_to_string(corpus(file)).unwrap();
        let ws = parse(&text, None).unwrap();
        let mut opts = Options::default();
        for pair in flags.chunks(2) {
            match pair[0] {
                "--weight-cap" => opts.weight_cap = Some(pair[1].parse().unwrap()),
                "--degree-window" => opts.degree_window = Some(koszul_cli::commands::parse_window(pair[1]).unwrap()),
                _ => unreachable!(),
            }
        }
        let names: Vec<String> = names.into_iter().map(String::from).collect();
        let report = run(cmd, &names, &ws, &opts).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        assert_eq!(report.status, Status::Ok, "{cmd}: {}", report.text());
        let mut from_json = vec![];
        json_numbers(&report.json(), &mut from_json);
        from_json.sort();
        assert_eq!(text_numbers(&report.text()), from_json, "{cmd}");

        let mut args = vec![cmd.to_string(), path(file)];
        args.extend(names.iter().cloned());
        args.extend(flags.iter().map(|s| s.to_string()));
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = koszul(&a);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(out, report.text(), "{cmd}: binary and library disagree");
    }
}

#[test]
fn seeded_bar_is_reproducible() {
    let a = koszul(&["bar", &path("categories.json"), "dual", "--seed", "11", "--out", "json"]);
    let b = koszul(&["bar", &path("categories.json"), "dual", "--seed", "11", "--out", "json"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
