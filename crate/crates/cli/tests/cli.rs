use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn connexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_connexp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json", "--no-cache"]);
    let out = connexp(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ratio(v: &Value) -> String {
    format!("{}/{}", v["numerator"].as_str().unwrap(), v["denominator"].as_str().unwrap())
}

#[test]
fn triangulation_series() {
    let v = json(&["series", "--model", "triangulation", "-r", "3"]);
    let got: Vec<String> = v["coefficients"].as_array().unwrap().iter().map(ratio).collect();
    assert_eq!(got, ["5/36", "695/2592", "216305/279936"]);
    assert_eq!(v["coefficients"][0]["order"], 1);
    assert_eq!(v["model"], "triangulation");
    assert_eq!(v["r"], 3);
    assert!(v["convention"].is_string());

    let table = stdout(&connexp(&["series", "--model", "triangulation", "-r", "3", "--no-cache"]));
    assert!(table.contains("216305/279936"));
}

#[test]
fn graph_expansion_at_twenty() {
    let v = json(&["expand", "--model", "graph", "-r", "4", "--at", "20"]);
    let d: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["derivative"].as_str().unwrap()).collect();
    assert_eq!(d, ["1", "0", "2", "24"]);
    let value = ratio(&v["evaluations"][0]["value"]);
    assert_eq!(value, "147568323090123507513/147573952589676412928");
}

#[test]
fn verify_graph() {
    let out = connexp(&["verify", "--model", "graph", "--max-n", "4", "--no-cache"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("all matched"));
    let v = json(&["verify", "--model", "graph", "--max-n", "4"]);
    let connected: Vec<String> = v["reports"][0]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["quantity"] == "connected")
        .map(|r| ratio(&r["reference"]))
        .collect();
    assert_eq!(connected, ["1/1", "1/1", "4/1", "38/1"]);
}

#[test]
fn verify_all_builtins_small() {
    let out = connexp(&["verify", "--max-n", "3", "--no-cache", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["model"].as_str().unwrap()).collect();
    assert!(names.contains(&"comb_map") && names.contains(&"origami"));
    assert!(!names.contains(&"triangulation"));
}

#[test]
fn exit_codes() {
    assert_eq!(connexp(&["series", "--model", "nope", "--no-cache"]).status.code(), Some(2));
    assert_eq!(connexp(&["series", "--bogus"]).status.code(), Some(2));
    assert_eq!(connexp(&["series", "--no-cache"]).status.code(), Some(2));
    assert_eq!(
        connexp(&["series", "--model", "multigraph", "--param", "q=1", "--no-cache"]).status.code(),
        Some(2)
    );
    let off = connexp(&["exact", "--model", "comb_map", "--at", "3", "--no-cache"]);
    assert_eq!(off.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&off.stderr).contains("off the lattice"));
    let r = json(&["exact", "--model", "comb_map", "--range", "3..8"]);
    let ns: Vec<u64> = r["values"].as_array().unwrap().iter().map(|x| x["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [4, 6, 8]);
    let cls = connexp(&["series", "--model", "graph", "--no-cache"]);
    assert_eq!(cls.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&cls.stderr).contains("term list"));
}

#[test]
fn params_and_inline_ids_agree() {
    let a = json(&["series", "--model", "ogem", "--param", "D=3", "-r", "3"]);
    let b = json(&["series", "--model", "ogem(D=3)", "-r", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["model"], "ogem(D=3)");
    let got: Vec<String> = a["coefficients"].as_array().unwrap().iter().map(ratio).collect();
    assert_eq!(got[..2], ["0/1", "1/1"]);
}

#[test]
fn json_is_byte_stable() {
    let args = ["derivative", "--model", "origami", "-r", "8", "--format", "json", "--no-cache"];
    assert_eq!(connexp(&args).stdout, connexp(&args).stdout);
}

fn with_cache(dir: &Path, args: &[&str]) -> Vec<u8> {
    let mut all = args.to_vec();
    let d = dir.to_str().unwrap();
    all.extend(["--cache-dir", d]);
    let out = connexp(&all);
    assert!(out.status.success());
    out.stdout
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["series", "--model", "quad_sts", "-r", "4", "--format", "json"],
        &["exact", "--model", "comb_map", "--range", "2..8", "--decimal", "5"],
        &["connected", "--model", "digraph", "-r", "6"],
        &["diagnose", "--model", "comb_map", "--window", "5..10"],
    ];
    for args in cases {
        let mut fresh = args.to_vec();
        fresh.push("--no-cache");
        let expected = connexp(&fresh).stdout;
        assert_eq!(with_cache(dir.path(), args), expected, "first run {args:?}");
        assert_eq!(with_cache(dir.path(), args), expected, "cached run {args:?}");
    }
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 4);
    for f in files {
        fs::write(f.unwrap().path(), "garbage").unwrap();
    }
    for args in cases {
        let mut fresh = args.to_vec();
        fresh.push("--no-cache");
        assert_eq!(with_cache(dir.path(), args), connexp(&fresh).stdout, "after corruption {args:?}");
    }
}

#[test]
fn custom_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    fs::write(&path, r#"{"label": "fact", "period": 1, "terms": [1, 1, 2, 6, 24, 120, "720"]}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["connected", "--custom", p, "-r", "6"]);
    let c: Vec<&str> = v["values"].as_array().unwrap().iter().map(|x| x["value"].as_str().unwrap()).collect();
    assert_eq!(c, ["0", "1", "1", "2", "6", "24", "120"]);
    assert_eq!(v["model"], "custom:fact");
    let beyond = connexp(&["connected", "--custom", p, "-r", "9", "--no-cache"]);
    assert_eq!(beyond.status.code(), Some(1));

    fs::write(&path, r#"{"label": "bad", "period": 1, "terms": [2, 1]}"#).unwrap();
    let bad = connexp(&["coeffs", "--custom", p, "--no-cache"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn models_listing() {
    let v = json(&["models"]);
    let ids: Vec<&str> = v["models"].as_array().unwrap().iter().map(|m| m["id"].as_str().unwrap()).collect();
    for id in ["graph", "origami", "comb_map", "ogem(D=3)", "triangulation", "gem3"] {
        assert!(ids.contains(&id), "{id}");
    }
}

#[test]
fn decimal_is_labeled() {
    let text = stdout(&connexp(&["series", "--model", "quadrangulation", "-r", "2", "--decimal", "4", "--no-cache"]));
    assert!(text.contains("3/16  ≈ 0.1875"));
    assert!(text.contains("display-only"));
    let v = json(&["series", "--model", "quadrangulation", "-r", "1", "--decimal", "3"]);
    assert_eq!(v["coefficients"][0]["decimal_display_only"], "0.188");
}

#[test]
fn diagnose_constant_like_custom() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ones.json");
    let terms: Vec<String> = (0..25).map(|_| "1".to_string()).collect();
    fs::write(&path, format!(r#"{{"label": "ones", "period": 1, "terms": [{}]}}"#, terms.join(","))).unwrap();
    let v = json(&["diagnose", "--custom", path.to_str().unwrap(), "--raw"]);
    assert_eq!(v["verdict"], "INCONSISTENT");
    let g = json(&["diagnose", "--model", "graph"]);
    assert_eq!(g["verdict"], "CONSISTENT");
}
