use std::process::Command;

use braid_census::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("braid-census").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn count_reports_record() {
    let (code, out, _) = call(&["count", "--n", "3", "--k", "5", "--threads", "1"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["g"], 28);
    assert_eq!(v["n"], 3);
    assert_eq!(v["mode"], "plain");
    let pos: Vec<usize> = ["\"n\"", "\"k\"", "\"g\"", "\"mode\"", "\"engine_version\"", "\"elapsed_ms\""]
        .iter()
        .map(|key| out.find(key).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{out}");
    assert_eq!(v.as_object().unwrap().len(), 6);
    let (_, out, _) = call(&["count", "--n", "3", "--k", "5", "--prune"]);
    assert_eq!(json(&out)["mode"], "pruned");
}

#[test]
fn table_csv() {
    let (code, out, _) = call(&["table", "--n", "3", "--kmax", "4", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "n,k,g\n3,0,1\n3,1,4\n3,2,10\n3,3,16\n3,4,26\n");
}

#[test]
fn verify_suites_pass() {
    let (code, out, _) = call(&["verify", "--suite", "b3-closed-form", "--kmax", "30"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(json(&out)["passed"], true);
    for suite in ["b2", "cyclicity", "bounds", "witnesses", "tightness", "symmetry", "prune-consistency"] {
        let (code, out, _) = call(&["verify", "--suite", suite, "--kmax", "4"]);
        let v = json(&out);
        assert_eq!(code, EXIT_OK, "{suite}: {out}");
        assert_eq!(v["suite"], suite);
        assert!(v["checked"].as_u64().unwrap() > 0);
    }
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.svg");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["render", "--coords", "(0,0,2,3,1,0,0)", "--out", p]);
    assert_eq!(code, EXIT_OK);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("<svg"));
    assert_eq!(json(&out)["bytes"], svg.len());
    let (code, _, _) = call(&["render", "--coords", "(0,0,2,3,1,0,0)", "--closed", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(std::fs::read_to_string(&path).unwrap().contains("stroke-dasharray"));
}

#[test]
fn usage_errors() {
    let (code, _, err) = call(&["count", "--n", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
    assert_eq!(call(&["count", "--n", "3", "--k", "1", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    let (code, _, err) = call(&["render", "--coords", "(0,5,1,0,0)", "--out", "/nonexistent/x.svg"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("a_1"), "{err}");
    assert_eq!(call(&["render", "--coords", "0,0", "--out", "x.svg"]).0, EXIT_USAGE);
    assert_eq!(call(&["bounds", "--n", "1", "--kmax", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["ratios", "--n", "4", "--kmax", "3", "--source", "closedform"]).0, EXIT_USAGE);
    assert_eq!(call(&["ratios", "--n", "3", "--kmax", "3", "--rho", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["count", "--n", "0", "--k", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn bounds_and_ratios() {
    let (code, out, _) = call(&["bounds", "--n", "4", "--kmax", "6", "--with-census"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 7);
    assert_eq!(v[2]["g"], 22);
    assert_eq!(v[2]["lower"], "6");
    assert_eq!(v[2]["upper"], "800/3");
    assert_eq!(v[2]["verdict"], "holds");
    let (_, out, _) = call(&["bounds", "--n", "4", "--kmax", "1"]);
    assert_eq!(json(&out)[0]["verdict"], "unchecked");

    let (code, out, _) = call(&["ratios", "--n", "4", "--kmax", "7", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,k,g,ratio_k,ratio_shift,residue"));
    let last: Vec<&str> = lines.nth(6).unwrap().split(',').collect();
    assert_eq!(&last[..3], ["4", "7", "516"]);
    assert_eq!(last[3].parse::<f64>().unwrap(), 516.0 / 7f64.powi(4));
    assert_eq!(last[4].parse::<f64>().unwrap(), 516.0 / 11f64.powi(4));
    assert_eq!(last[5], "1");
    let (_, out, _) = call(&["ratios", "--n", "3", "--kmax", "1000", "--source", "closedform"]);
    let v = json(&out);
    assert!((v[999]["normalized"].as_f64().unwrap() / 8.0 - 1.0).abs() < 0.03);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let (pa, pb) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(call(&["table", "--n", "3", "--kmax", "3", "--cache", pa]).0, EXIT_OK);
    assert_eq!(call(&["count", "--n", "4", "--k", "2", "--cache", pb]).0, EXIT_OK);
    let (code, out, _) = call(&["cache", "merge", "--path", pa, "--from", pb]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["added"], 1);
    let (_, out, _) = call(&["cache", "show", "--path", pa]);
    assert_eq!(json(&out).as_array().unwrap().len(), 5);

    // A stored value that disagrees with another source is rejected.
    std::fs::write(&b, "{\"n\":3,\"k\":2,\"g\":11,\"mode\":\"plain\",\"engine_version\":\"x\",\"elapsed_ms\":0}\n").unwrap();
    let (code, _, err) = call(&["cache", "merge", "--path", pa, "--from", pb]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("conflict"), "{err}");
    assert_eq!(call(&["cache", "merge", "--path", pa]).0, EXIT_USAGE);
}

#[test]
fn binary_exit_codes_and_thread_env() {
    let bin = env!("CARGO_BIN_EXE_braid-census");
    let out = Command::new(bin).args(["count", "--n", "4", "--k", "5"]).env("CENSUS_THREADS", "2").output().unwrap();
    assert!(out.status.success());
    assert_eq!(json(std::str::from_utf8(&out.stdout).unwrap())["g"], 206);
    let out = Command::new(bin).args(["count", "--n", "4", "--k", "5"]).env("CENSUS_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAILURE));
    let out = Command::new(bin)
        .args(["count", "--n", "4", "--k", "5", "--threads", "2"])
        .env("CENSUS_THREADS", "zero")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(bin).args(["count", "--k", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin).args(["table", "--n", "3", "--kmax", "3"]).output().unwrap();
    assert!(out.status.success());
    assert!(!out.stderr.is_empty());
    assert!(json(std::str::from_utf8(&out.stdout).unwrap()).is_array());
}
