use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cornerlab")).args(args).env_remove("CORNERLAB_CAP").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const GMIC: &str = r#"{"breakpoints":["0","2/5"],"values":["0","1"]}"#;

#[test]
fn function_check_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "gmic.json", GMIC);
    let out = run(&["fn", "check", "--function", &f, "--b", "2/5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["minimal"], true);
    assert_eq!(r["result"]["liftable"], true);
    assert_eq!(r["result"]["psi"]["s_plus"], "5/2");
    assert_eq!(r["result"]["psi"]["s_minus"], "5/3");
}

#[test]
fn function_check_negative() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "half.json", r#"{"breakpoints":["0","2/5"],"values":["0","1/2"]}"#);
    let out = run(&["fn", "check", "--function", &f, "--b", "2/5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["report"]["symmetric"], false);
}

#[test]
fn extract_theta_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "shift.json", r#"{"breakpoints":["0","2/5"],"values":["0","1"],"shift":{"sqrt2":"1/3"}}"#);
    let out = run(&["fn", "extract-theta", "--function", &f, "--K", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["tags"][0]["exact"], "1/3");
    let out = run(&["fn", "lift-slope", "--function", &f]);
    assert_eq!(report(&out)["result"]["lipschitz"], "5/2");
}

#[test]
fn corner_compute_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"n":1,"b":["2/5"],"P":[["1/5"],["2/5"]]}"#);
    let out = run(&["corner", "compute", "--instance", &good, "--facets"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["E"], serde_json::json!([[0, 1], [2, 0]]));
    assert_eq!(r["result"]["complete"], true);
    assert_eq!(r["result"]["facets"].as_array().unwrap().len(), 3);

    let bad = write(dir.path(), "bad.json", r#"{"n":1,"b":["1"],"P":[["1/2"]]}"#);
    let out = run(&["corner", "compute", "--instance", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "error");

    let out = run(&["corner", "compute", "--instance", &dir.path().join("missing.json").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"n":1,"b":["1/2"],"P":[["1/8"]]}"#);
    let out = run(&["corner", "compute", "--instance", &inst, "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_cornerlab"))
        .args(["corner", "compute", "--instance", &inst])
        .env("CORNERLAB_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lift_commands() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(
        dir.path(),
        "lift.json",
        r#"{"n":1,"b":["2/5"],"P":[["1/5"],["2/5"]],"R":[["1"],["-1"]],"h":["5/2","5/3"],"d":["1/2","1"]}"#,
    );
    let out = run(&["lift", "eval", "--data", &data, "--point", "[1/5]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["pi"], "1/2");
    let out = run(&["lift", "validate", "--data", &data, "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["lift", "validate", "--data", &data, "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let inst = write(dir.path(), "i.json", r#"{"n":1,"b":["2/5"],"P":[["2/5"]]}"#);
    let out = run(&["lift", "facet-dominate", "--instance", &inst, "--facet", "[1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["dominated"], true);
    let out = run(&["lift", "facet-dominate", "--instance", &inst, "--facet", "[1]", "--rhs", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["lift", "separate", "--instance", &inst, "--point", "[0]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["kind"], "separator");
    let out = run(&["lift", "separate", "--instance", &inst, "--point", "[1]"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn examples_and_determinism() {
    let out = run(&["examples", "pure-integer", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let again = run(&["examples", "pure-integer", "--no-timing"]);
    assert_eq!(out.stdout, again.stdout);
    let out = run(&["examples", "not-closed", "--omega", "sqrt2", "--eps", "1/10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["k"], 5);
    let out = run(&["examples", "not-closed", "--omega", "pi"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--text", "examples", "not-closed", "--eps", "1/2"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("k: 1"));
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--only", "6", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["passed"], true);
    assert_eq!(run(&["selftest", "--only", "13"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}
