use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const W_INSTANCE: &str = r#"{"omega":[[1,0],[1,1],[0,1]],"lambda":[0.2,0.5,0.3],"horizon":6,"capacity":[6,6]}"#;
const N_INSTANCE: &str = r#"{"omega":[[1,1],[0,1]],"lambda":[0.5,0.5],"horizon":2,"capacity":[1,1]}"#;
const M_TEMPLATE: &str = r#"{"omega":[[1,1,0],[0,1,1]],"lambda":[0.5,0.5],"horizon":1,"capacity":[4,3,3]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slotoffer")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_writes_value_table() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "n.json", N_INSTANCE);
    let out_path = dir.path().join("table.json");
    for (model, value) in [("nonseq", 1.625), ("seq", 1.75), ("fullinfo", 1.75)] {
        let out = run(&["solve", "--instance", &inst, "--model", model, "--out", out_path.to_str().unwrap()]);
        let summary = stdout_json(&out);
        assert!((summary["value"].as_f64().unwrap() - value).abs() < 1e-12);
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        assert_eq!(doc["radices"], serde_json::json!([2, 2]));
        assert!(doc["actions"].is_array());
    }
    let out = run(&[
        "solve",
        "--instance",
        &inst,
        "--model",
        "seq",
        "--exhaustive",
        "--partial-covers",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!((stdout_json(&out)["value"].as_f64().unwrap() - 1.75).abs() < 1e-12);
}

#[test]
fn fluid_reports_objective_and_policy() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "n.json", N_INSTANCE);
    let out_path = dir.path().join("fluid.json");
    let out = run(&["fluid", "--instance", &inst, "--scale", "2", "--out", out_path.to_str().unwrap()]);
    let summary = stdout_json(&out);
    assert!((summary["objective"].as_f64().unwrap() - 10.0 / 3.0).abs() < 1e-8);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["pstar"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "w.json", W_INSTANCE);
    let args = ["simulate", "--instance", &inst, "--policy", "random-seq", "--days", "500", "--seed", "4"];
    let a = stdout_json(&run(&args));
    assert_eq!(a, stdout_json(&run(&args)));
    assert_eq!(a["days"], 500);
}

#[test]
fn policy_map_csv() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "w.json", W_INSTANCE);
    let out = run(&["policy-map", "--instance", &inst, "--model", "seq", "--fix", "n=6", "--axes", "m1,m2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m1,m2,n,action,unique,value"));
    assert!(text.lines().any(|l| l.starts_with("3,3,6,{1}-{2},")));
    assert!(text.lines().any(|l| l.starts_with("3,4,6,{2}-{1},")));
    assert_eq!(text.lines().count(), 50);
}

#[test]
fn table_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let out = run(&["table", "--name", "drain-n", "--out", csv_path.to_str().unwrap()]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[7], "statistic");
    assert_eq!(reader.records().count(), 4 * 3 * 3);

    let out = run(&["table", "--name", "seq-vs-nonseq-n", "--format", "json"]);
    let doc = stdout_json(&out);
    let first = &doc["cells"][0];
    assert_eq!(first["row"], "N=20");
    assert!((first["average"].as_f64().unwrap() - 10.6).abs() < 0.2);

    let out = run(&["table", "--name", "m-gap", "--markdown"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("| N=20 | 45 |"));
}

#[test]
fn multiday_run() {
    let dir = tempfile::tempdir().unwrap();
    let template = write(dir.path(), "m.json", M_TEMPLATE);
    let args = [
        "multiday",
        "--template",
        &template,
        "--policy",
        "pi1",
        "--demand",
        "poisson",
        "--D",
        "2",
        "--seed",
        "5",
        "--days",
        "150",
        "--warmup",
        "50",
        "--daily-demand",
        "10",
    ];
    let a = stdout_json(&run(&args));
    assert_eq!(a, stdout_json(&run(&args)));
    assert_eq!(a["recorded_days"], 100);
    assert!(a["mean"].as_f64().unwrap() <= 10.0);
}

fn error_of(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

#[test]
fn errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"omega":[[0,0]],"lambda":[2],"horizon":0,"capacity":[1,1]}"#);
    let err = error_of(&run(&["solve", "--instance", &bad, "--model", "seq", "--out", "x.json"]));
    assert_eq!(err["kind"], "invalid_instance");
    assert!(err["message"].as_str().unwrap().contains("horizon"));

    let garbage = write(dir.path(), "g.json", "{not json");
    assert_eq!(error_of(&run(&["simulate", "--instance", &garbage, "--policy", "drain"]))["kind"], "parse");

    let n = write(dir.path(), "n.json", N_INSTANCE);
    assert_eq!(error_of(&run(&["simulate", "--instance", &n, "--policy", "nope"]))["kind"], "unknown_policy");
    assert_eq!(error_of(&run(&["simulate", "--instance", &n, "--policy", "pi1"]))["kind"], "policy_not_applicable");
    assert_eq!(
        error_of(&run(&["policy-map", "--instance", &n, "--model", "seq", "--fix", "m1=5,n=1", "--axes", "m2,m1"]))
            ["kind"],
        "config"
    );
    assert_eq!(
        error_of(&run(&["policy-map", "--instance", &n, "--model", "seq", "--fix", "n=9", "--axes", "m1,m2"]))["kind"],
        "out_of_lattice"
    );
    assert_eq!(error_of(&run(&["table", "--name", "nope"]))["kind"], "config");
}
