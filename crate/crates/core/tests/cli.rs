use std::process::Command;

use proxilab::scenarios::{builtin, list_builtins, parse_scenarios, run_all, run_scenario, Status};
use proxilab::Error;
use serde_json::Value;

fn proxilab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_proxilab")).args(args).env_remove("PROXILAB_SEED").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const REQUIRED: [&str; 14] = [
    "e5",
    "zsum-halfball",
    "linf3-mideal-halfball",
    "triangle-3balls",
    "linf-32ip",
    "l1-32ip",
    "disk-strong-modulus",
    "mideal-uniform-modulus",
    "lift-subspace-sweep",
    "lift-ball-sweep",
    "lift-projection-set",
    "lift-modulus-constant",
    "jensen-average",
    "continuity-disk",
];

#[test]
fn list_builtins_includes_the_catalogue() {
    let (code, stdout, _) = proxilab(&["list-builtins", "--json"]);
    assert_eq!(code, 0);
    let list: Vec<Value> = serde_json::from_str(&stdout).unwrap();
    for name in REQUIRED {
        let entry = list.iter().find(|b| b["name"] == name).unwrap_or_else(|| panic!("{name} missing"));
        assert!(!entry["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn e5_report_through_the_cli() {
    let (code, stdout, stderr) = proxilab(&["run", "--scenario", "e5"]);
    assert_eq!(code, 0, "{stderr}");
    let reports: Vec<Value> = serde_json::from_str(&stdout).unwrap();
    let r = &reports[0];
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["residuals", "runtime_ms", "scenario", "status", "values", "witnesses"]);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["values"]["alpha"], 2.0);
    assert_eq!(r["values"]["epsilon"], 0.5);
    assert_eq!(r["values"]["witness"], serde_json::json!([0.0, 0.0]));
    assert!((r["values"]["d_witness_to_proj"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn config_errors_exit_with_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name": "bad", "check": "distance", "space": {"norm": {"kind": "lp", "dim": 2, "p": 0.5}}}"#,
    )
    .unwrap();
    let (code, _, stderr) = proxilab(&["run", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("space.norm"), "{stderr}");

    let (code, _, _) = proxilab(&["run", "--scenario", "no-such-builtin"]);
    assert_eq!(code, 2);

    std::fs::write(
        &path,
        r#"{"name": "bad", "check": "distance", "space": {"norm": {"kind": "l1", "dim": 2}},
        "body": {"kind": "norm_ball", "radius": 1}, "params": {"y": [1, 2]}}"#,
    )
    .unwrap();
    let (code, _, stderr) = proxilab(&["run", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("params"), "{stderr}");
}

#[test]
fn directory_runs_write_reports_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let scenarios = dir.path().join("scenarios");
    std::fs::create_dir(&scenarios).unwrap();
    std::fs::write(
        scenarios.join("b.json"),
        r#"{"name": "b", "check": "distance", "space": {"norm": {"kind": "linf", "dim": 2}},
            "body": {"kind": "norm_ball", "radius": 1}, "params": {"x": [3, 0], "expected": 2}}"#,
    )
    .unwrap();
    std::fs::write(
        scenarios.join("a.json"),
        r#"[{"name": "a", "check": "average", "space": {"norm": {"kind": "euclidean", "dim": 1}},
             "params": {"g": {"pieces": [{"w": 0.5, "x": [1]}, {"w": 0.5, "x": [-1]}]}}}]"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let csv = dir.path().join("out.csv");
    let (code, _, stderr) = proxilab(&[
        "run",
        "--scenario",
        scenarios.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0, "{stderr}");
    let reports: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["a", "b"]);
    let table = std::fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("scenario,status,key,value\n"));
    assert!(table.contains("b,pass,distance,2"));
}

#[test]
fn tolerance_overrides_flip_the_exit_code() {
    let (code, stdout, _) = proxilab(&["run", "--scenario", "linf3-mideal-halfball", "--tol", "residual=1e-12"]);
    assert_eq!(code, 1);
    let reports: Vec<Value> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(reports[0]["status"], "fail");
    let (code, _, _) = proxilab(&["run", "--scenario", "e5", "--tol", "oops"]);
    assert_eq!(code, 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_proxilab"));
        cmd.args(["run", "--scenario", "linf3-mideal-halfball"]).args(extra).env_remove("PROXILAB_SEED");
        if let Some(s) = env {
            cmd.env("PROXILAB_SEED", s);
        }
        let out = cmd.output().unwrap();
        let reports: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
        reports[0]["witnesses"].clone()
    };
    let base = run(None, &[]);
    let env = run(Some("99"), &[]);
    assert_ne!(base, env);
    assert_eq!(env, run(None, &["--seed", "99"]));
}

#[test]
fn reports_are_deterministic_modulo_runtime() {
    for name in ["linf3-mideal-halfball", "mideal-uniform-modulus", "jensen-average", "triangle-3balls"] {
        let s = builtin(name).unwrap();
        let a = run_scenario(&s).unwrap().body();
        let b = run_scenario(&s).unwrap().body();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{name}");
    }
}

#[test]
fn documented_examples() {
    let zsum = run_scenario(&builtin("zsum-halfball").unwrap()).unwrap();
    assert_eq!(zsum.status, Status::Fail);
    assert!((zsum.residuals[0] - (2f64.sqrt() - 1.0)).abs() < 1e-6);

    let mideal = run_scenario(&builtin("linf3-mideal-halfball").unwrap()).unwrap();
    assert_eq!(mideal.status, Status::Pass);
    assert_eq!(mideal.values["samples"], 200);
    assert!(mideal.values["max_residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn every_builtin_matches_its_expectation() {
    let scenarios: Vec<_> = list_builtins().iter().map(|b| builtin(b.name).unwrap()).collect();
    for (s, r) in scenarios.iter().zip(run_all(&scenarios, None)) {
        let r = r.unwrap_or_else(|e| panic!("{}: {e}", s.name));
        assert!(r.status.matches(s.expect), "{}: {:?} vs {:?}", s.name, r.status, s.expect);
        if r.status == Status::Fail {
            assert!(!r.witnesses.is_empty() || !r.residuals.is_empty(), "{}", s.name);
        }
    }
}

#[test]
fn missing_parameters_are_schema_errors() {
    let s = &parse_scenarios(
        r#"{"name": "m", "check": "lz_falsify", "space": {"norm": {"kind": "euclidean", "dim": 2}},
        "body": {"kind": "norm_ball", "radius": 1}, "params": {"x": [2, 0], "alpha": 1}}"#,
    )
    .unwrap()[0];
    match run_scenario(s) {
        Err(Error::Config { path, .. }) => assert!(path.starts_with("params"), "{path}"),
        other => panic!("{other:?}"),
    }
}
