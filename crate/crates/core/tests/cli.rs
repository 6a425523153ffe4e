use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn symprot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symprot")).args(args).output().expect("run symprot")
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let compiled = schema(schema_name);
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{schema_name}: {msgs:?}\n{doc}");
}

const COMMANDS: &[(&str, &[&str])] = &[
    ("certify", &["certify", "--space", "hm:1", "--state", "psi4", "--samples", "100"]),
    ("certify", &["certify", "--state", "phi1", "--seed", "7"]),
    ("search", &["search", "--space", "h0", "--n", "4"]),
    ("search", &["search", "--space", "hm:2", "--n", "4", "--sector", "0"]),
    ("catalog", &["catalog"]),
    ("catalog", &["catalog", "--space", "h0", "--n", "5"]),
    ("catalog", &["catalog", "--state", "pair:m=1,N=4"]),
    ("entangle", &["entangle", "--state", "psi4"]),
    ("dfs", &["dfs", "--carrier", "pair:m=1,N=2", "--d", "4", "--loss", "0.2"]),
    ("dfs", &["dfs", "--carrier", "phi3", "--d", "3", "--loss", "0.6", "--two-way", "true", "--seed", "3"]),
    ("capacity", &["capacity", "--two-way", "false", "--eps", "0.25"]),
    ("capacity", &["capacity", "--two-way"]),
    ("validate", &["validate", "--space", "hm:3", "--seed", "4"]),
];

#[test]
fn outputs_validate_and_repeat_byte_for_byte() {
    for (name, args) in COMMANDS {
        let first = symprot(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(doc["schema"], "symprot/1");
        assert_valid(name, &doc);
        let second = symprot(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn documented_examples() {
    let out = symprot(&["certify", "--space", "hm:1", "--state", "psi4", "--samples", "100"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["verdict"], "Protected");
    let out = symprot(&["search", "--space", "h0", "--n", "4"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["rays"].as_array().unwrap().len(), 5);
    let out = symprot(&["capacity", "--two-way", "false", "--eps", "0.25"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["capacity"], 0.5);
}

#[test]
fn exit_codes() {
    assert_eq!(symprot(&["certify", "--state", "psi3", "--expect", "protected"]).status.code(), Some(1));
    assert_eq!(symprot(&["certify", "--state", "psi4", "--expect", "protected"]).status.code(), Some(0));
    assert_eq!(symprot(&["certify", "--state", "psi9"]).status.code(), Some(2));
    assert_eq!(symprot(&["search", "--space", "h0"]).status.code(), Some(2));
    assert_eq!(symprot(&["bogus"]).status.code(), Some(2));
    assert_eq!(symprot(&["certify", "--state-file", "/nonexistent/state.json"]).status.code(), Some(2));
    assert_eq!(symprot(&["--help"]).status.code(), Some(0));
}

#[test]
fn n_max_comes_from_the_environment() {
    let run = |nmax: &str| {
        Command::new(env!("CARGO_BIN_EXE_symprot"))
            .args(["search", "--space", "h0", "--n", "4"])
            .env("SYMPROT_NMAX", nmax)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("3"), Some(2));
    assert_eq!(run("4"), Some(0));
    assert_eq!(run("many"), Some(2));
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symprot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn state_files_round_trip_through_search_and_certify() {
    let out = symprot(&["search", "--space", "hm:1", "--n", "2"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let state = &doc["result"]["rays"][0]["state"];
    assert_valid("fock_state", state);
    let path = scratch("ray.json");
    std::fs::write(&path, serde_json::to_string(state).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let out = symprot(&["certify", "--state-file", p, "--expect", "protected"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = symprot(&["entangle", "--state-file", p]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["slater_rank"], 4);
    let out = symprot(&["validate", "--state-file", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_valid("validate", &serde_json::from_slice(&out.stdout).unwrap());

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"space": "h0", "n": 1, "amplitudes": [[1, 0]]}"#).unwrap();
    assert_eq!(symprot(&["certify", "--state-file", bad.to_str().unwrap()]).status.code(), Some(2));
    let unnormalized = scratch("unnormalized.json");
    std::fs::write(&unnormalized, r#"{"space": "h0", "n": 1, "amplitudes": [[1, 0], [1, 0]]}"#).unwrap();
    assert_eq!(symprot(&["validate", "--state-file", unnormalized.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn matrix_files_are_validated() {
    let good = scratch("good.json");
    std::fs::write(&good, r#"{"space": "h0", "matrix": [[[0.5, 0], [0.1, 0.2]], [[0.1, 0.2], [0.5, 0]]]}"#).unwrap();
    let out = symprot(&["validate", "--matrix-file", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let broken = scratch("broken.json");
    std::fs::write(&broken, r#"{"space": "h0", "matrix": [[[0.5, 0], [0.1, 0]], [[0.3, 0], [0.5, 0]]]}"#).unwrap();
    let out = symprot(&["validate", "--matrix-file", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["ok"], false);
}

#[test]
fn csv_and_pretty_outputs() {
    let out = symprot(&["dfs", "--output", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 102);
    assert!(text.starts_with("epsilon,capacity\n0,1\n"));
    let out = symprot(&["search", "--space", "hm:1", "--n", "2", "--output", "pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("|1,0,1,0⟩"), "{text}");
    assert!(text.contains("tau = -1"));
}
