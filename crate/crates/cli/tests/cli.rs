use std::path::Path;
use std::process::{Command, Output};

fn fusionkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn export(dir: &Path, name: &str) -> String {
    let out = fusionkit(&["catalog", "export", name]);
    assert!(out.status.success());
    let path = dir.join(format!("{name}.ring.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_exported_ising() {
    let dir = tempfile::tempdir().unwrap();
    let path = export(dir.path(), "ising");
    let out = fusionkit(&["validate", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "validate");
    assert_eq!(report["subject"], "ising");
    assert_eq!(report["pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn dot_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = export(dir.path(), "ising");
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    for target in [&a, &b] {
        let out = fusionkit(&["graph", "--dot", target.to_str().unwrap(), &path]);
        assert_eq!(out.status.code(), Some(0));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("graph ising {"));
}

#[test]
fn broken_associativity_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.ring.json");
    std::fs::write(
        &path,
        r#"{"labels":["1","eps","sigma"],"dual":[0,1,2],
           "tensor":[[1,1,0,1],[1,2,2,1],[2,1,2,1],[2,2,0,1],[2,2,1,2]]}"#,
    )
    .unwrap();
    let out = fusionkit(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], false);
    let assoc = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "associativity")
        .unwrap();
    assert_eq!(assoc["pass"], false);
    assert_eq!(assoc["witness"], serde_json::json!([1, 2, 2, 0]));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(fusionkit(&["validate", "--bogus", "x"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["validate", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["validate", "catalog:nonsense"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["dims", "--tolerance", "-1", "catalog:ising"]).status.code(), Some(2));
    let out = fusionkit(&["modular", "catalog:pointed_z2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no modular data"));
    assert!(out.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.ring.json");
    std::fs::write(&path, r#"{"labels":["1","a"],"dual":[0,1],"tensor":[[1,1,0,-1]]}"#).unwrap();
    assert_eq!(fusionkit(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn subcommands_on_catalog_entries() {
    let cases: &[&[&str]] = &[
        &["dims", "catalog:su2_k3"],
        &["index", "catalog:ising"],
        &["graph", "catalog:su2_k4"],
        &["double", "catalog:ising"],
        &["dg", "--group", "s3"],
        &["modular", "catalog:su2_k5"],
        &["multi", "--n", "3", "catalog:ising"],
        &["oracle", "--group", "z2", "--samples", "10", "--seed", "3"],
    ];
    for args in cases {
        let out = fusionkit(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let report = stdout_json(&out);
        assert_eq!(report["command"], args[0]);
        assert_eq!(report["pass"], true);
    }
}

#[test]
fn index_values() {
    let report = stdout_json(&fusionkit(&["index", "catalog:ising"]));
    let global = report["data"]["global_index"].as_f64().unwrap();
    assert!((global - 4.0).abs() < 1e-9);
    assert_eq!(report["data"]["even_part_ratio"]["grading_order"], 2);
}

#[test]
fn oracle_is_deterministic_per_seed() {
    let a = fusionkit(&["oracle", "--group", "z3", "--samples", "5", "--seed", "11"]);
    let b = fusionkit(&["oracle", "--group", "z3", "--samples", "5", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["seed"], 11);
}

#[test]
fn json_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = fusionkit(&["dims", "--json", path.to_str().unwrap(), "catalog:ising"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn group_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z2.group.json");
    std::fs::write(&path, r#"{"order":2,"mul":[[0,1],[1,0]]}"#).unwrap();
    let out = fusionkit(&["dg", "--group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["data"]["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn catalog_list_names_entries() {
    let out = fusionkit(&["catalog", "list"]);
    let list = stdout_json(&out);
    let names: Vec<&str> = list.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"ising") && names.contains(&"su2_k8") && names.contains(&"dg_s3"));
}
