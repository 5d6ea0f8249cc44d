use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tame_iwasawa::cli::validate_rank_report;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tame-iwasawa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tame-iwasawa")).args(args).output().unwrap()
}

fn run(sub: &str, config: &str, extra: &[&str]) -> Output {
    let path = scratch(&format!("{sub}-{:x}.json", hash(config, extra)), config);
    let mut args = vec![sub, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    bin(&args)
}

fn hash(config: &str, extra: &[&str]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (config, extra).hash(&mut h);
    h.finish()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const Q_MU5: &str =
    r#"{"schema_version": 1, "p": 5, "f": 1, "S": [7, 11], "lambda": {"mode": "table", "table": {"all": 0}}}"#;
const Q_SQRT2: &str = r#"{"schema_version": 1, "p": 3, "f": 8, "H": [7], "S": [5, 7, 13]}"#;

#[test]
fn rank_job_reports_total() {
    let out = run("rank", Q_MU5, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["field"]["p"], 5);
    assert_eq!(v["total"], 6);
    let ranks: Vec<u64> = v["records"].as_array().unwrap().iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [0, 5, 0, 1]);
    validate_rank_report(&v).unwrap();
}

#[test]
fn invalid_configs_exit_2() {
    let out = run("rank", r#"{"p": 3, "S": [3, 7]}"#, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("S must not contain p"));
    assert_eq!(run("rank", r#"{"p": 3, "f": 6, "S": [7]}"#, &[]).status.code(), Some(2));
    assert_eq!(run("chars", "not json", &[]).status.code(), Some(2));
    assert_eq!(bin(&["chars", "--config", "/nonexistent/job.json"]).status.code(), Some(2));
}

#[test]
fn missing_lambda_exits_3() {
    assert_eq!(run("rank", Q_SQRT2, &[]).status.code(), Some(3));
    let out = run("rank", Q_SQRT2, &["--assume-greenberg"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["conjectural"], true);
    validate_rank_report(&v).unwrap();
}

#[test]
fn lambda_table_file_and_out_file() {
    let table = scratch("table.json", r#"{"chi2": 2}"#);
    let target = std::env::temp_dir().join(format!("tame-iwasawa-cli-{}/report.json", std::process::id()));
    let out = run("rank", Q_SQRT2, &["--lambda-table", table.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    validate_rank_report(&v).unwrap();
    assert_eq!(v["conjectural"], false);
    let rec = v["records"].as_array().unwrap().iter().find(|r| r["lambda"]["provenance"] == "input-table").unwrap();
    assert_eq!(rec["lambda"]["value"], 2);
}

#[test]
fn reports_are_deterministic() {
    for sub in ["rank", "chars", "oracle", "lambda"] {
        let a = run(sub, Q_MU5, &[]);
        let b = run(sub, Q_MU5, &[]);
        assert_eq!(a.status.code(), Some(0), "{sub}");
        assert_eq!(a.stdout, b.stdout, "{sub}");
    }
}

#[test]
fn oracle_levels() {
    let job = r#"{"p": 3, "f": 7, "S": [2, 5, 11, 13, 7]}"#;
    let out = run("oracle", job, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["pass"] == true));
    let out = run("oracle", r#"{"p": 3, "S": [7]}"#, &["--levels", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run("oracle", r#"{"p": 3, "S": [7]}"#, &["--levels", "2,1"]).status.code(), Some(2));
}

#[test]
fn lambda_and_chars() {
    let out = run("lambda", r#"{"p": 37, "characters": ["omega^5"]}"#, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"][0]["lambda"], 1);
    assert_eq!(v["rows"][0]["mu_zero"], true);
    let out = run("chars", r#"{"p": 3, "f": 8, "H": [7]}"#, &[]);
    let v = json(&out);
    assert_eq!(v["group_order"], 4);
    assert_eq!(v["characters"].as_array().unwrap().len(), 4);
}
