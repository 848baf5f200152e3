use std::process::{Command, Output};

use serde_json::Value;

fn twoxor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoxor")).args(args).env_remove("TWOXOR_ENUM_CAP").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = twoxor(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sat_prob_examples() {
    let v = json(&["sat-prob", "--n", "2", "--m", "1"]);
    assert_eq!(v["results"]["prob_sat"]["exact"], "3/4");
    assert_eq!(v["provenance"]["method"], "exact");
    let v = json(&["sat-prob", "--n", "1000", "--m", "375", "--method", "limit"]);
    assert!((v["results"]["prob_sat"]["float"].as_f64().unwrap() - 0.25f64.powf(0.25)).abs() < 1e-6);
    let v = json(&["sat-prob", "--n", "400", "--m", "200", "--method", "critical"]);
    assert!(v["results"]["tail_estimate"].as_f64().unwrap() < 1e-8);
}

#[test]
fn func_prob_examples() {
    let p = |part: &str, m: &str| json(&["func-prob", "--partition", part, "--m", m])["results"]["prob_function"]["exact"].clone();
    assert_eq!(p("2", "1"), "1/4");
    assert_eq!(p("3", "2"), "2/27");
    assert_eq!(p("2+2", "1"), "0");
    let v = json(&["func-prob", "--partition", "30", "--m", "29", "--method", "asympt"]);
    assert_eq!(v["results"]["regime"], "single-block-case-1");
}

#[test]
fn census_oracle_and_distribution() {
    assert_eq!(json(&["census", "--connected", "--n", "3", "--m", "2"])["results"]["count"]["exact"], "3");
    let v = json(&["oracle", "--n", "2", "--m", "2"]);
    assert_eq!(v["results"]["total"], 256);
    assert_eq!(v["provenance"]["method"], "oracle");

    let out = twoxor(&["distribution", "--n", "3", "--m", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "prob_class").unwrap();
    let mut total = 0i64;
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        // every probability here has denominator dividing 1296
        let (a, b) = cells[col].split_once('/').unwrap_or((cells[col], "1"));
        total += a.parse::<i64>().unwrap() * (1296 / b.parse::<i64>().unwrap());
        rows += 1;
    }
    assert_eq!(rows, 4);
    assert_eq!(total, 1296);
}

#[test]
fn exit_codes() {
    let out = twoxor(&["sat-prob", "--n", "0", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"]["kind"], "usage");

    assert_eq!(twoxor(&["sat-prob", "--n", "2"]).status.code(), Some(2));
    assert_eq!(twoxor(&["sat-prob", "--n", "100", "--m", "80", "--method", "limit"]).status.code(), Some(3));
    assert_eq!(twoxor(&["func-prob", "--partition", "3+2+1+1", "--m", "6", "--method", "asympt"]).status.code(), Some(3));
    assert_eq!(twoxor(&["sat-prob", "--n", "5", "--m", "5000"]).status.code(), Some(4));

    let out = Command::new(env!("CARGO_BIN_EXE_twoxor"))
        .args(["oracle", "--n", "2", "--m", "2"])
        .env("TWOXOR_ENUM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn config_file_is_read_and_checked() {
    let dir = std::env::temp_dir().join(format!("twoxor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.toml");
    std::fs::write(&good, "enum_cap = 100\n").unwrap();
    let out = twoxor(&["--config", good.to_str().unwrap(), "oracle", "--n", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(4));
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(twoxor(&["--config", bad.to_str().unwrap(), "sat-prob", "--n", "2", "--m", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["simulate", "--n", "6", "--m", "3", "--trials", "3000", "--seed", "5", "--compare"];
    let a = twoxor(&args).stdout;
    assert_eq!(a, twoxor(&args).stdout);
    let mut par = args.to_vec();
    par.extend(["--parallel", "3"]);
    assert_eq!(a, twoxor(&par).stdout);
}

#[test]
fn plot_data_csv() {
    let out = twoxor(&["plot-data", "--n", "20", "--steps", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y");
    assert_eq!(lines.len(), 6);
}
