//! End-to-end runs of the `qwitt` binary.

use std::path::Path;
use std::process::{Command, Output};

use qwitt::report::{Report, Status};
use sha2::{Digest, Sha256};

fn qwitt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwitt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn sha(bytes: &[u8]) -> Vec<u8> {
    Sha256::digest(bytes).to_vec()
}

#[test]
fn wittcalc_outputs() {
    let o = qwitt(&["wittcalc", "add", "--ring", "z", "--m", "2", "--x", "(1,0)", "--y", "(1,0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(2, -1)");
    let o = qwitt(&["wittcalc", "ghost", "--ring", "z", "--m", "2", "--x", "(1,2)"]);
    assert_eq!(stdout(&o).trim(), "1: 1\n2: 5");
    let o = qwitt(&["qwitt", "cmap", "--m", "2", "--lambda", "z", "--element", "(1,1)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["c_map"], "2 + 1*q");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qwitt(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qwitt(&["wittcalc", "add", "--ring", "z", "--m", "2", "--x", "(1"]).status.code(), Some(2));
    assert_eq!(qwitt(&["verify", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(qwitt(&["no-such-command"]).status.code(), Some(2));
}

const SMALL: &[&str] = &["verify", "--suite", "ghost-hom,qv", "--m", "2,4", "--ring", "f2", "--trials", "2"];

#[test]
fn verify_is_deterministic_across_runs_and_thread_counts() {
    let one = qwitt(&[SMALL, &["--jobs", "1"]].concat());
    let two = qwitt(&[SMALL, &["--jobs", "2"]].concat());
    let again = qwitt(&[SMALL, &["--jobs", "1"]].concat());
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(sha(&one.stdout), sha(&two.stdout));
    assert_eq!(sha(&one.stdout), sha(&again.stdout));
    let report = Report::parse(&stdout(&one)).unwrap();
    assert!(!report.records.is_empty());
    assert!(report.records.iter().all(|r| r.check.status == Status::Pass));
    assert_eq!(Report::parse(&report.to_json()).unwrap().to_json(), report.to_json());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"suites": ["ghost-hom"], "ms": [2, 3], "rings": ["f3"], "trials": 2}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = qwitt(&["verify", "--config", cfg]);
    let report = Report::parse(&stdout(&o)).unwrap();
    assert_eq!(report.records.len(), 2);
    let o = qwitt(&["verify", "--config", cfg, "--m", "4"]);
    let report = Report::parse(&stdout(&o)).unwrap();
    assert_eq!(report.records.len(), 1);
    assert!(report.records[0].key.contains("m=4"));
    std::fs::write(dir.path().join("bad.json"), r#"{"suites": ["ghost-hom"], "colour": 1}"#).unwrap();
    let o = qwitt(&["verify", "--config", dir.path().join("bad.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = qwitt(&[SMALL, &["--emit", "csv", "--out", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,name,params,status,witness,stabilized,runtime_ms"));
    assert!(lines.all(|l| l.contains(",pass,")));
}

#[test]
fn shipped_golden_values_match() {
    let o = Command::new(env!("CARGO_BIN_EXE_qwitt"))
        .args(["golden", "--check"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(stdout(&o).contains("no changes"));
}

fn golden_in(dir: &Path, path: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwitt"))
        .args(["golden", "--path", path.to_str().unwrap()])
        .env("QWITT_CACHE_DIR", dir.join("cache"))
        .output()
        .unwrap()
}

#[test]
fn golden_refuses_a_corrupted_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.json");
    let first = golden_in(dir.path(), &path);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).contains("created"));
    assert!(stdout(&golden_in(dir.path(), &path)).contains("no changes"));
    let before = std::fs::read(&path).unwrap();

    let table = dir.path().join("cache").join("witt_table_m2.txt");
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.contains("P2 = 2*X2*Y2"));
    std::fs::write(&table, text.replace("P2 = 2*X2*Y2", "P2 = 3*X2*Y2")).unwrap();
    let bad = golden_in(dir.path(), &path);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(std::fs::read(&path).unwrap(), before);
}
