use std::path::Path;
use std::process::{Command, Output};

fn liegrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegrowth")).args(args).output().unwrap()
}

fn with_out(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegrowth")).args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn diameter_of_sl2_f7() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = with_out(&["diameter", "--type", "A1", "--p", "7", "--gens", "e1,f1"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let last = text.lines().last().unwrap();
    assert_eq!(last, "8,343");
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "diameter 8");
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(liegrowth(&["diameter", "--bogus"]).status.code(), Some(2));
    assert_eq!(liegrowth(&["diameter", "--type", "A1", "--p", "9", "--gens", "e1,f1"]).status.code(), Some(2));
    assert_eq!(liegrowth(&["random-pairs", "--type", "A1", "--p", "7"]).status.code(), Some(2));
    assert_eq!(liegrowth(&["--help"]).status.code(), Some(0));
}

#[test]
fn extremal_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = with_out(&["extremal", "--type", "A2", "--twist", "2", "--p", "7"], &dir.path().join("x.json"));
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let small = with_out(&["extremal", "--type", "A2", "--p", "5"], &dir.path().join("y.json"));
    assert_eq!(small.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"experiment": "witt", "p": [5], "seed": 1}"#).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = with_out(&["witt", "--config", cfg.to_str().unwrap(), "--samples", "20"], &a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = with_out(&["witt", "--p", "5", "--seed", "1", "--samples", "20"], &b);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    std::fs::write(&cfg, r#"{"experiment": "identity", "p": [5], "seed": 1}"#).unwrap();
    let o = liegrowth(&["witt", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn covering_json_reports_full_rank() {
    let o = liegrowth(&["covering", "--type", "A2", "--twist", "2", "--p", "7", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 8);
}
