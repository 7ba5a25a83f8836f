use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn rdl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rdl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (String, Value) {
    let out = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_s]);
    let o = rdl(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    (csv, sidecar)
}

#[test]
fn count_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, side) = run_to(
        dir.path(),
        "count.csv",
        &["count", "--bases", "3,4,5", "--limits", "10,100", "--zero", "excluded"],
    );
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    let hash = side["config_sha256"].as_str().unwrap();
    assert_eq!(first, format!("# config_sha256={hash}"));
    assert_eq!(lines.collect::<Vec<_>>(), vec!["n,count", "10,3", "100,13"]);
    // resolved defaults are recorded
    assert_eq!(side["config"]["digits"], serde_json::json!([0, 1]));
    assert_eq!(side["config"]["precision"], 64);
    assert_eq!(side["config"]["seed"], 0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["squares", "--n", "300", "--r", "1/4", "--density", "1/3", "--seed", "9"][..],
        &["geometry", "--theorem", "C2", "--deltas", "1/4,1/8", "--seed", "3"][..],
        &["slice", "--bases", "7,11,13", "--depth", "9"][..],
    ] {
        let (a, sa) = run_to(dir.path(), "a.csv", args);
        let (b, sb) = run_to(dir.path(), "b.csv", args);
        assert_eq!(a, b);
        assert_eq!(sa["config_sha256"], sb["config_sha256"]);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["enumerate", "--bases", "3,5,7", "--limits", "100000"];
    let one: Vec<&str> = base.iter().copied().chain(["--threads", "1"]).collect();
    let four: Vec<&str> = base.iter().copied().chain(["--threads", "4"]).collect();
    let (a, sa) = run_to(dir.path(), "one.csv", &one);
    let (b, sb) = run_to(dir.path(), "four.csv", &four);
    assert_eq!(a, b);
    assert_eq!(sa["config"]["threads"], 1);
    assert_eq!(sb["config"]["threads"], 4);
}

#[test]
fn run_subcommand_reads_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("normal.csv");
    let json = serde_json::json!({ "command": "normal", "bases": [3, 4, 5], "n": 2, "out": out });
    std::fs::write(&cfg, json.to_string()).unwrap();
    let o = rdl(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().nth(2).unwrap(), "2,9/25,16/25,-1");
}

#[test]
fn stdout_mode_prints_csv() {
    let o = rdl(&["intersect", "--bases", "3,4", "--limit", "100"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# config_sha256="));
    assert!(text.ends_with("n,count\n100,5\n"));
}

#[test]
fn invalid_configs_fail_with_a_message() {
    for args in [
        &["count", "--bases", "3,4,5", "--limits", "100,10"][..],
        &["count", "--bases", "1,4,5", "--limits", "10"][..],
        &["orbit", "--precision", "16"][..],
        &["count", "--bases", "3,4,5"][..],
    ] {
        let o = rdl(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"command": "count", "bases": [3,4,5], "limits": ["10"], "bogus": 1}"#,
    )
    .unwrap();
    assert!(!rdl(&["run", cfg.to_str().unwrap()]).status.success());
}
