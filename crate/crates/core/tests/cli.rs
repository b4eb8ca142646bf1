use moment_kernel::polygauss::random_field;
use moment_kernel::verify::serialize_field;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moment-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("moment-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn kernel_suite_passes() {
    let out = run(&[
        "--suite", "kernel", "--n", "2", "--m", "2", "--k", "1", "--seed", "7",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite kernel: PASS"));
    assert!(text.trim_end().ends_with("overall: PASS"));
}

#[test]
fn invalid_order_is_a_usage_error() {
    let out = run(&["--k", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_flags_and_values_are_usage_errors() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "yaml"]).status.code(), Some(2));
    assert_eq!(run(&["--mutate", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["--n", "1"]).status.code(), Some(2));
}

#[test]
fn json_report_parses() {
    let out = run(&[
        "--suite",
        "identities",
        "--samples",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    let records = v["records"].as_array().unwrap();
    assert!(records.iter().all(|r| r["paper_anchor"].is_string()));
}

#[test]
fn report_written_to_file() {
    let path = temp_path("report.csv");
    let out = run(&[
        "--suite",
        "kernel",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,check_id,paper_anchor,residual,exact,pass,detail"));
}

#[test]
fn mutation_makes_the_run_fail() {
    let out = run(&[
        "--suite",
        "kernel",
        "--samples",
        "3",
        "--mutate",
        "wk-sign:1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "--suite",
        "identities",
        "--samples",
        "3",
        "--mutate",
        "recovery-binomial:0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn loaded_field_round_trip() {
    let f = random_field(2, 2, 2, 11).unwrap();
    let path = temp_path("field.json");
    std::fs::write(&path, serialize_field(&f)).unwrap();
    let out = run(&[
        "--suite",
        "kernel",
        "--k",
        "0",
        "--samples",
        "3",
        "--field",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("field.kernel-agreement"));

    let bad = temp_path("bad.json");
    std::fs::write(
        &bad,
        "{\"n\": 2, \"rank\": 1,\n \"components\": {\"1\": [], \"1\": []}}",
    )
    .unwrap();
    let out = run(&["--field", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");

    let missing = temp_path("missing.json");
    assert_eq!(
        run(&["--field", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn field_dimensions_must_match_flags() {
    let f = random_field(3, 1, 1, 0).unwrap();
    let path = temp_path("field3.json");
    std::fs::write(&path, serialize_field(&f)).unwrap();
    let out = run(&["--field", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
