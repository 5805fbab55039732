//! End-to-end tests of the `heinzlab` binary: exit codes, stream formats,
//! determinism, configuration precedence.

use std::process::{Command, Output};

fn heinzlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heinzlab"))
        .args(args)
        .env_remove("HEINZLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn verify_small_run_passes_and_streams_jsonl() {
    let out = heinzlab(&[
        "verify",
        "--suite",
        "CHAIN-3.1",
        "--orders",
        "1,2",
        "--instances",
        "2",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json line");
        assert!(v.get("id").is_some());
        assert!(v.get("margin").is_some());
        assert_eq!(v.get("x_kind").unwrap(), "general");
        lines += 1;
    }
    assert_eq!(lines, 8, "2 comparisons x 2 orders x 2 instances");
}

#[test]
fn verify_is_byte_deterministic() {
    let args = [
        "verify", "--suite", "CHAIN-2.2.1,INEQ-2.2", "--orders", "3", "--instances", "2",
        "--seed", "11",
    ];
    let first = heinzlab(&args);
    let second = heinzlab(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_id_exits_with_usage_code() {
    let out = heinzlab(&["verify", "--suite", "INEQ-0.0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("INEQ-0.0"), "{err}");
}

#[test]
fn forced_weight_reports_expected_violation() {
    let out = heinzlab(&[
        "verify",
        "--suite",
        "INEQ-1.2",
        "--orders",
        "1",
        "--instances",
        "1",
        "--seed",
        "3",
        "--nu",
        "0.21",
    ]);
    assert_eq!(out.status.code(), Some(0), "expected-violation mode passes");
    let text = stdout_of(&out);
    assert!(text.contains("sharpness"), "{text}");
    let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert!(v["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn csv_format_round_trips_numbers() {
    let args_csv = [
        "verify", "--suite", "CHAIN-3.1", "--orders", "2", "--instances", "1", "--seed", "9",
        "--format", "csv",
    ];
    let args_json = [
        "verify", "--suite", "CHAIN-3.1", "--orders", "2", "--instances", "1", "--seed", "9",
    ];
    let csv = stdout_of(&heinzlab(&args_csv));
    let json = stdout_of(&heinzlab(&args_json));
    let mut csv_lines = csv.lines();
    let header = csv_lines.next().unwrap();
    assert!(header.starts_with("id,nu,alpha,beta"));
    let header_fields: Vec<&str> = header.split(',').collect();
    let margin_idx = header_fields.iter().position(|f| *f == "margin").unwrap();
    for (csv_line, json_line) in csv_lines.zip(json.lines()) {
        let fields: Vec<&str> = csv_line.split(',').collect();
        assert_eq!(fields.len(), header_fields.len());
        let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
        let csv_margin: f64 = fields[margin_idx].parse().unwrap();
        let json_margin = v["margin"].as_f64().unwrap();
        assert_eq!(csv_margin.to_bits(), json_margin.to_bits(), "lossless parse");
    }
}

#[test]
fn jsonl_reserializes_identically() {
    let out = heinzlab(&[
        "verify", "--suite", "INEQ-ZHAO", "--orders", "3", "--instances", "2", "--seed", "21",
    ]);
    for line in stdout_of(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), line);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("heinzlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("run.conf");
    std::fs::write(
        &cfg_path,
        "# test config\nsuite = CHAIN-3.1\norders = 2\ninstances = 1\ntol = 1e-6\nseed = 4\n",
    )
    .unwrap();
    let cfg = cfg_path.to_str().unwrap();

    // Config file supplies the tolerance.
    let out = heinzlab(&["verify", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(stdout_of(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["tol_used"].as_f64().unwrap(), 1e-6);

    // A flag overrides it.
    let out = heinzlab(&["verify", "--config", cfg, "--tol", "1e-3"]);
    let v: serde_json::Value =
        serde_json::from_str(stdout_of(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["tol_used"].as_f64().unwrap(), 1e-3);

    // Unknown keys are rejected.
    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "speed = 9\n").unwrap();
    let out = heinzlab(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_seed_is_the_default_seed() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_heinzlab"))
        .args(["verify", "--suite", "CHAIN-3.1", "--orders", "2", "--instances", "1"])
        .env("HEINZLAB_SEED", "123")
        .output()
        .unwrap();
    let with_flag = heinzlab(&[
        "verify", "--suite", "CHAIN-3.1", "--orders", "2", "--instances", "1", "--seed", "123",
    ]);
    assert_eq!(with_env.stdout, with_flag.stdout);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_heinzlab"))
        .args(["verify"])
        .env("HEINZLAB_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn chain_prints_monotone_table() {
    let out = heinzlab(&[
        "chain", "--id", "CHAIN-2.2.1", "--orders", "3", "--seed", "7", "--alpha", "0.2",
        "--beta", "0.9", "--ladder-n", "3", "--ladder-m", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("monotone: yes"), "{text}");
    assert!(text.contains("mean-integral"));
    assert!(text.contains("kyfan:3"));
}

#[test]
fn chain_rejects_bad_hypotheses_with_usage_exit() {
    let out = heinzlab(&["chain", "--id", "CHAIN-3.12", "--nu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1/2"), "{err}");
}

#[test]
fn scan_drissi_reports_interval_and_consistency() {
    let out = heinzlab(&["scan", "drissi", "--nu-grid", "0.2:0.3:0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("0.211324865405"), "{text}");
    assert!(text.contains("0.788675134595"));
    assert!(text.contains("found"));
}

#[test]
fn scan_rejects_empty_or_bad_grids() {
    let out = heinzlab(&["scan", "drissi", "--nu-grid", "0.5:0.1:0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = heinzlab(&["scan", "drissi", "--nu-grid", "oops"]);
    assert_eq!(out.status.code(), Some(2));
    let out = heinzlab(&["scan", "ladder-convergence", "--depth", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_ladder_convergence_gap_shrinks() {
    let out = heinzlab(&["scan", "ladder-convergence", "--x", "4", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("gap shrinking monotonically: yes"), "{text}");
}
