//! End-to-end tests of the `qgames` binary: schemas, reproducibility,
//! config merging, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qgames(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgames"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("qgames-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn pennyflip_always_heads_for_double_hadamard() {
    let out = stdout(&qgames(&["pennyflip"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("a,prob_heads,value_to_p"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        let prob: f64 = cells[1].parse().unwrap();
        let value: f64 = cells[2].parse().unwrap();
        assert!((prob - 1.0).abs() < 1e-12);
        assert!((value + 1.0).abs() < 1e-12);
    }
}

#[test]
fn pennyflip_identity_q_with_fair_coin() {
    let out = stdout(&qgames(&["pennyflip", "--q-strategy", "identity", "--a-points", "3"]));
    let row = out.lines().nth(2).unwrap(); // a = 0.5
    let prob: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((prob - 0.5).abs() < 1e-12);
}

#[test]
fn mg_sweep_has_one_row_per_count_and_known_values() {
    let out = stdout(&qgames(&["mg-sweep-n", "--players", "4,6"]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 4.0);
    assert!((first[1] - 0.25).abs() < 1e-9, "quantum {}", first[1]);
    assert!((first[2] - 0.125).abs() < 1e-15, "classical {}", first[2]);
    assert!((first[3] - 0.25).abs() < 1e-15, "pareto {}", first[3]);
    let second: Vec<f64> = rows[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((second[1] - 0.3125).abs() < 1e-9);
}

#[test]
fn decoherence_endpoints_for_dephasing() {
    let out = stdout(&qgames(&["mg-decoherence", "--p-points", "3", "--channel", "dephasing"]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let payoff =
        |row: &str| -> f64 { row.split(',').nth(2).unwrap().parse().unwrap() };
    assert!((payoff(rows[0]) - 0.25).abs() < 1e-9);
    assert!((payoff(rows[2]) - 0.125).abs() < 1e-9);
    assert!(rows[0].contains("phase_damping"));
}

#[test]
fn entanglement_sweep_hits_both_endpoints() {
    let out = stdout(&qgames(&["mg-entanglement", "--gamma-points", "5"]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    let payoff =
        |row: &str| -> f64 { row.split(',').nth(1).unwrap().parse().unwrap() };
    assert!((payoff(rows[0]) - 0.125).abs() < 1e-9);
    assert!((payoff(rows[4]) - 0.25).abs() < 1e-9);
}

#[test]
fn entanglement_curve_is_smooth_on_the_default_grid() {
    let out = stdout(&qgames(&["mg-entanglement"]));
    let payoffs: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|row| row.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(payoffs.len(), 50);
    for pair in payoffs.windows(2) {
        assert!((pair[1] - pair[0]).abs() < 0.05, "jump {} -> {}", pair[0], pair[1]);
    }
}

#[test]
fn classical_series_and_summary_schemas() {
    let out = stdout(&qgames(&[
        "mg-classical",
        "--memory",
        "2",
        "--seeds",
        "1",
        "--steps",
        "10",
        "--burn-in",
        "5",
        "--series",
    ]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,attendance,winning_side"));
    assert_eq!(lines.count(), 15); // burn-in + measured steps

    let out = stdout(&qgames(&[
        "mg-classical",
        "--memory",
        "2,3",
        "--seeds",
        "2",
        "--steps",
        "200",
        "--burn-in",
        "100",
        "--agents",
        "21",
    ]));
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("m,sigma_mean,sigma_spread,mean_fraction,strategy_space_size")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(",16"));
    assert!(rows[1].ends_with(",256"));
}

#[test]
fn classical_json_emits_per_seed_summaries() {
    let out = stdout(&qgames(&[
        "mg-classical",
        "--memory",
        "2",
        "--seeds",
        "2",
        "--steps",
        "100",
        "--burn-in",
        "50",
        "--agents",
        "11",
        "--format",
        "json",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    let records = parsed.as_array().unwrap();
    assert_eq!(records.len(), 2);
    for record in records {
        assert_eq!(record["n_agents"], 11);
        assert_eq!(record["memory"], 2);
        assert_eq!(record["strategies"], 2);
        assert!(record["sigma"].is_number());
        assert!(record["mean_fraction"].is_number());
    }
}

#[test]
fn outputs_are_byte_identical_for_same_seed() {
    let a = tmp_path("repro-a.csv");
    let b = tmp_path("repro-b.csv");
    for path in [&a, &b] {
        let out = qgames(&[
            "mg-classical",
            "--memory",
            "1,3",
            "--seeds",
            "3",
            "--steps",
            "500",
            "--burn-in",
            "100",
            "--seed",
            "99",
            "--jobs",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn rps_summary_matches_analytic_limits() {
    let out = stdout(&qgames(&["rps", "--rounds", "100000", "--seed", "11", "--format", "json"]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    let win = parsed[0]["win_probability"].as_f64().unwrap();
    assert!((win - 1.0 / 3.0).abs() < 0.0045, "win {win}");

    let out = stdout(&qgames(&[
        "rps",
        "--mode",
        "independent",
        "--rounds",
        "100000",
        "--seed",
        "11",
        "--format",
        "json",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    let win = parsed[0]["win_probability"].as_f64().unwrap();
    assert!((win - 1.0 / 9.0).abs() < 0.003, "win {win}");
}

#[test]
fn certify_ne_exits_zero_with_certificate_json() {
    let out = qgames(&["certify", "--p", "0.25"]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["certified"], true);
    assert_eq!(cert["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn certify_identity_profile_exits_three() {
    let out = qgames(&["certify", "--profile", "identity", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["certified"], false);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qgames(&["mg-decoherence", "--channel", "bogus"]).status.code(), Some(1));
    assert_eq!(qgames(&["mg-sweep-n", "--players", "5"]).status.code(), Some(1));
    assert_eq!(qgames(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qgames(&["mg-classical", "--agents", "10"]).status.code(), Some(1));
    assert_eq!(
        qgames(&["certify", "--profile", "custom"]).status.code(),
        Some(1)
    );
}

#[test]
fn config_file_is_used_and_flags_override() {
    let config = tmp_path("config.json");
    std::fs::write(
        &config,
        r#"{
            "experiment": "rps",
            "mode": "independent",
            "rounds": 1000,
            "seed": 5,
            "format": "json"
        }"#,
    )
    .unwrap();

    let out = stdout(&qgames(&["rps", "--config", config.to_str().unwrap()]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed[0]["mode"], "independent");
    assert_eq!(parsed[0]["rounds"], 1000);

    // Flag beats file.
    let out = stdout(&qgames(&[
        "rps",
        "--config",
        config.to_str().unwrap(),
        "--rounds",
        "500",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed[0]["rounds"], 500);

    // Wrong experiment name is a usage error.
    let out = qgames(&["pennyflip", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let _ = std::fs::remove_file(config);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let config = tmp_path("bad-config.json");
    std::fs::write(&config, r#"{"no_such_knob": 3}"#).unwrap();
    let out = qgames(&["rps", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_file(config);
}
