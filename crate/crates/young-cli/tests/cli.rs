//! End-to-end checks of the `young` binary: output formats, exit codes,
//! determinism, and the error contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn young() -> Command {
    Command::new(env!("CARGO_BIN_EXE_young"))
}

fn write_state(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn chain22(dir: &Path) -> std::path::PathBuf {
    write_state(
        dir,
        "chain22.json",
        r#"{"modes": 2, "photons": 2, "terms": [
            {"occ": [2, 0], "amp": [0.5, 0.0]},
            {"occ": [1, 1], "amp": [0.7071067811865476, 0.0]},
            {"occ": [0, 2], "amp": [0.5, 0.0]}
        ]}"#,
    )
}

fn uniform3(dir: &Path) -> std::path::PathBuf {
    write_state(
        dir,
        "uniform3.json",
        r#"{"modes": 3, "photons": 1, "renormalize": true, "terms": [
            {"occ": [1, 0, 0], "amp": [1.0, 0.0]},
            {"occ": [0, 1, 0], "amp": [1.0, 0.0]},
            {"occ": [0, 0, 1], "amp": [1.0, 0.0]}
        ]}"#,
    )
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn coherence_reports_three_pairs_and_mixed_class() {
    let dir = tempfile::tempdir().unwrap();
    let state = chain22(dir.path());
    let output = young().arg("coherence").arg(&state).output().unwrap();
    let value = stdout_json(&output);
    assert_eq!(value["entries"].as_array().unwrap().len(), 3);
    assert_eq!(value["state_class"], "Mixed");
    let local: Vec<_> = value["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["kind"] == "Local")
        .collect();
    assert_eq!(local.len(), 2);
}

#[test]
fn visibility_of_uniform_three_path_is_unity() {
    let dir = tempfile::tempdir().unwrap();
    let state = uniform3(dir.path());
    let output = young()
        .arg("visibility")
        .arg(&state)
        .args(["--grid", "64"])
        .output()
        .unwrap();
    let value = stdout_json(&output);
    let v = value["visibility"].as_f64().unwrap();
    assert!((v - 1.0).abs() < 1e-6, "visibility {v}");
}

#[test]
fn visibility_reports_intensity_at_pi_literal_phases() {
    let dir = tempfile::tempdir().unwrap();
    let state = uniform3(dir.path());
    let output = young()
        .arg("visibility")
        .arg(&state)
        .args(["--phases", "4pi/3,2pi/3,0"])
        .output()
        .unwrap();
    let value = stdout_json(&output);
    let at = value["intensity_at_phases"]["intensity"].as_f64().unwrap();
    assert!(at.abs() < 1e-9, "intensity {at}");
}

#[test]
fn visibility_includes_analytic_cross_check_for_matched_two_path_states() {
    let dir = tempfile::tempdir().unwrap();
    let state = chain22(dir.path());
    let output = young().arg("visibility").arg(&state).output().unwrap();
    let value = stdout_json(&output);
    let analytic = value["analytic_visibility"].as_f64().unwrap();
    let numeric = value["visibility"].as_f64().unwrap();
    assert!((analytic - numeric).abs() < 1e-9);
}

#[test]
fn fringe_writes_csv_with_header_and_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let state = chain22(dir.path());
    let out = dir.path().join("fringe.csv");
    let output = young()
        .arg("fringe")
        .arg(&state)
        .args(["--mode", "0", "--samples", "360", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "phase_rad,intensity");
    assert_eq!(lines.len(), 361);
}

#[test]
fn identical_invocations_produce_byte_identical_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let state = uniform3(dir.path());
    let run = || {
        young()
            .arg("visibility")
            .arg(&state)
            .args(["--seed", "9"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());

    let optimize = || {
        young()
            .args(["optimize", "--modes", "2", "--photons", "2", "--starts", "2", "--seed", "5"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(optimize(), optimize());
}

#[test]
fn env_var_supplies_the_default_seed() {
    let with_env = young()
        .args(["optimize", "--modes", "2", "--photons", "1", "--starts", "1"])
        .env("YOUNG_SEED", "123")
        .output()
        .unwrap();
    let with_flag = young()
        .args(["optimize", "--modes", "2", "--photons", "1", "--starts", "1", "--seed", "123"])
        .output()
        .unwrap();
    assert_eq!(with_env.stdout, with_flag.stdout);

    let bad = young()
        .args(["optimize", "--modes", "2", "--photons", "1"])
        .env("YOUNG_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn optimize_reports_the_reference_optimum() {
    let output = young()
        .args(["optimize", "--modes", "2", "--photons", "2", "--starts", "2", "--seed", "3"])
        .output()
        .unwrap();
    let value = stdout_json(&output);
    let v = value["visibility"]["visibility"].as_f64().unwrap();
    assert!((v - 1.0).abs() < 1e-6);
    let residual = value["residuals"]["lagrange"].as_f64().unwrap();
    assert!(residual < 1e-5, "residual {residual}");
    let terms = value["best_state"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
}

#[test]
fn errors_are_one_line_and_machine_parsable() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write_state(dir.path(), "broken.json", "{\"modes\": 2");

    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["no-such-command".into()], 1),
        (vec!["coherence".into(), broken.display().to_string()], 1),
        (
            vec!["coherence".into(), dir.path().join("missing.json").display().to_string()],
            1,
        ),
        (
            vec![
                "optimize".into(),
                "--modes".into(),
                "10".into(),
                "--photons".into(),
                "10".into(),
            ],
            3,
        ),
    ];
    for (args, expected) in cases {
        let output = young().args(&args).output().unwrap();
        assert_eq!(output.status.code(), Some(expected), "args {args:?}");
        let stderr = String::from_utf8_lossy(&output.stderr);
        let first = stderr.lines().next().unwrap_or_default();
        assert!(first.starts_with("error:"), "stderr for {args:?}: {stderr}");
    }
}

#[test]
fn unnormalized_states_are_rejected_unless_renormalize_is_set() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(
        dir.path(),
        "heavy.json",
        r#"{"modes": 2, "photons": 1, "terms": [
            {"occ": [1, 0], "amp": [1.0, 0.0]},
            {"occ": [0, 1], "amp": [1.0, 0.0]}
        ]}"#,
    );
    let output = young().arg("coherence").arg(&state).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("renormalize"));
}

#[test]
fn classify_lists_occupations_for_every_pair() {
    let dir = tempfile::tempdir().unwrap();
    let state = chain22(dir.path());
    let output = young().arg("classify").arg(&state).output().unwrap();
    let value = stdout_json(&output);
    assert_eq!(value["local_count"], 2);
    assert_eq!(value["collective_count"], 1);
    let pairs = value["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    assert_eq!(pairs[0]["occ_a"], serde_json::json!([2, 0]));
}
