use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tongues_cli::table::round_sig;
use tongues_core::delta_kick::{solve_delta, DEFAULT_DELTA_TOL};

fn tongues(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tongues"))
        .args(args)
        .env_remove("TONGUES_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV document as (header, rows).
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap()).expect("stderr ends with a JSON record")
}

#[test]
fn degenerate_edges_meet_at_a_quarter() {
    let text = stdout(&tongues(&["edges", "--epsilon", "0", "--gap", "1"]));
    assert!(text.contains("# note = tongues are degenerate"));
    let (header, rows) = csv(&text);
    assert_eq!(header, ["gap", "epsilon", "lower", "upper", "width"]);
    let lower: f64 = rows[0][2].parse().unwrap();
    let upper: f64 = rows[0][3].parse().unwrap();
    assert!((lower - 0.25).abs() < 1e-4 && (upper - 0.25).abs() < 1e-4);
}

#[test]
fn csv_round_trips_the_library_value() {
    let text = stdout(&tongues(&["solve", "--lambda", "1", "--epsilon", "0.3"]));
    let (header, rows) = csv(&text);
    let col = header.iter().position(|h| h == "delta").unwrap();
    let parsed: f64 = rows[0][col].parse().unwrap();
    let expected = solve_delta(1.0, 0.3, 1, DEFAULT_DELTA_TOL).unwrap();
    assert_eq!(parsed, round_sig(expected));
}

#[test]
fn json_round_trips_the_library_value() {
    let text = stdout(&tongues(&[
        "solve",
        "--lambda",
        "2",
        "--epsilon",
        "0.3",
        "--format",
        "json",
    ]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["tongues"], env!("CARGO_PKG_VERSION"));
    let expected = solve_delta(2.0, 0.3, 1, DEFAULT_DELTA_TOL).unwrap();
    assert_eq!(v["rows"][0]["delta"].as_f64().unwrap(), round_sig(expected));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "profile",
        "--lambda",
        "0.7",
        "--epsilon",
        "0.5",
        "--gap",
        "1",
        "--half-window",
        "125.6",
        "--samples",
        "4000",
    ];
    let (a, b) = (tongues(&args), tongues(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv(&stdout(&a));
    assert_eq!(header, ["t", "x"]);
    assert_eq!(rows.len(), 4000);
    let x: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(x[0].abs() < 1e-6 && x[3999].abs() < 1e-6);
    assert!(x.contains(&1.0));
}

#[test]
fn asymptotic_table_has_one_row_per_pair() {
    let text = stdout(&tongues(&[
        "asym",
        "--epsilons",
        "0.01,0.02,0.05",
        "--lambdas",
        "0.5,1,2",
    ]));
    let (header, rows) = csv(&text);
    assert_eq!(
        header,
        ["epsilon", "lambda", "delta1_numeric", "delta1_formula", "error"]
    );
    assert_eq!(rows.len(), 9);
    for row in rows {
        let eps: f64 = row[0].parse().unwrap();
        let err: f64 = row[4].parse().unwrap();
        assert!(err <= 3.0 * eps);
    }
}

#[test]
fn invalid_values_are_usage_errors() {
    for args in [
        &["solve", "--lambda", "-1", "--epsilon", "0.5"][..],
        &["solve", "--lambda", "1", "--epsilon", "0.5", "--gap", "0"],
        &["width-sweep", "--widths", "0.1,0.2"],
        &["bvp", "--kick", "gaussian", "--epsilon", "0.5"],
    ] {
        let out = tongues(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_record(&out)["error"]["kind"], "usage");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(tongues(&["solve", "--bogus"]).status.code(), Some(2));
}

#[test]
fn computation_failures_exit_one_with_a_record() {
    let out = tongues(&["solve", "--lambda", "1", "--epsilon", "0.5", "--gap", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let record = error_record(&out);
    assert_eq!(record["error"]["kind"], "root-not-found");
    assert_eq!(record["error"]["scan"].as_array().unwrap().len(), 33);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tongues"))
        .args(["edges", "--epsilon", "0.1", "--gap", "1,2,3", "--format", "json"])
        .env("TONGUES_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("edges.json")).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    let explicit = dir.path().join("nested/chart.csv");
    let out = tongues(&["chart", "--nd", "5", "--ne", "3", "-o", explicit.to_str().unwrap()]);
    assert!(out.status.success());
    let (_, rows) = csv(&fs::read_to_string(explicit).unwrap());
    assert_eq!(rows.len(), 15);
}

#[test]
fn figure_three_records_the_missing_second_tongue() {
    let text = stdout(&tongues(&["figure", "fig3"]));
    assert!(text.contains("# epsilon_choice = epsilon = 0.5"));
    assert!(text.contains("# gap2 = no mode at lambda = 1"));
    let (_, rows) = csv(&text);
    assert!(rows.iter().any(|r| r[0] == "1") && rows.iter().any(|r| r[0] == "3"));
}

#[test]
fn figure_four_compares_kick_shapes() {
    let text = stdout(&tongues(&["figure", "fig4"]));
    let (header, rows) = csv(&text);
    assert_eq!(header[0], "kick");
    let kinds: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(kinds, ["gaussian", "lorentzian", "dirac"]);
}
