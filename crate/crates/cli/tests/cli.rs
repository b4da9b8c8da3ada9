//! End-to-end tests of the `cosign` binary: output shapes, JSON schema
//! round-trips, and the documented exit codes.

use std::process::{Command, Output};

use cosign_core::search::SearchReport;
use cosign_core::{Configuration, ExactRational};

fn cosign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosign"))
        .args(args)
        .env_remove("COSIGN_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn exact_prints_known_value() {
    let out = cosign(&["exact", "1,3,9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/9"));
    // Space-separated arguments are the repeated form of the same list.
    let split = cosign(&["exact", "1", "3", "9"]);
    assert_eq!(stdout(&split), stdout(&out));
}

#[test]
fn exact_rejects_unsorted_input() {
    let out = cosign(&["exact", "9,3,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exact_engine_both_cross_checks() {
    let out = cosign(&["exact", "1,3,11,33", "--engine", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("1/33").count(), 2);
    assert!(text.contains("[sweep]") && text.contains("[cells]"));
}

#[test]
fn cells_overflow_exits_3() {
    // Two coprime values near 2^40: their lcm leaves u64.
    let out = cosign(&[
        "exact",
        "1099511627776,1099511627777",
        "--engine",
        "cells",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exact_json_record_shape() {
    let out = cosign(&["exact", "1,3,11", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["command"], "exact");
    assert_eq!(record["inputs"]["freqs"], serde_json::json!([1, 3, 11]));
    assert_eq!(record["result"]["num"], "5");
    assert_eq!(record["result"]["den"], "33");
    assert_eq!(record["result"]["decimal"], "0.151515151515");
    assert_eq!(record["metadata"]["engine"], "sweep");
    assert!(record["metadata"]["wall_time"].as_f64().unwrap() >= 0.0);
}

#[test]
fn search_report_round_trips_through_schema() {
    let out = cosign(&["search", "--n", "2", "--max", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let report: SearchReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.n, 2);
    assert_eq!(report.a_max, 12);
    assert_eq!(report.minimum, ExactRational::ratio(1, 3));
    assert_eq!(
        report.argmins,
        vec![Configuration::new(vec![1, 3]).unwrap()]
    );
    assert_eq!(
        report.total_enumerated(),
        cosign_core::search::enumerate_normalized(2, 12).count() as u64
    );
}

#[test]
fn spectrum_reports_three_intervals_for_tight_configs() {
    let out = cosign(&["spectrum", "1,3,9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let intervals = record["result"]["intervals"].as_array().unwrap();
    assert_eq!(intervals.len(), 3);
    assert_eq!(intervals[0]["polarity"], "+");
    assert_eq!(intervals[1]["polarity"], "-");
    assert_eq!(intervals[0]["end"]["num"], "1");
    assert_eq!(intervals[0]["end"]["den"], "18");
    assert_eq!(record["result"]["total_measure"]["den"], "9");
}

#[test]
fn normalize_flag_rescales_the_spectrum() {
    let scaled = cosign(&["spectrum", "2,6,18", "--json"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&scaled)).unwrap();
    // Two compressed copies of the {1,3,9} pattern, merged across pi.
    assert_eq!(record["result"]["intervals"].as_array().unwrap().len(), 5);
    assert_eq!(record["result"]["total_measure"]["den"], "9");

    let normalized = cosign(&["spectrum", "2,6,18", "--normalize", "--json"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&normalized)).unwrap();
    assert_eq!(record["inputs"]["freqs"], serde_json::json!([1, 3, 9]));
    assert_eq!(record["result"]["intervals"].as_array().unwrap().len(), 3);
}

#[test]
fn mc_is_reproducible_for_a_fixed_seed() {
    let args = ["mc", "1,3,9", "--samples", "20000", "--seed", "42"];
    let first = cosign(&args);
    let second = cosign(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("\u{b1}"));
}

#[test]
fn verify_p3_passes() {
    let out = cosign(&["verify", "p3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds: true"));
}

#[test]
fn verdict_round_trips_through_schema() {
    let out = cosign(&["verify", "p3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let verdict: cosign_core::search::TheoremVerdict =
        serde_json::from_value(record["result"].clone()).unwrap();
    assert!(verdict.holds);
    assert_eq!(verdict.swept.len(), 82);
    assert_eq!(
        verdict.attaining,
        vec![Configuration::new(vec![1, 3, 9]).unwrap()]
    );
}

#[test]
fn verify_ladder_prints_rungs() {
    let out = cosign(&["verify", "ladder", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1/27"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn pairs_csv_mirrors_the_table() {
    let out = cosign(&["pairs", "--max", "6", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "configuration,numerator,denominator,decimal"
    );
    assert_eq!(lines.next().unwrap(), "1 2,1,2,0.500000000000");
    // C(6,2) rows after the header.
    assert_eq!(text.lines().count(), 16);
}

#[test]
fn search_accepts_worker_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_cosign"))
        .args(["search", "--n", "2", "--max", "10"])
        .env("COSIGN_WORKERS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let report: SearchReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.minimum, ExactRational::ratio(1, 3));
}
