//! End-to-end tests of the binary: flags, exit codes, output shape.
//!
//! Exit code contract: 0 verified, 1 verification failed, 2 malformed
//! input. Malformed and failed must never blur into each other.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/reference_certificate.json")
}

fn fixture_text() -> String {
    std::fs::read_to_string(fixture_path()).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskcert"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited without a code")
}

#[test]
fn check_accepts_the_reference_certificate() {
    let out = run(&["check", "--cert", fixture_path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout_of(&out));
    assert!(stdout_of(&out).contains("overall: VERIFIED"));
}

#[test]
fn check_names_the_gap_left_by_a_deleted_row() {
    let mut doc: serde_json::Value = serde_json::from_str(&fixture_text()).unwrap();
    let entries = doc["entries"].as_array_mut().unwrap();
    assert_eq!(entries[1]["m"], 2);
    entries.remove(1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["check", "--cert", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(
        text.contains("gap between b = 7") && text.contains("b = 9"),
        "missing gap endpoints in: {text}"
    );
    assert!(text.contains("overall: NOT VERIFIED"));
}

#[test]
fn check_rejects_truncated_json_as_malformed() {
    let text = fixture_text();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = run(&["check", "--cert", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_rejects_a_missing_file_as_malformed() {
    let out = run(&["check", "--cert", "/nonexistent/cert.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_required_flag_is_malformed_input() {
    let out = run(&["check"]);
    assert_eq!(code(&out), 2);
    let out = run(&["theorem"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn largeb_verifies_the_default_threshold() {
    let out = run(&["largeb"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("A lower bound:  253/1000"));
    assert!(text.contains("(128.5927)"));
    assert!(text.contains("b > 130: VERIFIED"));
}

#[test]
fn largeb_threshold_sensitivity() {
    assert_eq!(code(&run(&["largeb", "--threshold", "100"])), 1);
    assert_eq!(code(&run(&["largeb", "--threshold", "131"])), 0);
}

#[test]
fn largeb_accepts_enclosure_overrides() {
    let out = run(&[
        "largeb",
        "--threshold",
        "128",
        "--theta0",
        "58997761/100000000..58997761/100000000",
        "--xi0",
        "7681/10000..7681/10000",
        "--c1",
        "254/1000..254/1000",
    ]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout_of(&out));
}

#[test]
fn largeb_rejects_malformed_enclosures() {
    assert_eq!(code(&run(&["largeb", "--theta0", "garbage"])), 2);
    assert_eq!(code(&run(&["largeb", "--theta0", "0.59..0.60"])), 2);
    assert_eq!(code(&run(&["largeb", "--xi0", "2..1"])), 2);
}

#[test]
fn theorem_verifies_the_reference_certificate() {
    let out = run(&["theorem", "--cert", fixture_path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout_of(&out));
    assert!(stdout_of(&out).contains("theorem for all b > 0: VERIFIED"));
}

#[test]
fn theorem_rejects_ranges_that_only_touch() {
    // Coverage up to 130 against a large-field bound valid beyond 130
    // leaves nothing in between verified; the overlap rule catches it.
    let text = fixture_text().replace("\"coverage_target\": 131", "\"coverage_target\": 130");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("touching.json");
    std::fs::write(&path, text).unwrap();
    let out = run(&["theorem", "--cert", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("NO"));
}

#[test]
fn certify_short_range_writes_an_incomplete_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    let out = run(&[
        "certify",
        "--m-lo",
        "1",
        "--m-hi",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"complete\": false"));

    let recheck = run(&["check", "--cert", path.to_str().unwrap()]);
    assert_eq!(code(&recheck), 1);
}

#[test]
fn certify_rejects_an_inverted_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unused.json");
    let out = run(&[
        "certify",
        "--m-lo",
        "5",
        "--m-hi",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(!path.exists());
}

#[test]
fn certify_reports_a_hopeless_basis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    let out = run(&[
        "certify",
        "--m-lo",
        "1",
        "--m-hi",
        "1",
        "--terms",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("basis too small"));
}

#[test]
fn certify_honors_the_jobs_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.json");
    let out = Command::new(env!("CARGO_BIN_EXE_diskcert"))
        .args(["certify", "--m-lo", "1", "--m-hi", "2", "--out", path.to_str().unwrap()])
        .env("DISK_CERT_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(path.exists());

    let bad = Command::new(env!("CARGO_BIN_EXE_diskcert"))
        .args(["certify", "--m-lo", "1", "--m-hi", "2", "--out", path.to_str().unwrap()])
        .env("DISK_CERT_JOBS", "three")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn degennes_flags_and_tolerances() {
    assert_eq!(code(&run(&["degennes", "--grid-points", "10"])), 2);
    // A legal but coarse grid solves fine yet misses the tightest
    // tolerance, which is a verification failure, not bad input.
    let coarse = run(&["degennes", "--grid-points", "1000"]);
    assert_eq!(code(&coarse), 1);
    assert!(stdout_of(&coarse).contains("FAILED"));
}

#[test]
fn curves_with_empty_range_prints_only_the_header() {
    let out = run(&["curves", "--b-max", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "b,m_star,lambda1,theta0_b,const_bound\n");
}

#[test]
fn curves_writes_rows_below_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let out = run(&[
        "curves",
        "--b-max",
        "4",
        "--terms",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        let lambda1: f64 = fields[2].parse().unwrap();
        let theta_line: f64 = fields[3].parse().unwrap();
        assert!(lambda1 < theta_line, "row violates the line: {row}");
    }
}
