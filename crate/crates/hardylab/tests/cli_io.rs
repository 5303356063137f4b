//! CLI surface tests: exit codes (0 success / 1 usage / 2 typed failure),
//! byte-identical JSON reports across repeated runs, the embedded tolerance
//! ledger, and the CSV/SVG artifact formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardylab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary must run")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("hardylab-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn series_command_emits_polynomial_coefficients() {
    let out = run(&["series", "--symbol", "z2z", "-n", "16"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "series");
    assert!(v["tolerances"]["exact_rel"].as_f64().unwrap() > 0.0);
    let coeffs = v["result"]["coefficients"].as_array().unwrap();
    assert_eq!(coeffs[1][0], 1.0);
    assert_eq!(coeffs[2][0], 1.0);
}

#[test]
fn check_intertwine_scaled_shift_is_exact_and_exit_zero() {
    // The catalog example: X = C_{z/2} intertwines T_{2z} with T_z.
    let out = run(&[
        "check-intertwine",
        "--phi",
        r#"{"tag":"polynomial","coeffs":[[0,0],[2,0]]}"#,
        "--psi",
        "z",
        "--x",
        "cz/2",
        "-n",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let residual = v["result"]["report"]["residual"].as_f64().unwrap();
    assert!(residual < 1e-14, "residual {residual}");
}

#[test]
fn image_test_violations_exit_two() {
    let out = run(&["image-test", "--psi", "z", "--phi", "z/2", "--radii", "16", "--angles", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["result"]["containment"]["violation_count"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_one() {
    // Unknown symbol shorthand.
    let out = run(&["series", "--symbol", "definitely-not-a-symbol"]);
    assert_eq!(out.status.code(), Some(1));
    // Truncation outside [16, 8192].
    let out = run(&["series", "--symbol", "z", "-n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown flag (clap-level usage error).
    let out = run(&["series", "--symbol", "z", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn typed_math_failure_exits_two() {
    // ω = z+2 is not a self-map: weighted-comp build must be rejected.
    let out = run(&[
        "build-operator",
        "--kind",
        "weighted-comp",
        "--omega",
        "z+2",
        "-n",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "ee-scan",
        "--symbol",
        "z2z",
        "--lambdas",
        "1,0;-1,0;10,0;0.5,0.5",
        "-n",
        "32",
        "--mesh",
        "1024",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b), "reports must be deterministic");
}

#[test]
fn ee_scan_rows_match_catalog() {
    let out = run(&[
        "ee-scan",
        "--symbol",
        "z",
        "--lambdas",
        "2,0;0.5,0",
        "-n",
        "32",
        "--mesh",
        "1024",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["status"], "in");
    assert_eq!(rows[1]["status"], "out");
    // Verdict schema: lambda as [re, im] plus the two test flags.
    assert_eq!(rows[0]["lambda"][0], 2.0);
    assert!(rows[0]["necessary"].as_bool().unwrap());
    assert!(rows[0]["constructive"].as_bool().unwrap());
}

#[test]
fn matrix_csv_has_header_and_interleaved_rows() {
    let path = tmp("toeplitz.csv");
    let out = run(&[
        "build-operator",
        "--kind",
        "toeplitz",
        "--symbol",
        "z2z",
        "-n",
        "16",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# toeplitz 16 14"), "header: {header}");
    let first_row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first_row.len(), 32, "re/im interleaved row-major");
    std::fs::remove_file(&path).ok();
}

#[test]
fn svg_and_raster_outputs_are_written() {
    let svg = tmp("region.svg");
    let csv = tmp("raster.csv");
    let out = run(&[
        "image-test",
        "--psi",
        "z/2",
        "--phi",
        "z2z",
        "--mesh",
        "2048",
        "--radii",
        "8",
        "--angles",
        "32",
        "--raster-res",
        "64",
        "--svg",
        svg.to_str().unwrap(),
        "--raster-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("<path"));
    assert!(svg_text.contains("boundary-unresolved"), "legend must list verdicts");
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("x,y,valence,status"));
    assert!(csv_text.lines().count() > 64 * 64 / 2);
    std::fs::remove_file(&svg).ok();
    std::fs::remove_file(&csv).ok();
}

#[test]
fn wold_check_passes_for_shift() {
    let out = run(&[
        "wold-check",
        "--psi",
        "z",
        "-n",
        "256",
        "--cutoff",
        "12",
        "--orders",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["coefficient_recursion_exact"], true);
    assert_eq!(v["result"]["wbasis_size"], 1);
}

#[test]
fn finite_dim_trials_all_pass() {
    let out = run(&["finite-dim", "--dim", "4", "--trials", "25", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["failures"], 0);
}

#[test]
fn deddens_command_reports_diagnostics() {
    let out = run(&["deddens", "--phi", "unit_singular", "-n", "512", "--cutoff", "8"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gram = v["result"]["gram_defect"].as_f64().unwrap();
    let max_tail = v["result"]["max_tail_energy"].as_f64().unwrap();
    assert!(gram <= 10.0 * max_tail + 1e-12);
}

#[test]
fn recover_command_round_trips() {
    let out = run(&["recover", "--x", "wc:z/2:1+z", "-n", "64"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["consistent"], true);
}

#[test]
fn vandermonde_command_single_branch() {
    let out = run(&[
        "vandermonde",
        "--phi",
        "2z",
        "--psi",
        "z",
        "--omegas",
        "z/2",
        "--weights",
        "1",
        "--samples",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["result"]["max_system_residual"].as_f64().unwrap() < 1e-10);
}
