//! CLI integration tests: golden-file byte determinism and the exit-code
//! contract.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailkit"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("spawn tailkit")
}

fn check_golden(args: &[&str], golden: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let expected =
        std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden))
            .expect("read golden file");
    assert_eq!(
        out.stdout,
        expected,
        "output drifted from {}:\n{}",
        golden,
        String::from_utf8_lossy(&out.stdout)
    );
    // and a second run is byte-identical
    let again = run(args);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn golden_ap() {
    check_golden(
        &["ap", "--k", "3", "--N", "12", "--p", "0.3", "--t", "2", "--exact", "--seed", "7"],
        "ap_n12.json",
    );
}

#[test]
fn golden_rooted_triangle() {
    check_golden(
        &[
            "rooted", "--graph", "tests/fixtures/triangle.txt", "--roots", "1", "--n", "6",
            "--p", "0.5", "--t", "2", "--exact", "--trials", "500", "--seed", "9",
        ],
        "rooted_triangle.json",
    );
}

#[test]
fn golden_linsys_schur() {
    check_golden(
        &[
            "linsys", "--matrix", "tests/fixtures/schur.txt", "--N", "10", "--p", "0.5",
            "--t", "1.5", "--trials", "1000", "--seed", "3",
        ],
        "linsys_schur.json",
    );
}

#[test]
fn golden_schur_sweep() {
    check_golden(
        &[
            "sweep", "--command", "schur", "--N", "10", "--p-min", "0.05", "--p-max", "0.9",
            "--steps", "7", "--t", "2",
        ],
        "schur_sweep.csv",
    );
}

#[test]
fn sweep_line_count() {
    let out = run(&[
        "sweep", "--command", "schur", "--N", "8", "--p-min", "0.05", "--p-max", "0.95",
        "--steps", "19", "--t", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = out.stdout.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count();
    assert_eq!(lines, 20); // header + 19 records
}

#[test]
fn usage_errors_exit_one() {
    // missing required arguments
    let out = run(&["ap", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    // invalid parameter range
    let out = run(&["ap", "--k", "3", "--N", "8", "--p", "0.5", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    // unreadable file
    let out = run(&["rooted", "--graph", "no/such/file.txt", "--roots", "1", "--n", "5", "--p", "0.5", "--t", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // sweep with too few steps
    let out = run(&[
        "sweep", "--command", "schur", "--N", "8", "--p-min", "0.1", "--p-max", "0.9",
        "--steps", "1", "--t", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn no_verification_exits_zero_with_null_verdict() {
    let out = run(&["schur", "--N", "8", "--p", "0.5", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"verdict\": null"));
    assert!(text.contains("\"empirical\": null"));
    assert!(text.contains("\"exact\": null"));
}

#[test]
fn guard_blocks_large_exact_enumeration() {
    // N = 30 exceeds the 2^N enumeration guard, and --exact demands it
    let out = run(&["ap", "--k", "3", "--N", "30", "--p", "0.3", "--t", "2", "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn non_independent_roots_are_rejected_with_edge_listing() {
    let out = run(&[
        "rooted", "--graph", "tests/fixtures/triangle.txt", "--roots", "1,2", "--n", "6",
        "--p", "0.5", "--t", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not independent") && err.contains("(1, 2)"), "stderr: {}", err);
}
