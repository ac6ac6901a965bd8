//! End-to-end checks of the command line surface: subcommands, JSON output,
//! and the documented exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toriczeta"))
}

#[test]
fn analyze_regular_member_exits_zero() {
    let out = bin()
        .args([
            "analyze",
            "--field",
            "7",
            "--poly",
            "x1+x2+x1^-1*x2^-1+3",
            "--json",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["degree"], "2");
    assert_eq!(report["P"][2], "343");
    assert_eq!(report["verdicts"]["np_above_hp"], true);
}

#[test]
fn analyze_with_p_dividing_det_refuses_polygons_but_prints_counts() {
    let out = bin()
        .args([
            "analyze",
            "--field",
            "3",
            "--poly",
            "x1+x2+x1^-1*x2^-1+1",
            "--json",
        ])
        .output()
        .unwrap();
    // all five verdicts withheld: exit 32 + 0b11111
    assert_eq!(out.status.code(), Some(63));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["p_det_ok"], false);
    assert!(report["counts"]["closure"].is_array());
    assert!(report["P"].is_null());
}

#[test]
fn zero_polynomial_is_a_hard_error() {
    let out = bin()
        .args(["analyze", "--field", "5", "--poly", "x1 - x1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("zero-polynomial"), "stderr: {err}");
}

#[test]
fn cy_sweep_all_congruent() {
    let out = bin()
        .args([
            "cy", "--n", "2", "--field", "7", "--lambda", "all", "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["congruent"] == true));
}

#[test]
fn cy_fermat_cubic_over_f4() {
    let out = bin()
        .args([
            "cy", "--n", "2", "--field", "2^2", "--lambda", "0", "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["x_count"], "9");
}

#[test]
fn cy_oversized_dimension_is_refused_gracefully() {
    let out = bin()
        .args(["cy", "--n", "5", "--field", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget-exceeded"), "stderr: {err}");
}

#[test]
fn geometry_json_for_non_simplex() {
    let out = bin()
        .args(["geometry", "--field", "7", "--poly", "x1+x2+x1^-1+x2^-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_simplex"], false);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn count_faces_line_in_p2() {
    let out = bin()
        .args([
            "count", "--field", "5", "--poly", "x1+x2", "--ext", "2", "--faces", "--json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["closure"], 26, "projective line has q^2 + 1 points");
}
