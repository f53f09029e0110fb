//! End-to-end tests of the `delta4` binary: output shapes, determinism,
//! and exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn delta4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delta4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn delta_inverse_map_m8() {
    let out = delta4(&["delta", "--func", "x^254", "--m", "8", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["delta"], 4);
    assert_eq!(v["report"]["mode"], "monomial-fast");
    assert_eq!(v["config"]["field"]["m"], 8);
}

#[test]
fn delta_cube_m6() {
    let out = delta4(&["delta", "--func", "x^3", "--m", "6", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["delta"], 2);
}

#[test]
fn delta_x7_m7_exceeds_4() {
    let out = delta4(&["delta", "--d", "7", "--m", "7", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert!(v["report"]["delta"].as_u64().unwrap() >= 6);
}

#[test]
fn json_deterministic_without_timestamp() {
    let args = ["delta", "--func", "x^5+x^3", "--m", "5", "--no-timestamp"];
    let a = delta4(&args);
    let b = delta4(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timestamp_present_by_default() {
    let out = delta4(&["delta", "--func", "x^3", "--m", "3"]);
    let v = stdout_json(&out);
    assert!(v["timestamp"].is_u64());
    let out = delta4(&["delta", "--func", "x^3", "--m", "3", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert!(v.get("timestamp").is_none());
}

#[test]
fn geom_cross_check_agrees() {
    let out = delta4(&[
        "geom",
        "--func",
        "x^254",
        "--m",
        "8",
        "--cross-check",
        "--no-timestamp",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["geometry"]["contained"], true);
    assert_eq!(v["report"]["equivalence"]["agree"], true);
    assert_eq!(v["report"]["equivalence"]["delta"], 4);
}

#[test]
fn geom_violation_reported() {
    let out = delta4(&["geom", "--func", "x^7", "--m", "7", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["geometry"]["contained"], false);
    assert!(v["report"]["geometry"]["violation"].is_array());
}

#[test]
fn curve_reports_interval_and_checks() {
    let out = delta4(&["curve", "--d", "7", "--m", "8", "--no-timestamp"]);
    let v = stdout_json(&out);
    let count = v["report"]["count"].as_i64().unwrap();
    assert!((161..=353).contains(&count));
    assert_eq!(v["report"]["weil_interval"][0], 161);
    assert_eq!(v["report"]["weil_interval"][1], 353);
    for key in ["vertex", "intercurve", "projection", "component_plane"] {
        assert_eq!(v["report"]["structural"][key], true, "{key}");
    }
}

#[test]
fn curve_golden_count_m4() {
    let out = delta4(&["curve", "--d", "7", "--m", "4", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["count"], 14);
}

#[test]
fn predict_named_cases() {
    let out = delta4(&["predict", "--d", "7", "--m", "22", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["predicted_delta_gt_4_polynomial"], true);
    assert_eq!(v["report"]["polynomial_statement_applies"], true);

    let out = delta4(&["predict", "--d", "7", "--m", "7", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["predicted_delta_gt_4_monomial"], true);

    let out = delta4(&["predict", "--d", "8", "--m", "10", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["mersenne_hypothesis"], false);
    assert_eq!(v["report"]["predicted_delta_gt_4_monomial"], false);
}

#[test]
fn pf_of_x5_graded_lex() {
    let out = delta4(&["pf", "--func", "x^5", "--m", "4", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        [
            "0x1*x^2*y^0*z^0",
            "0x1*x^1*y^1*z^0",
            "0x1*x^1*y^0*z^1",
            "0x1*x^0*y^2*z^0",
            "0x1*x^0*y^1*z^1",
            "0x1*x^0*y^0*z^2",
        ]
    );
}

#[test]
fn table_file_input() {
    // value table of x^3 on F_8
    let mut file = tempfile::NamedTempFile::new().unwrap();
    let cubes: Vec<String> = (0u32..8)
        .map(|x| {
            // 0,1,2,3,4,5,6,7 cubed in F_8 with modulus 0xB
            let f = [0u32, 1, 3, 4, 5, 6, 7, 2][x as usize];
            format!("{f:#x}")
        })
        .collect();
    writeln!(file, "{}", cubes.join("\n")).unwrap();
    let path = file.path().to_str().unwrap();
    let out = delta4(&["delta", "--table", path, "--m", "3", "--no-timestamp"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["delta"], 2);
}

#[test]
fn csv_ddt_dump() {
    let out = delta4(&["delta", "--func", "x^3", "--m", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,count"));
    // 7 rows x 4 nonzero cells for the APN cube on F_8
    assert_eq!(lines.count(), 28);
}

#[test]
fn verify_suite_passes() {
    let out = delta4(&[
        "verify",
        "--suite",
        "inverse",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("6 cases, 0 failed"));
}

#[test]
fn verify_unknown_suite_usage_error() {
    let out = delta4(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("equivalence") && err.contains("oracles"));
}

#[test]
fn parse_error_has_position() {
    let out = delta4(&["delta", "--func", "x^3+!!", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte"), "stderr: {err}");
}

#[test]
fn resource_limit_exit_code() {
    // geometry containment is capped at m=10
    let out = delta4(&["geom", "--func", "x^7", "--m", "12"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_error_exit_code() {
    let out = delta4(&["delta", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_modulus_accepted_and_reducible_rejected() {
    let out = delta4(&[
        "delta", "--func", "x^3", "--m", "4", "--mod", "0x19", "--no-timestamp",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["delta"], 2);
    assert_eq!(v["config"]["field"]["modulus"], "0x19");

    let out = delta4(&["delta", "--func", "x^3", "--m", "4", "--mod", "0x11"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.to_lowercase().contains("reducible"));
}

#[test]
fn moduli_table_override() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "4: 0x19").unwrap();
    let path = file.path().to_str().unwrap();
    let out = delta4(&[
        "delta",
        "--func",
        "x^3",
        "--m",
        "4",
        "--moduli-table",
        path,
        "--no-timestamp",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["config"]["field"]["modulus"], "0x19");
}
