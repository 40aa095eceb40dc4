//! End-to-end CLI behavior: exit codes, JSON output, round-trips.

use std::io::Write;
use std::process::{Command, Output};

use liecr::pipeline::RunReport;

fn liecr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liecr"))
        .args(args)
        .env_remove("LIECR_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn describe_su2_reports_rank_and_roots() {
    let out = liecr(&["describe", "su2"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report.overall_pass);
    let describe = report.describe.unwrap();
    assert_eq!(describe.rank, 1);
    assert_eq!(describe.roots.len(), 2);
    assert_eq!(describe.nilpotent.unwrap().len(), 1);
}

#[test]
fn describe_su3_reports_six_roots() {
    let out = liecr(&["describe", "su3"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report.describe.unwrap().roots.len(), 6);
}

#[test]
fn describe_broken_jacobi_file_exits_2_with_witness() {
    let dir = std::env::temp_dir().join("liecr-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    let mut f = std::fs::File::create(&path).unwrap();
    // su(2)-like table with a spurious e1 component in [e1, e2]
    write!(
        f,
        r#"{{"dim":3,"field":"real","basis":["e1","e2","e3"],
            "brackets":[[0,1,[[0,0.1,0.0],[2,2.0,0.0]]],[1,2,[[0,2.0,0.0]]],[2,0,[[1,2.0,0.0]]]]}}"#
    )
    .unwrap();
    let out = liecr(&["describe", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Jacobi"), "diagnostic names the failure");
}

#[test]
fn build_su2_invariant_nacs_passes_and_round_trips() {
    let out = liecr(&["build", "su2", "--M", "[[1,0]]", "--all"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert!(report.overall_pass);
    assert!(report.condition.as_ref().unwrap().pass);
    assert!(report.oracle.as_ref().unwrap().pass);
    let names: Vec<&str> = report.reports.iter().map(|r| r.name.as_str()).collect();
    assert!(names.contains(&"verify_cr"));
    assert!(names.contains(&"verify_nacs"));
    assert!(names.contains(&"verify_solvable"));
    assert!(names.contains(&"verify_borel_decomposition"));
    // byte-identical JSON round-trip
    let reserialized = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(text.trim_end(), reserialized);
}

#[test]
fn build_su3_complex_structure_passes() {
    let out = liecr(&["build", "su3", "--M", "[[1,0],[0,1]]"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report.overall_pass);
}

#[test]
fn build_su3_degenerate_matrix_exits_1_with_condition_report() {
    let out = liecr(&["build", "su3", "--M", "[[1,0],[2,0]]"]);
    assert_eq!(exit_code(&out), 1);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(!report.overall_pass);
    let condition = report.condition.unwrap();
    assert!(!condition.pass);
    assert_eq!(condition.determinant, Some(0.0));
    // the pair is never built; no verifier reports appear
    assert!(report.reports.iter().all(|r| r.name != "verify_cr"));
}

#[test]
fn su2_action_hopf_is_invariant() {
    let out = liecr(&["su2-action", "--a", "0", "--b", "1"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let su2 = report.su2_action.unwrap();
    assert!(su2.analytic_pass && su2.sampled_pass);
    assert_eq!(su2.invariant, Some(true));
    assert_eq!(su2.mu, Some((1.0, 0.0)));
}

#[test]
fn su2_action_tilted_is_non_invariant_with_mu_2() {
    let out = liecr(&["su2-action", "--a", "0.3333333333", "--b", "1"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let su2 = report.su2_action.unwrap();
    assert!(su2.analytic_pass && su2.sampled_pass);
    assert_eq!(su2.invariant, Some(false));
    let mu = su2.mu.unwrap();
    assert!((mu.0 - 2.0).abs() < 1e-8 && mu.1.abs() < 1e-12);
}

#[test]
fn su2_action_imaginary_a_fails() {
    let out = liecr(&["su2-action", "--a", "i", "--b", "1"]);
    assert_eq!(exit_code(&out), 1);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    let su2 = report.su2_action.unwrap();
    assert!(!su2.analytic_pass && !su2.sampled_pass);
    assert_eq!(su2.invariant, None);
    assert!(!su2.witnesses.is_empty());
}

#[test]
fn su2_action_trivial_params_exit_1() {
    let out = liecr(&["su2-action", "--a", "0", "--b", "0"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn complex_flag_forms_are_equivalent() {
    let bracket = liecr(&["su2-action", "--a", "[0.25,0.0]", "--b", "1+0i", "--samples", "128"]);
    let plain = liecr(&["su2-action", "--a", "0.25", "--b", "1", "--samples", "128"]);
    assert_eq!(exit_code(&bracket), exit_code(&plain));
    let rb: RunReport = serde_json::from_str(&stdout_str(&bracket)).unwrap();
    let rp: RunReport = serde_json::from_str(&stdout_str(&plain)).unwrap();
    assert_eq!(rb.su2_action.unwrap().mu, rp.su2_action.unwrap().mu);
}

#[test]
fn build_accepts_a_morphism_spec_file() {
    let dir = std::env::temp_dir().join("liecr-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("su4_morphism.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"q":3,"l":2,"M":[[0,0],[1,0],[0,0],[0,1],[1,0],[0,0]]}}"#
    )
    .unwrap();
    let out = liecr(&["build", "su4", "--M", path.to_str().unwrap(), "--all"]);
    assert_eq!(exit_code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report.overall_pass);
}

#[test]
fn malformed_inline_matrix_is_an_input_error() {
    let out = liecr(&["build", "su2", "--M", "[[1,0,9]]"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn bad_tolerance_is_an_input_error() {
    let out = liecr(&["describe", "su2", "--tolerance", "0.5"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn env_tolerance_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_liecr"))
        .args(["describe", "su2"])
        .env("LIECR_TOLERANCE", "1e-9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report.config.tolerance, 1e-9);

    let bad = Command::new(env!("CARGO_BIN_EXE_liecr"))
        .args(["describe", "su2"])
        .env("LIECR_TOLERANCE", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn text_output_renders_checks() {
    let out = liecr(&["describe", "su2", "--output", "text"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.contains("[PASS] jacobi"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn unknown_algebra_exits_2() {
    let out = liecr(&["describe", "g2-not-here"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn selftest_fast_subset_passes() {
    let out = liecr(&["selftest", "--criteria", "1,2,7,8"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    assert_eq!(text.lines().filter(|l| l.contains("[PASS]")).count(), 4);
}

#[test]
fn deterministic_reports_given_config_and_seed() {
    let a = stdout_str(&liecr(&["su2-action", "--a", "0.2+0.1i", "--b", "1", "--samples", "128", "--seed", "5"]));
    let b = stdout_str(&liecr(&["su2-action", "--a", "0.2+0.1i", "--b", "1", "--samples", "128", "--seed", "5"]));
    let ra: RunReport = serde_json::from_str(&a).unwrap();
    let rb: RunReport = serde_json::from_str(&b).unwrap();
    // identical up to wall time
    let strip = |mut r: RunReport| {
        r.wall_time_seconds = 0.0;
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(strip(ra), strip(rb));
}
