use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hgauge_verify::Report;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).display().to_string()
}

fn scratch_file(tag: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hgauge-verify-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.scn");
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut all = args.to_vec();
    all.push("--json");
    Report::from_json(&stdout(&verify(&all))).unwrap()
}

#[test]
fn default_scenario_selected_suites_pass() {
    let out = verify(&["--suite", "validate", "--suite", "bianchi", "--suite", "closedness"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("CHECK crossed-module") && l.contains(" PASS residual_terms=0 time=")));
    assert_eq!(text.lines().filter(|l| l.starts_with("CHECK bianchi[")).count(), 4);
    assert!(text.contains("SUMMARY 10/10 checks passed"), "{text}");
}

#[test]
fn json_report_parses_back() {
    let out = verify(&["--suite", "chsas", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert!(report.all_pass);
    assert!(!report.checks.is_empty());
    assert!(report.checks.iter().all(|c| c.residual_terms == 0 && !c.eq.is_empty()));
    assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn corrupted_fixture_fails_with_exit_code_one() {
    let out = verify(&["--scenario", &scenario("corrupt.scn")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("CHECK bianchi[c0]")).unwrap();
    assert!(line.contains(" FAIL "));
    assert!(!line.contains("residual_terms=0 "));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let path = scratch_file("noseed", "algebra gl 2\nconnection c0 random\nsuite bianchi\n");
    let out = verify(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("seed required"), "{}", stderr(&out));
}

#[test]
fn syntax_errors_report_line_and_column() {
    let path = scratch_file("syntax", "algebra gl 2\n\ndim 5x\n");
    let out = verify(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("s.scn:3:5: expected a non-negative integer"), "{}", stderr(&out));
}

#[test]
fn overrides_change_the_scenario() {
    let base = ["--suite", "closedness", "--n", "2", "--dim", "7", "--degree", "1"];
    let a = json(&[&base[..], &["--seed", "99"]].concat());
    let b = json(&[&base[..], &["--seed", "100"]].concat());
    assert_ne!(a.scenario_hash, b.scenario_hash);
    assert!(a.all_pass && b.all_pass);
}

#[test]
fn low_dimension_is_flagged() {
    let out = verify(&["--suite", "closedness", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("WARN dim 4 is below 2n+3"));
}

#[test]
fn descent_levels_from_the_command_line() {
    let r = json(&["--suite", "descent", "--p", "1,0"]);
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["descent[p=0]", "descent[p=1]"]);
    assert!(r.all_pass);
}

#[test]
fn repeated_runs_are_identical_apart_from_timing() {
    let args = ["--suite", "triangle", "--suite", "graded-relations"];
    let a = json(&args).without_timing();
    let b = json(&args).without_timing();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn custom_files_resolve_relative_to_the_scenario() {
    let out = verify(&["--scenario", &scenario("custom.scn"), "--suite", "validate", "--suite", "chern-weil"]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
}

#[test]
fn poincare_scenario_passes() {
    let out = verify(&["--scenario", &scenario("poincare.scn")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = verify(&["--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown suite"));
}

#[test]
fn spot_checks_appear_in_json() {
    // two points on each of the two Bianchi residuals
    let r = json(&["--suite", "bianchi", "--spot", "2"]);
    assert!(r.checks.iter().all(|c| c.spot.as_ref().is_some_and(|s| s.points == 4 && s.nonzero == 0)), "{:?}", r.checks);
}
