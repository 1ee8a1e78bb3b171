//! end-to-end runs of the binary against the shipped fixtures: exit codes,
//! summary lines, and the JSON report envelope.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfiber"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn matroid_info_matches_the_line_oracle() {
    let dir = tempfile::tempdir().expect("temp dir");
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "matroid-info",
        &fixture("u23_matroid.json"),
        "--json-out",
        report_path.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mobius number: 2"), "{text}");
    assert!(text.contains("circuits (1)"), "{text}");
    assert!(text.contains("flats: 5 total"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).expect("report written"))
            .expect("report parses");
    assert_eq!(report["command"], "matroid-info");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["primes"], serde_json::json!([5, 7]));
    assert_eq!(report["config"]["seed"], 42);
    assert_eq!(report["passed"], true);
    assert_eq!(report["report"]["mobius_number"], 2);
    assert_eq!(report["report"]["num_flats"], 5);
    assert_eq!(report["report"]["circuits"].as_array().expect("circuit list").len(), 1);
}

#[test]
fn bergman_betti_verifies_the_wedge() {
    let out = run(&["bergman-betti", &fixture("u34_matroid.json")]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[0, 3]"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");

    let out = run(&["bergman-betti", &fixture("u23_matroid.json")]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("[2]"), "{}", stdout(&out));
}

#[test]
fn parallel_pairs_get_a_notice_not_a_crash() {
    let out = run(&["bergman-betti", &fixture("parallel.json")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("hypothesis violation"), "{text}");
    assert!(text.contains("parallel elements [1, 2]"), "{text}");
    assert!(text.contains("verdict: FAIL"), "{text}");
}

#[test]
fn verify_initial_passes_on_every_cone() {
    let out = run(&["verify-initial", &fixture("u23.json"), "--primes", "5,7"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Tropical"), "{text}");
    assert!(!text.contains("MISMATCH"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn verify_initial_classifies_degenerate_weights() {
    let out = run(&["verify-initial", &fixture("u23.json"), "--weight", "1,1,1", "--primes", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("SumNonzero"), "{text}");
    assert!(text.contains("initial 0"), "{text}");

    let out = run(&["verify-initial", &fixture("u23.json"), "--weight", "1,-1,0", "--primes", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("LoopWeight"), "{text}");
    assert!(text.contains("initial 0"), "{text}");
    assert!(text.contains("degenerate Some(0)"), "{text}");
}

#[test]
fn strata_matches_the_frozen_table() {
    let out = run(&["strata", &fixture("u23.json"), "--primes", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("fiber total 3, stratified total 6"), "{text}");
    assert!(text.contains("identity 24 == 24"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn count_matches_the_boolean_and_uniform_oracles() {
    let out = run(&["count", &fixture("b2.json"), "--primes", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("fiber 4"), "{text}");
    assert!(text.contains("complement 16 (chi 16 ok)"), "{text}");

    let out = run(&["count", &fixture("u33.json"), "--primes", "7"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("fiber 36"), "{text}");
    assert!(text.contains("scalar action of order 3: 12 orbits, ok"), "{text}");
}

#[test]
fn invariance_reports_the_varying_family() {
    let out = run(&["invariance", &fixture("family_u24.json"), "--primes", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("fiber counts NOT CONSTANT"), "{text}");
    assert!(text.contains("complement counts constant = 8"), "{text}");
    assert!(text.contains("t=0: excluded"), "{text}");
    assert!(text.contains("verdict: FAIL"), "{text}");
}

#[test]
fn fan_report_summarizes_cones() {
    let out = run(&["fan-report", &fixture("u23_matroid.json")]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("fan of dimension 1 with 4 cones over 3 proper flats"), "{text}");
    assert!(text.contains("face closure: ok"), "{text}");
    assert!(text.contains("all cones unimodular: true"), "{text}");
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().expect("temp dir");
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = run(&[
            "count",
            &fixture("b2.json"),
            "--primes",
            "5",
            "--seed",
            "9",
            "--json-out",
            path.to_str().expect("utf8 path"),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    let a = std::fs::read_to_string(&first).expect("first report");
    let b = std::fs::read_to_string(&second).expect("second report");
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_str(&a).expect("report parses");
    assert_eq!(report["config"]["seed"], 9);
}

#[test]
fn malformed_and_invalid_inputs_error_out() {
    let dir = tempfile::tempdir().expect("temp dir");
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ bases: oops").expect("write fixture");
    let out = run(&["matroid-info", broken.to_str().expect("utf8 path")]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("parsing matroid file"), "{err}");
    assert!(err.contains("line 1"), "{err}");

    let exchange = dir.path().join("exchange.json");
    std::fs::write(&exchange, r#"{"n": 4, "d": 2, "bases": [[1, 2], [3, 4]]}"#)
        .expect("write fixture");
    let out = run(&["matroid-info", exchange.to_str().expect("utf8 path")]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("exchange axiom fails"), "{}", stderr(&out));
}
