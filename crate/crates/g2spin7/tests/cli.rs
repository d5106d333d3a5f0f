//! End-to-end checks of the binary: exit codes, report shape, and the
//! documented decompose/fm-check examples.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_g2spin7"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_file(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

/// Pulls the printed value for an entry id out of the line-oriented output.
fn value_of<'a>(out: &'a str, id: &str) -> &'a str {
    out.lines()
        .find(|l| l.split_whitespace().nth(1) == Some(id))
        .unwrap_or_else(|| panic!("no entry {id} in output:\n{out}"))
        .split_whitespace()
        .nth(2)
        .unwrap()
}

#[test]
fn identity_suite_passes_and_reports_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = dir.path().join("a.json");
    let r2 = dir.path().join("b.json");

    let out = bin()
        .args(["verify-identities", "--mode", "exact", "--samples", "6", "--seed", "11"])
        .arg("--report")
        .arg(&r1)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("PASS"));
    assert!(text.lines().filter(|l| l.starts_with("pass")).count() >= 15);

    let again = bin()
        .args(["verify-identities", "--mode", "exact", "--samples", "6", "--seed", "11"])
        .arg("--report")
        .arg(&r2)
        .output()
        .unwrap();
    assert_eq!(code(&again), 0);
    assert_eq!(
        std::fs::read(&r1).unwrap(),
        std::fs::read(&r2).unwrap(),
        "same config must give a byte-identical report"
    );

    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&r1).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "verify-identities");
    assert_eq!(report["mode"], "exact");
    assert_eq!(report["pass"], true);
    assert!(report["entries"].as_array().unwrap().len() >= 15);
}

#[test]
fn float_suite_passes() {
    let out = run(&["verify-identities", "--mode", "float", "--samples", "24", "--seed", "5"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn mutation_hook_flips_the_verdict() {
    let out = run(&[
        "verify-identities",
        "--mode",
        "exact",
        "--samples",
        "4",
        "--mutate",
        "phi:flip-sign:e246",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAIL  g2.contraction"));
    assert!(text.trim_end().ends_with("FAIL"));

    let bad = run(&["verify-identities", "--mutate", "nonsense"]);
    assert_eq!(code(&bad), 2);

    let misplaced = run(&["counterexample-search", "--mutate", "phi:flip-sign:e246"]);
    assert_eq!(code(&misplaced), 2);
}

#[test]
fn decompose_matches_the_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    // lambda^2(e^1) = (e^01 + e^23 + e^45 + e^67)/2 lies in the 7-summand.
    let lam = write_file(
        dir.path(),
        "lam.json",
        r#"{"dim": 8, "grade": 2, "terms": [
            {"indices": [0, 1], "coef": "1/2"}, {"indices": [2, 3], "coef": "1/2"},
            {"indices": [4, 5], "coef": "1/2"}, {"indices": [6, 7], "coef": "1/2"}]}"#,
    );
    let out = run(&["decompose", &lam, "--structure", "spin7"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(value_of(&text, "component.7"), "1");
    assert_eq!(value_of(&text, "component.rest"), "0");

    // tau_1 = e^01 + e^23 splits evenly across the 7- and 21-summands.
    let tau = write_file(
        dir.path(),
        "tau.json",
        r#"{"dim": 8, "grade": 2, "terms": [
            {"indices": [0, 1], "coef": "1"}, {"indices": [2, 3], "coef": "1"}]}"#,
    );
    let text = stdout(&run(&["decompose", &tau, "--structure", "spin7"]));
    assert_eq!(value_of(&text, "component.7"), "1");
    assert_eq!(value_of(&text, "component.rest"), "1");

    // The calibration 4-form has no 7-summand part.
    let phi = write_file(
        dir.path(),
        "phi.json",
        r#"{"dim": 8, "grade": 4, "terms": [
            {"indices": [0,1,2,3], "coef": "1"}, {"indices": [4,5,6,7], "coef": "1"},
            {"indices": [0,1,4,5], "coef": "1"}, {"indices": [0,1,6,7], "coef": "1"},
            {"indices": [2,3,4,5], "coef": "1"}, {"indices": [2,3,6,7], "coef": "1"},
            {"indices": [0,2,4,6], "coef": "1"}, {"indices": [0,2,5,7], "coef": "-1"},
            {"indices": [1,3,4,6], "coef": "-1"}, {"indices": [1,3,5,7], "coef": "1"},
            {"indices": [0,3,4,7], "coef": "-1"}, {"indices": [0,3,5,6], "coef": "-1"},
            {"indices": [1,2,4,7], "coef": "-1"}, {"indices": [1,2,5,6], "coef": "-1"}]}"#,
    );
    let text = stdout(&run(&["decompose", &phi, "--structure", "spin7"]));
    assert_eq!(value_of(&text, "component.7"), "0");
    assert_eq!(value_of(&text, "component.rest"), "14");

    // A vector contraction of phi is pure 7-summand on the G2 side.
    let seven = write_file(
        dir.path(),
        "seven.json",
        r#"{"dim": 7, "grade": 2, "terms": [
            {"indices": [2, 3], "coef": "1"}, {"indices": [4, 5], "coef": "1"},
            {"indices": [6, 7], "coef": "1"}]}"#,
    );
    let text = stdout(&run(&["decompose", &seven, "--structure", "g2"]));
    assert_eq!(value_of(&text, "component.7"), "3");
    assert_eq!(value_of(&text, "component.14"), "0");
}

#[test]
fn decompose_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write_file(
        dir.path(),
        "odd.json",
        r#"{"dim": 8, "grade": 3, "terms": [{"indices": [0, 1, 2], "coef": "1"}]}"#,
    );
    assert_eq!(code(&run(&["decompose", &odd, "--structure", "spin7"])), 2);

    let wrong_dim = write_file(
        dir.path(),
        "wrong.json",
        r#"{"dim": 8, "grade": 2, "terms": [{"indices": [0, 1], "coef": "1"}]}"#,
    );
    assert_eq!(code(&run(&["decompose", &wrong_dim, "--structure", "g2"])), 2);

    let mixed = write_file(
        dir.path(),
        "mixed.json",
        r#"{"dim": 7, "grade": 2, "terms": [
            {"indices": [1, 2], "coef": "1"}, {"indices": [1, 3], "coef": 0.5}]}"#,
    );
    assert_eq!(code(&run(&["decompose", &mixed, "--structure", "g2"])), 2);

    assert_eq!(code(&run(&["decompose", "no-such-file.json", "--structure", "g2"])), 2);
}

#[test]
fn fm_check_runs_the_documented_cases() {
    let dir = tempfile::tempdir().unwrap();

    // Constant sections: flat graphs, every residual exactly zero.
    let constant = write_file(
        dir.path(),
        "const.json",
        r#"{"case": "spin7",
            "f": {"f4": [["1/3", [0, 0, 0, 0]]], "f6": [["-2", [0, 0, 0, 0]]]},
            "grid": 2}"#,
    );
    let out = run(&["fm-check", &constant]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(value_of(&text, "geo.tau"), "0");
    assert_eq!(value_of(&text, "conn.full.r1"), "0");
    assert_eq!(value_of(&text, "conn.full.r2"), "0");

    // The holomorphic graph is Cayley; both sides vanish on every grid point.
    let holo = write_file(
        dir.path(),
        "holo.json",
        r#"{"case": "spin7",
            "f": {"f4": [["1", [1, 0, 1, 0]], ["-1", [0, 1, 0, 1]]],
                  "f5": [["1", [1, 0, 0, 1]], ["1", [0, 1, 1, 0]]]},
            "grid": 3}"#,
    );
    let out = run(&["fm-check", &holo]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(value_of(&text, "geo.tau"), "0");
    assert_eq!(value_of(&text, "conn.section.r1"), "0");
    assert_eq!(value_of(&text, "conn.section.r2"), "0");
    assert!(text.contains("pass  cayley-iff-section-pair"));

    // A generic linear associative graph: nonzero residuals, statuses agree.
    let linear = write_file(
        dir.path(),
        "linear.json",
        r#"{"case": "g2_assoc",
            "f": {"f4": [["1/3", [1, 0, 0]]], "f5": [["-1/2", [0, 1, 0]]]},
            "A": {"A1": [["1/5", [0, 0, 1]]]},
            "grid": 2}"#,
    );
    let out = run(&["fm-check", &linear]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_ne!(value_of(&text, "geo.assoc"), "0");
    assert!(text.contains("pass  assoc-iff-section-pair"));
    assert!(text.trim_end().ends_with("PASS"));

    // Mode conflicts and float coefficient files.
    assert_eq!(code(&run(&["fm-check", &linear, "--mode", "float"])), 2);
    let float_file = write_file(
        dir.path(),
        "float.json",
        r#"{"case": "g2_assoc", "f": {"f4": [[0.25, [1, 0, 0]]]}, "grid": 2}"#,
    );
    assert_eq!(code(&run(&["fm-check", &float_file])), 0);
    assert_eq!(code(&run(&["fm-check", &float_file, "--mode", "exact"])), 2);

    // Grid override; zero is rejected.
    assert_eq!(code(&run(&["fm-check", &constant, "--grid", "3"])), 0);
    assert_eq!(code(&run(&["fm-check", &constant, "--grid", "0"])), 2);
}

#[test]
fn search_command_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("search.json");
    let out = bin()
        .args(["counterexample-search", "--restarts", "2", "--iters", "40", "--seed", "3"])
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    // Best-effort: informative regardless of whether a witness turned up.
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let parsed: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(parsed["command"], "counterexample-search");
    assert!(parsed["entries"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["id"] == "search.witness"));

    assert_eq!(code(&run(&["counterexample-search", "--mode", "exact"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["verify-identities", "--mode", "complex"])), 2);
    assert_eq!(code(&run(&[])), 2);
}
