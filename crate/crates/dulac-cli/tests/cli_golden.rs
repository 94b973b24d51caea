use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn corpus_entry(entry: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(entry)
}

fn assert_golden(entry: &str, command: &str) {
    let root = corpus_entry(entry);
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .arg(command)
        .arg(root.join("problem.json"))
        .output()
        .expect("failed to run dulac");
    assert!(
        output.status.success(),
        "'dulac {command}' failed on {entry}:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let expected = fs::read(root.join("expected").join(format!("{command}.json")))
        .unwrap_or_else(|_| panic!("no pinned report for {entry}/{command}"));
    assert_eq!(
        output.stdout, expected,
        "stdout for 'dulac {command}' on {entry} does not match the pinned report"
    );
}

#[test]
fn normalize_matches_pinned_report() {
    assert_golden("two-three-rotation", "normalize");
}

#[test]
fn resonances_matches_pinned_report() {
    assert_golden("four-state-cascade", "resonances");
}

#[test]
fn toric_matches_pinned_report() {
    assert_golden("rank-two-torus", "toric");
}

#[test]
fn walcher_matches_pinned_report() {
    assert_golden("nilpotent-semisimple-split", "walcher");
}

#[test]
fn verify_conservation_matches_pinned_report() {
    assert_golden("saddle-rational-commutant", "verify-conservation");
}

#[test]
fn check_darboux_matches_pinned_report() {
    assert_golden("resonant-saddle", "check-darboux");
}

#[test]
fn find_semi_invariants_matches_pinned_report() {
    assert_golden("saddle-product-integral", "find-semi-invariants");
}

#[test]
fn degree_flag_lowers_the_truncation() {
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .args(["normalize", "--degree", "3"])
        .arg(corpus_entry("cubic-shear").join("problem.json"))
        .output()
        .expect("failed to run dulac");
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).expect("reports are UTF-8");
    assert!(text.contains("\"degree\": 3"), "report ignored the override:\n{text}");
}

#[test]
fn degree_flag_beyond_the_file_is_an_input_error() {
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .args(["normalize", "--degree", "9"])
        .arg(corpus_entry("cubic-shear").join("problem.json"))
        .output()
        .expect("failed to run dulac");
    assert_eq!(output.status.code(), Some(3));
    let text = String::from_utf8(output.stdout).expect("reports are UTF-8");
    assert!(text.contains("input-error"), "unexpected report:\n{text}");
}

#[test]
fn out_flag_writes_the_report_instead_of_stdout() {
    let dir = tempfile::tempdir().expect("scratch directory");
    let path = dir.path().join("toric.json");
    let root = corpus_entry("saddle-product-integral");
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .arg("toric")
        .arg(root.join("problem.json"))
        .arg("--out")
        .arg(&path)
        .output()
        .expect("failed to run dulac");
    assert!(output.status.success());
    assert!(output.stdout.is_empty(), "report leaked to stdout");
    let written = fs::read(&path).expect("report file");
    let pinned = fs::read(root.join("expected/toric.json")).expect("pinned report");
    assert_eq!(written, pinned);
}

#[test]
fn search_degree_flag_changes_the_candidate_pool() {
    let run = |extra: &[&str]| {
        let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
            .arg("find-semi-invariants")
            .arg(corpus_entry("saddle-product-integral").join("problem.json"))
            .args(extra)
            .output()
            .expect("failed to run dulac");
        assert!(output.status.success());
        output.stdout
    };
    let narrowed = run(&["--deg", "1"]);
    let default = run(&[]);
    assert_ne!(narrowed, default, "the --deg bound never reached the search");
}

#[test]
fn batch_mode_emits_one_labeled_report_per_problem() {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dulac"))
            .args(["resonances", "--corpus"])
            .arg(&corpus)
            .output()
            .expect("failed to run dulac")
    };
    let first = run();
    // The corpus holds one deliberately unreadable entry, so the worst
    // exit code in the batch is the input-error one.
    assert_eq!(first.status.code(), Some(3));
    let parsed: serde_json::Value =
        serde_json::from_slice(&first.stdout).expect("batch output is JSON");
    let items = parsed.as_array().expect("batch output is an array");
    assert_eq!(items.len(), 19);
    for item in items {
        assert!(item.get("problem").is_some());
        assert!(item.get("report").is_some());
    }
    assert_eq!(first.stdout, run().stdout, "batch output drifted between runs");
}

#[test]
fn a_missing_file_reports_an_input_error() {
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .args(["normalize", "/no/such/problem.json"])
        .output()
        .expect("failed to run dulac");
    assert_eq!(output.status.code(), Some(3));
    let text = String::from_utf8(output.stdout).expect("reports are UTF-8");
    assert!(text.contains("input-error"), "unexpected report:\n{text}");
}

#[test]
fn an_unusable_corpus_directory_reports_an_error_on_stderr() {
    let output = Command::new(env!("CARGO_BIN_EXE_dulac"))
        .args(["resonances", "--corpus", "/no/such/corpus"])
        .output()
        .expect("failed to run dulac");
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8(output.stderr).expect("stderr is UTF-8");
    assert!(stderr.starts_with("error:"), "unexpected stderr:\n{stderr}");
}
