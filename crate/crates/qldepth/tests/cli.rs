//! End-to-end checks of the command-line interface: golden output, exit
//! codes, determinism, and report idempotency.
//!
//! Set `QLDEPTH_REGEN_FIXTURES=1` to rewrite the golden files from current
//! output instead of comparing.

use qldepth::{AnalysisReport, four_branch_example, serialize_pair};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qldepth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os("QLDEPTH_REGEN_FIXTURES").is_some() {
        std::fs::write(path, actual).expect("fixture written");
        return;
    }
    let expected = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
    assert_eq!(actual, expected, "output diverges from {}", path.display());
}

#[test]
fn shipped_reference_document_matches_builtin() {
    let path = fixture_path("fixtures/four_branch.json");
    let text = serialize_pair(&four_branch_example());
    check_golden(&path, &text);

    let parsed = qldepth::parse_pair(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed, four_branch_example());
}

#[test]
fn table_output_is_golden() {
    let actual = stdout_of(&["table", "--example"]);
    check_golden(&fixture_path("golden/four_branch_table.txt"), &actual);
}

#[test]
fn shallow_table_rows_are_zero() {
    let actual = stdout_of(&["table", "--example", "--shallow"]);
    let mut lines = actual.lines();
    assert_eq!(lines.next(), Some("pair | final | accumulated"));
    for line in lines {
        assert!(line.ends_with("| 0.0 | 0.0"), "unexpected row: {line}");
    }
}

#[test]
fn analyze_reproduces_reference_numbers() {
    let text = stdout_of(&["analyze", "--example", "--format", "machine"]);
    let report = AnalysisReport::from_machine_str(&text).unwrap();
    assert_eq!(report.halting.per_branch, vec![0.5, 0.5, 0.5, 0.0]);
    assert_eq!(report.halting.deep, 0.375);
    assert!((report.halting.theta.unwrap() - 1.8235).abs() < 1e-3);
    assert!((report.entropy.l_d - 21.0 / 13.0).abs() < 1e-11);
    assert_eq!(report.entropy.gamma, 0.17);
    assert!((report.entropy.gamma_min.unwrap() - 1.0 / 6.0).abs() < 1e-11);
    assert_eq!(report.witness.phi, 0.5);
    assert!((report.witness.purity_deep - 0.7966).abs() < 5e-4);
    assert_eq!(report.witness.purity_shallow, 1.0);
    assert!(report.witness.observable);
}

#[test]
fn analyze_output_is_bit_stable() {
    let first = stdout_of(&["analyze", "--example", "--format", "machine"]);
    let second = stdout_of(&["analyze", "--example", "--format", "machine"]);
    assert_eq!(first, second);
    let table_a = stdout_of(&["analyze", "--example"]);
    let table_b = stdout_of(&["analyze", "--example"]);
    assert_eq!(table_a, table_b);
}

#[test]
fn machine_report_reserializes_identically() {
    let text = stdout_of(&["analyze", "--example", "--format", "machine"]);
    let report = AnalysisReport::from_machine_str(&text).unwrap();
    assert_eq!(report.to_machine_string(), text);
}

#[test]
fn generate_round_trips_and_is_deterministic() {
    let doc = stdout_of(&[
        "generate", "--m", "2", "--n", "3", "--t", "4", "--seed", "1",
    ]);
    let again = stdout_of(&[
        "generate", "--m", "2", "--n", "3", "--t", "4", "--seed", "1",
    ]);
    assert_eq!(doc, again);

    let pair = qldepth::parse_pair(&doc).unwrap();
    assert_eq!(serialize_pair(&pair), doc);
    assert!(qldepth::validate_matching(&pair).matched);
}

#[test]
fn analyze_accepts_generated_documents() {
    let dir = std::env::temp_dir().join("qldepth-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let doc_path = dir.join("generated.json");
    let out_path = dir.join("report.json");

    let status = bin()
        .args([
            "generate", "--m", "2", "--n", "3", "--t", "4", "--seed", "9",
        ])
        .arg("--output")
        .arg(&doc_path)
        .status()
        .unwrap();
    assert!(status.success());

    let status = bin()
        .arg("analyze")
        .arg("--input")
        .arg(&doc_path)
        .args(["--format", "machine"])
        .arg("--output")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());

    let report =
        AnalysisReport::from_machine_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // The pipeline solves the steering angle before reporting.
    assert!((report.halting.deep - report.halting.shallow).abs() <= 1e-9);
    assert!(report.pair.complexity_matched);
}

#[test]
fn no_match_keeps_unequal_probabilities() {
    let dir = std::env::temp_dir().join("qldepth-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let doc_path = dir.join("unmatched.json");

    // The built-in pair with the steering angle zeroed halts unequally.
    let pair = four_branch_example().with_steering_angle(0.0).unwrap();
    std::fs::write(&doc_path, serialize_pair(&pair)).unwrap();

    let text = stdout_of(&[
        "analyze",
        "--input",
        doc_path.to_str().unwrap(),
        "--no-match",
        "--format",
        "machine",
    ]);
    let report = AnalysisReport::from_machine_str(&text).unwrap();
    assert_eq!(report.halting.theta, Some(0.0));
    assert!((report.halting.deep - report.halting.shallow).abs() > 0.1);
}

#[test]
fn exit_codes_by_error_class() {
    let dir = std::env::temp_dir().join("qldepth-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    // 1: unreadable input.
    let out = run(&["analyze", "--input", "/nonexistent/pair.json"]);
    assert_eq!(out.status.code(), Some(1));

    // 1: malformed document, diagnostic names the location.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"m\": 2,").unwrap();
    let out = run(&["analyze", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    // 1: generator bounds.
    let out = run(&[
        "generate", "--m", "0", "--n", "3", "--t", "4", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // 2: schema is fine but an invariant is broken.
    let invalid = dir.join("invalid.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&serialize_pair(&four_branch_example())).unwrap();
    doc["deep_branches"].as_array_mut().unwrap().pop();
    std::fs::write(&invalid, doc.to_string()).unwrap();
    let out = run(&["analyze", "--input", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("branch count"));

    // 3: steering cannot reach the deep halting probability.
    let infeasible = dir.join("infeasible.json");
    let mut pair = four_branch_example();
    pair.shallow.steps[3] = qldepth::GateOp::Ry(0, 0.0);
    std::fs::write(&infeasible, serialize_pair(&pair)).unwrap();
    let out = run(&["analyze", "--input", infeasible.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("achievable range"));
}

#[test]
fn witness_and_match_subcommands() {
    let witness = stdout_of(&["witness", "--example", "--format", "machine"]);
    let section: serde_json::Value = serde_json::from_str(&witness).unwrap();
    assert_eq!(section["model"], "semiclassical");
    assert_eq!(section["purity_shallow"], 1.0);

    let matched = stdout_of(&["match", "--example", "--format", "machine"]);
    let section: serde_json::Value = serde_json::from_str(&matched).unwrap();
    let theta = section["theta"].as_f64().unwrap();
    assert!((theta - 1.8235).abs() < 1e-3);
    assert_eq!(section["iterations"], 0);

    let table = stdout_of(&["witness", "--example"]);
    assert!(table.starts_with("witness (semiclassical"));
}
