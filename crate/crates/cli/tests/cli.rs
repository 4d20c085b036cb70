//! End-to-end tests of the `collab` binary: output conventions, exit
//! codes, and byte-determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn collab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn repo_path(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn analyze_renders_verdict_and_condition_values() {
    let out = collab(&["analyze", &repo_path("scenarios/table3.json")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("complementary: yes (gap 0.050)"));
    assert!(text.contains("n2-condition: satisfied (lhs 0.500000000, rhs 0.700000000)"));
    assert!(text.contains("covariance-condition: satisfied (lhs 0.125000000, rhs 0.175000000)"));
}

#[test]
fn analyze_json_is_full_precision() {
    let out = collab(&["analyze", &repo_path("scenarios/table1.json"), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["averages"]["combined"].as_f64().unwrap(), 0.785);
    assert_eq!(
        value["complementarity"]["satisfied"],
        serde_json::json!(false)
    );
}

#[test]
fn analyze_is_byte_deterministic() {
    let first = collab(&["analyze", &repo_path("scenarios/table6.json")]);
    let second = collab(&["analyze", &repo_path("scenarios/table6.json")]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn analyze_csv_to_stdout_has_pinned_shape() {
    let out = collab(&["analyze", &repo_path("scenarios/table3.json"), "--csv", "-"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let csv: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("regime,"))
        .collect();
    assert_eq!(csv[0], "regime,human,algorithm,combined,weight");
    assert_eq!(csv.len(), 4); // header + regime1 + regime2 + average
}

#[test]
fn check_all_passes_on_shipped_scenarios() {
    for name in ["table1", "table2", "table3", "table4", "table5", "table6"] {
        let path = repo_path(&format!("scenarios/{name}.json"));
        let out = collab(&["check", &path, "--lemma", "all"]);
        assert!(out.status.success(), "{name} check failed");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("FAIL"), "{name}:\n{text}");
    }
}

#[test]
fn check_unknown_claim_is_an_input_error() {
    let out = collab(&[
        "check",
        &repo_path("scenarios/table3.json"),
        "--lemma",
        "perpetual-motion",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("n2-condition"),
        "should list valid tags: {err}"
    );
}

#[test]
fn missing_file_exits_2() {
    let out = collab(&["analyze", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_combiner_exits_2_and_lists_tags() {
    let dir = std::env::temp_dir().join("collab-cli-test-invalid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"version":1,"name":"x","regimes":[{"p":1.0,"human_loss":1,"algo_loss":1}],
           "combiner":{"type":"oracle"}}"#,
    )
    .unwrap();
    let out = collab(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("oracle") && err.contains("two-stage"));
}

#[test]
fn optimize_unconstrained_matches_per_regime_minimum() {
    let out = collab(&["optimize", &repo_path("scenarios/table3.json"), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // min(1.15, 0.2)/2 + min(0.35, 0.8)/2 = 0.275
    assert!((value["optimal_average"].as_f64().unwrap() - 0.275).abs() < 1e-9);
}

#[test]
fn sweep_reports_grid_and_exports_row_major_csv() {
    let dir = std::env::temp_dir().join("collab-cli-test-sweep");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("sweep.csv");
    let out = collab(&[
        "sweep",
        &repo_path("scenarios/fig2_sweep.json"),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("50 x 50 grid, 2500 cells"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 2501);
    // Row-major: first two rows share delta_a and step through delta_h.
    let rows: Vec<&str> = csv.lines().skip(1).take(2).collect();
    let a0 = rows[0].split(',').next().unwrap();
    let a1 = rows[1].split(',').next().unwrap();
    assert_eq!(a0, a1);
}

#[test]
fn falsify_reports_zero_counterexamples() {
    let out = collab(&[
        "falsify",
        "--lemma",
        "covariance-condition",
        "--trials",
        "2000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2000 trials, 0 counterexamples"));
}

#[test]
fn reproduce_all_passes() {
    let out = collab(&["reproduce", "all"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.contains("reproduce fig3: PASS"));
}
