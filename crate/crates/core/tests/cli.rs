//! End-to-end tests of the `mogp` binary: exit codes, stdout formats, and
//! report files, driven through real processes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn mogp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mogp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

fn write_problem(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn analyze_reports_dimensions() {
    let out = mogp(&["analyze", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("variables: 4 (x1, x2, x3, x4)"), "{text}");
    assert!(text.contains("objectives: 2 with terms 4, 1"), "{text}");
    assert!(text.contains("constraints: 2 with terms 2, 1"), "{text}");
    assert!(text.contains("scalarized terms: 8"), "{text}");
    assert!(text.contains("degree of difficulty: 3"), "{text}");
}

#[test]
fn solve_reports_optimum() {
    let out = mogp(&[
        "solve",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("status: optimal"), "{text}");
    assert!(text.contains("V: 43.99888"), "{text}");
    assert!(text.contains("Z: 43.99888"), "{text}");
    assert!(text.contains("unique: true"), "{text}");
    assert!(text.contains("active constraints: 1, 2"), "{text}");
}

#[test]
fn solve_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = mogp(&[
        "solve",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let point = &doc["points"][0];
    assert_eq!(point["status"], "optimal");
    assert_eq!(point["weights"], serde_json::json!([0.5, 0.5]));
    let value = point["dual"]["value"].as_f64().unwrap();
    assert!((value - 43.99888).abs() < 1e-3, "value {value}");
    assert_eq!(point["primal"]["x"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_rejects_weight_count_mismatch() {
    let out = mogp(&[
        "solve",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.2,0.3,0.5",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("expected 2 weights, got 3"), "{}", stderr(&out));
}

#[test]
fn solve_rejects_weights_not_summing_to_one() {
    let out = mogp(&[
        "solve",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.6",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = mogp(&[
        "solve",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--frobnicate",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_zero() {
    let out = mogp(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Usage"));
}

#[test]
fn missing_file_is_usage_error() {
    let out = mogp(&["analyze", "/nonexistent/problem.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));
}

#[test]
fn malformed_json_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "broken.json", "{\"variables\": [\"x1\"],");
    let out = mogp(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
}

#[test]
fn unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(
        &dir,
        "extra.json",
        r#"{
            "variables": ["x1"],
            "objectives": [{"sense": "min", "terms": [{"coef": 1.0, "exps": {"x1": 1.0}}]}],
            "constraints": [],
            "extra": 1
        }"#,
    );
    let out = mogp(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("extra"), "{}", stderr(&out));
}

#[test]
fn structurally_infeasible_solve_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(
        &dir,
        "unbounded_below.json",
        r#"{
            "variables": ["x1"],
            "objectives": [{"sense": "min", "terms": [{"coef": 1.0, "exps": {"x1": 1.0}}]}],
            "constraints": []
        }"#,
    );
    let out = mogp(&["solve", path.to_str().unwrap(), "--weights", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("infeasible"), "{}", stderr(&out));
}

#[test]
fn sweep_writes_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("a.csv");
    let csv2 = dir.path().join("b.csv");
    let csv3 = dir.path().join("c.csv");
    let problem = fixture("example2.json");
    let base = ["sweep", problem.to_str().unwrap(), "--step", "0.25", "--csv"];

    let run1 = mogp(&[&base[..], &[csv1.to_str().unwrap()]].concat());
    assert_eq!(code(&run1), 0, "{}", stderr(&run1));
    let run2 = mogp(&[&base[..], &[csv2.to_str().unwrap()]].concat());
    assert_eq!(code(&run2), 0);
    let run3 = mogp(&[&base[..], &[csv3.to_str().unwrap(), "--parallel", "2"]].concat());
    assert_eq!(code(&run3), 0);

    let bytes1 = std::fs::read(&csv1).unwrap();
    assert_eq!(bytes1, std::fs::read(&csv2).unwrap(), "reruns must be byte-identical");
    assert_eq!(bytes1, std::fs::read(&csv3).unwrap(), "parallel sweep must match sequential");

    let text = String::from_utf8(bytes1).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "w1,w2,w01,w02,w03,w11,w12,w21,V");
    let blank = lines.iter().position(|l| l.is_empty()).expect("blank separator line");
    assert_eq!(lines[blank + 1], "w1,w2,x1,x2,x3,Z");
    assert_eq!(lines.len(), 2 * (1 + 3) + 1, "three grid points per table");

    let text1 = stdout(&run1);
    assert!(text1.contains("w1=0.5 w2=0.5: optimal"), "{text1}");
    assert!(text1.contains("nondominated"), "{text1}");
}

#[test]
fn sweep_with_failed_points_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(
        &dir,
        "conflicting.json",
        r#"{
            "variables": ["x1", "x2"],
            "objectives": [
                {"sense": "min", "terms": [{"coef": 1.0, "exps": {"x1": 1.0}}]},
                {"sense": "min", "terms": [{"coef": 1.0, "exps": {"x2": 1.0}}]}
            ],
            "constraints": [
                {"terms": [{"coef": 1.0, "exps": {"x1": 1.0, "x2": 1.0}}], "bound": 1.0}
            ]
        }"#,
    );
    let csv = dir.path().join("out.csv");
    let out = mogp(&[
        "sweep",
        path.to_str().unwrap(),
        "--step",
        "0.5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("error:"), "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.contains("nan")), "{text}");
}

#[test]
fn ideal_reports_each_objective() {
    let out = mogp(&["ideal", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("ideal 1: 87.98776"), "{text}");
    assert!(text.contains("ideal 2: error: dual program is infeasible"), "{text}");
}

#[test]
fn check_accepts_feasible_point() {
    let out = mogp(&[
        "check",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--x",
        "5.084056,2.682555,7.332314,5.748367",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("feasible: true"), "{text}");
    assert!(text.contains("Z: 43.99888"), "{text}");
}

#[test]
fn check_rejects_infeasible_point() {
    let out = mogp(&[
        "check",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--x",
        "1,1,1,1",
    ]);
    assert_eq!(code(&out), 4);
    let text = stdout(&out);
    assert!(text.contains("violated"), "{text}");
    assert!(text.contains("feasible: false"), "{text}");
}

#[test]
fn check_rejects_nonpositive_point() {
    let out = mogp(&[
        "check",
        fixture("example1.json").to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--x=-1,1,1,1",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("strictly positive"), "{}", stderr(&out));
}
