//! End-to-end tests of the `chainsynth` binary: flag contracts, output
//! formats, exit codes, and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chainsynth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn chsh_prints_nine_decimals() {
    let out = run(&["chsh", "--settings", "corrected"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "2.828427125\n");

    let out = run(&["chsh"]);
    assert_eq!(stdout_of(&out), "2.828427125\n", "corrected is the default");

    let out = run(&["chsh", "--settings", "paper-verbatim"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "-2.828427125\n");
    assert!(
        stderr_of(&out).contains("paper-verbatim settings yield S = -2*sqrt(2)"),
        "provenance note expected on stderr"
    );
}

#[test]
fn chsh_rejects_unknown_settings() {
    let out = run(&["chsh", "--settings", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = run(&["chsh", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_prints_sixteen_rows_and_extremes() {
    let out = run(&["bound"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let data_rows = text.lines().filter(|l| l.contains("det:")).count();
    assert_eq!(data_rows, 16);
    assert!(text.contains("max exact_noncr: 0.750000000"));
    assert!(text.contains("min exact_noncr: 0.250000000"));
}

#[test]
fn exact_reports_strategy_values() {
    let out = run(&["exact", "--strategy", "det:++++"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("exact_noncr: 0.750000000"));
    assert!(text.contains("chsh_S: 2.000000000"));

    let out = run(&["exact", "--strategy", "quantum:corrected"]);
    let text = stdout_of(&out);
    assert!(text.contains("exact_noncr: 0.853553391"));
    assert!(text.contains("chsh_S: 2.828427125"));

    let out = run(&["exact", "--strategy", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_csv_contract() {
    let out = run(&[
        "simulate",
        "--strategy",
        "det:++++",
        "--steps",
        "4",
        "--seed",
        "7",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,type1,type2,s1,s2,cr");
    assert_eq!(lines.len(), 5, "header plus four rows");
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], i.to_string());
        assert_eq!(fields[3], "1", "det:++++ always shifts forward");
        assert_eq!(fields[4], "1");
    }
}

#[test]
fn simulate_rejects_zero_steps() {
    let out = run(&["simulate", "--strategy", "det:++++", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("steps must be ≥ 1"));
}

#[test]
fn simulate_rejects_bad_strategy() {
    let out = run(&["simulate", "--strategy", "det:+++++", "--steps", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_unwritable_path_is_io_error() {
    let out = run(&[
        "simulate",
        "--strategy",
        "det:++++",
        "--steps",
        "2",
        "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

/// Minimal JSON-schema conformance check against the shipped schema:
/// required keys, no extras, and primitive type agreement.
fn assert_matches_schema(report: &serde_json::Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).expect("schema file"))
            .expect("schema parses");
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let properties = schema["properties"].as_object().unwrap();
    let object = report.as_object().expect("report is an object");

    for key in &required {
        assert!(object.contains_key(*key), "missing required key {key}");
    }
    for (key, value) in object {
        let spec = properties
            .get(key)
            .unwrap_or_else(|| panic!("unexpected key {key} (additionalProperties: false)"));
        let allowed: Vec<String> = match &spec["type"] {
            serde_json::Value::String(s) => vec![s.clone()],
            serde_json::Value::Array(a) => {
                a.iter().map(|v| v.as_str().unwrap().to_string()).collect()
            }
            _ => panic!("schema type missing for {key}"),
        };
        let actual = match value {
            serde_json::Value::Null => "null",
            serde_json::Value::String(_) => "string",
            serde_json::Value::Number(n) => {
                if n.is_u64() || n.is_i64() {
                    "integer"
                } else {
                    "number"
                }
            }
            _ => "other",
        };
        assert!(
            allowed.iter().any(|t| t == actual || (t == "number" && actual == "integer")),
            "key {key}: type {actual} not allowed by schema {allowed:?}"
        );
    }
}

#[test]
fn simulate_json_report_matches_schema() {
    let out = run(&[
        "simulate",
        "--strategy",
        "quantum:corrected",
        "--steps",
        "2000",
        "--seed",
        "11",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_matches_schema(&report);
    assert_eq!(report["strategy"], "quantum:corrected");
    assert_eq!(report["steps"], 2000);
    assert_eq!(report["seed"], 11);
    assert!(report["makespan_s"].is_null());
    let noncr = report["noncr_fraction"].as_f64().unwrap();
    assert!((noncr - 0.8535533905932737).abs() < 0.05);
    let chsh = report["chsh_S"].as_f64().unwrap();
    assert!((chsh - 2.8284271247461903).abs() < 1e-9);
}

#[test]
fn identical_flags_and_seed_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    let args = |path: &PathBuf| {
        vec![
            "simulate".to_string(),
            "--strategy".to_string(),
            "quantum:corrected".to_string(),
            "--steps".to_string(),
            "500".to_string(),
            "--seed".to_string(),
            "42".to_string(),
            "--format".to_string(),
            "csv".to_string(),
            "--out".to_string(),
            path.display().to_string(),
        ]
    };
    assert!(bin().args(args(&path_a)).output().unwrap().status.success());
    assert!(bin().args(args(&path_b)).output().unwrap().status.success());
    let bytes_a = std::fs::read(&path_a).unwrap();
    let bytes_b = std::fs::read(&path_b).unwrap();
    assert_eq!(bytes_a, bytes_b);

    let path_c = dir.path().join("c.csv");
    let mut other_seed = args(&path_c);
    assert_eq!(other_seed[6], "42");
    other_seed[6] = "43".to_string();
    assert!(bin().args(&other_seed).output().unwrap().status.success());
    assert_ne!(bytes_a, std::fs::read(&path_c).unwrap());
}

#[test]
fn sweep_grid_and_maximum() {
    let out = run(&["sweep", "--from", "0", "--to", "1.5707963267948966", "--points", "9"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,chsh_S,noncr");
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[1], "0.000000000,2.000000000,0.750000000");
    // Midpoint of the grid is pi/4, the curve maximum.
    let mid: Vec<&str> = lines[5].split(',').collect();
    assert_eq!(mid[1], "2.828427125");
    assert_eq!(mid[2], "0.853553391");

    // Every row follows the closed forms S = 2(cos t + sin t) and
    // noncr = (1 + S/4)/2.
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (theta, s, noncr) = (fields[0], fields[1], fields[2]);
        assert!((s - 2.0 * (theta.cos() + theta.sin())).abs() < 1e-8);
        assert!((noncr - (1.0 + s / 4.0) / 2.0).abs() < 1e-8);
    }

    // Concavity on the grid: second differences of noncr are <= 0.
    let noncr: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let max = noncr.iter().cloned().fold(0.0, f64::max);
    assert!((max - 0.853553391).abs() < 1e-9);
    for w in noncr.windows(3) {
        assert!(w[2] - 2.0 * w[1] + w[0] <= 1e-9);
    }
}

#[test]
fn sweep_single_point() {
    let out = run(&[
        "sweep",
        "--from",
        "0.7853981633974483",
        "--to",
        "0.7853981633974483",
        "--points",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0.785398163,2.828427125"));

    let out = run(&["sweep", "--points", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_table_fields() {
    let out = run(&[
        "compare", "--d1", "1000", "--d2", "2000", "--d12", "299800000", "--cadence", "0.001",
        "--steps", "20000", "--seed", "3",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("quality ratio (quantum/classical): 1.138071187"));
    let feedback_row = text
        .lines()
        .find(|l| l.starts_with("two-way-feedback"))
        .expect("feedback row");
    assert!(feedback_row.contains("1.000000000"));
    assert!(text.contains("one-way-classical"));
    assert!(text.contains("one-way-quantum"));
}

#[test]
fn compare_rejects_negative_distance() {
    let out = run(&["compare", "--d1=-5", "--steps", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("nonnegative"));
}

#[test]
fn compare_zero_steps_is_undefined_quality() {
    let out = run(&["compare", "--steps", "0", "--d1", "299800000"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.matches("undefined").count(), 3);
    // d1 / signal_speed = 299800000 / 2.998e8 = exactly one second.
    assert!(text.contains("1.000000000"), "makespan is t0 = d1/speed: {text}");
}

#[test]
fn timeline_event_log() {
    let out = run(&[
        "timeline",
        "--mode",
        "two-way-feedback",
        "--d1",
        "299800000",
        "--d2",
        "599600000",
        "--d12",
        "149900000",
        "--cadence",
        "2",
        "--steps",
        "3",
        "--seed",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "step,emit_time,arrive1_time,arrive2_time,type1,type2,s1,s2,cr"
    );
    assert_eq!(lines.len(), 4);
    // d1/v = 1 s, d12/v = 0.5 s, t0 = 2 s, period = 2.5 s: relay arrivals
    // land on the step deadlines 4.5, 7.0, 9.5.
    assert!(lines[1].starts_with("0,3.000000000,4.000000000,4.500000000"));
    assert!(lines[3].starts_with("2,8.000000000,9.000000000,9.500000000"));
    for line in &lines[1..] {
        assert!(line.ends_with(",1"), "feedback rows all have cr = 1: {line}");
    }
}

#[test]
fn timeline_json_report() {
    let out = run(&[
        "timeline",
        "--mode",
        "one-way-quantum",
        "--d12",
        "10000000",
        "--cadence",
        "0.001",
        "--steps",
        "1000",
        "--seed",
        "8",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_matches_schema(&report);
    assert_eq!(report["strategy"], "quantum:corrected");
    // One-way makespan ignores d12 entirely: 1000 * 0.001.
    assert!((report["makespan_s"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let out = run(&[
        "timeline",
        "--mode",
        "two-way-feedback",
        "--steps",
        "100",
        "--format",
        "json",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_matches_schema(&report);
    assert_eq!(report["strategy"], "two-way-feedback");
    assert!(report["chsh_S"].is_null());
    assert_eq!(report["noncr_fraction"], 1.0);
}

#[test]
fn timeline_rejects_mode_strategy_mismatch() {
    let out = run(&[
        "timeline",
        "--mode",
        "one-way-classical",
        "--strategy",
        "quantum:corrected",
        "--steps",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "timeline",
        "--mode",
        "two-way-feedback",
        "--strategy",
        "det:++++",
        "--steps",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_dump_and_overlay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let prefix = dir.path().join("run");
    let out = run(&[
        "simulate",
        "--strategy",
        "quantum:corrected",
        "--steps",
        "400",
        "--seed",
        "21",
        "--out",
        report_path.to_str().unwrap(),
        "--dump-chains",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let chain1 = dir.path().join("run.chain1.txt");
    let chain2 = dir.path().join("run.chain2.txt");
    let text = std::fs::read_to_string(&chain1).unwrap();
    assert_eq!(text.lines().count(), 400);
    assert!(text.lines().all(|l| l.len() == 2));

    let out = run(&[
        "overlay",
        "--chain1",
        chain1.to_str().unwrap(),
        "--chain2",
        chain2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let overlay_text = stdout_of(&out);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let expected = format!(
        "noncr_fraction: {:.9}",
        report["noncr_fraction"].as_f64().unwrap()
    );
    assert!(
        overlay_text.contains(&expected),
        "overlay `{overlay_text}` vs report `{expected}`"
    );
}

#[test]
fn overlay_error_paths() {
    let out = run(&["overlay", "--chain1", "/no/such/file", "--chain2", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "a+\nb-\n").unwrap();
    std::fs::write(&b, "a+\n").unwrap();
    let out = run(&["overlay", "--chain1", a.to_str().unwrap(), "--chain2", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(&b, "zz\n").unwrap();
    let out = run(&["overlay", "--chain1", a.to_str().unwrap(), "--chain2", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
