//! End-to-end tests of the `flagvar` binary: command output, file artifacts,
//! determinism, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn flagvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): stdout={} stderr={}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        )
    })
}

fn assertion_passes(report: &Value, name: &str) -> bool {
    report["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|a| a["name"] == name && a["pass"] == Value::Bool(true))
}

#[test]
fn describe_projective_space_components() {
    let out = flagvar(&["describe", "--space", "cp", "--n", "2"]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["component_dimensions"], serde_json::json!([8, 2]));
}

#[test]
fn describe_maximal_flag_with_empty_theta() {
    let out = flagvar(&["describe", "--family", "A", "--rank", "2", "--theta"]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["components"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_theta_is_a_usage_error() {
    let out = flagvar(&["describe", "--family", "A", "--rank", "2", "--theta", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_space_is_a_usage_error() {
    let out = flagvar(&["describe", "--space", "nowhere"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_vector_reports_criteria() {
    let out = flagvar(&[
        "check-vector",
        "--space",
        "cp",
        "--n",
        "1",
        "--vector",
        "A12 A11",
        "--lambda",
        "1,2",
    ]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["geodesic"], Value::Bool(false));
    assert_eq!(report["results"]["equigeodesic"], Value::Bool(false));
    // The same vector is geodesic for the normal metric.
    let out = flagvar(&[
        "check-vector",
        "--space",
        "cp",
        "--n",
        "1",
        "--vector",
        "A12 A11",
    ]);
    let report = json_of(&out);
    assert_eq!(report["results"]["geodesic"], Value::Bool(true));
}

#[test]
fn pairs_on_the_maximal_flag() {
    let out = flagvar(&["pairs", "--space", "su3-maxflag", "--alpha", "a13"]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["count"], 1);
    let pair = &report["results"]["pairs"][0];
    assert_eq!(pair["beta"], "a12");
    assert_eq!(pair["delta"], "a23");
    // A simple root has none.
    let out = flagvar(&["pairs", "--space", "su3-maxflag", "--alpha", "a12"]);
    let report = json_of(&out);
    assert_eq!(report["results"]["count"], 0);
}

#[test]
fn index_form_with_finite_difference_check() {
    let out = flagvar(&[
        "index-form",
        "--space",
        "cp",
        "--n",
        "1",
        "--alpha",
        "a11",
        "--b",
        "1",
        "--k",
        "1",
        "--fd-check",
    ]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert!(assertion_passes(&report, "fd_matches_index"));
    let m = report["results"]["m_normal"].as_f64().unwrap();
    assert!((m - 79.2506).abs() < 1e-3);
}

#[test]
fn witness_failure_exits_one() {
    let out = flagvar(&[
        "witness",
        "--space",
        "su3-maxflag",
        "--alpha",
        "a13",
        "--b",
        "1",
        "--k",
        "1",
        "--xi",
        "-0.9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert!(!assertion_passes(&report, "index_negative"));
}

#[test]
fn witness_success_inside_interval() {
    let out = flagvar(&[
        "witness",
        "--space",
        "su3-maxflag",
        "--alpha",
        "a13",
        "--b",
        "1",
        "--k",
        "1",
        "--xi",
        "-0.99",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    assert!(assertion_passes(&report, "index_negative"));
    assert!(report["results"]["index"].as_f64().unwrap() < 0.0);
}

#[test]
fn reproduce_example_5_4() {
    let out = flagvar(&["reproduce", "example5.4", "--b", "1", "--k", "1"]);
    assert!(out.status.success());
    let report = json_of(&out);
    let bound = report["results"]["xi_upper_bound"].as_f64().unwrap();
    assert!((bound + 0.98705).abs() < 1e-4, "bound {bound}");
    assert!(assertion_passes(&report, "xi_bound_matches_closed_form"));
    assert!(assertion_passes(&report, "index_negative"));
}

#[test]
fn reproduce_unknown_name_is_usage_error() {
    let out = flagvar(&["reproduce", "thm9.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_flow_pipeline() {
    let out = flagvar(&["reproduce", "thm4.10", "--n", "10", "--b", "7.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    assert!(report["results"]["index_direct"].as_f64().unwrap() < 0.0);
    assert!(report["results"]["r0"].as_f64().unwrap() > 0.0);
    assert!(assertion_passes(&report, "scaled_matches_direct"));
}

#[test]
fn reproduce_conjugate_time_estimates() {
    for name in ["conjtime-cp3", "conjtime-su3"] {
        let out = flagvar(&["reproduce", name]);
        assert!(out.status.success(), "{name}");
        let report = json_of(&out);
        let est = report["results"]["estimate"].as_f64().unwrap();
        assert!((est - 3.8476).abs() < 0.02 * 3.8476, "{name}: {est}");
        assert!(assertion_passes(&report, "estimate_within_2pct"));
    }
}

#[test]
fn ricci_flow_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = flagvar(&[
        "ricci-flow",
        "--n",
        "10",
        "--x0",
        "1",
        "--y0",
        "1",
        "--t-end",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "t,x,y,region");
    let first = lines.next().unwrap();
    assert!(first.ends_with(",R2"), "{first}");
    let report = json_of(&out);
    assert_eq!(report["results"]["halt"], "Completed");
}

#[test]
fn phase_portrait_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("field.csv");
    let svg = dir.path().join("portrait.svg");
    let traj_csv = dir.path().join("traj.csv");
    let out = flagvar(&[
        "phase-portrait",
        "--n",
        "10",
        "--grid",
        "20x20",
        "--csv",
        csv.to_str().unwrap(),
        "--traj",
        "1,1",
        "--traj-csv",
        traj_csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().count(), 401); // header + 400 samples
    let svg_body = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_body.contains(r#"data-slope="5.375""#));
    assert!(svg_body.contains(r#"data-slope="0.5""#));
    assert!(std::fs::read_to_string(&traj_csv)
        .unwrap()
        .starts_with("traj,t,x,y,region"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = flagvar(&[
        "phase-portrait",
        "--n",
        "1",
        "--grid",
        "2x2",
        "--csv",
        "/nonexistent-dir/field.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_configuration_gives_identical_bytes() {
    let run = || {
        flagvar(&[
            "reproduce", "example5.4", "--b", "1.3", "--k", "0.8",
        ])
        .stdout
    };
    assert_eq!(run(), run());
    let describe = || flagvar(&["describe", "--space", "cp", "--n", "2"]).stdout;
    assert_eq!(describe(), describe());
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "b = 1.0\nk = 1.0 # amplitude\n").unwrap();
    let via_config = flagvar(&[
        "reproduce",
        "example5.4",
        "--config",
        conf.to_str().unwrap(),
    ]);
    assert!(via_config.status.success());
    let via_flags = flagvar(&["reproduce", "example5.4", "--b", "1", "--k", "1"]);
    assert_eq!(via_config.stdout, via_flags.stdout);
    // A flag overrides the file.
    let overridden = flagvar(&[
        "reproduce",
        "example5.4",
        "--config",
        conf.to_str().unwrap(),
        "--k",
        "0.5",
    ]);
    let report = json_of(&overridden);
    assert_eq!(report["params"]["k"], serde_json::json!(0.5));
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path: std::path::PathBuf = dir.path().join("report.json");
    let out = flagvar(&[
        "describe",
        "--space",
        "su3-maxflag",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(report["command"], "describe");
}

#[test]
fn conjtime_with_expectation() {
    // Coarse mesh keeps this test quick; the tolerance covers it.
    let out = flagvar(&[
        "conjtime",
        "--space",
        "cp",
        "--n",
        "1",
        "--x",
        "A11",
        "--b-lo",
        "3.2",
        "--b-hi",
        "4.4",
        "--mesh",
        "12",
        "--expect",
        "3.8476",
        "--tol-rel",
        "0.04",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_of(&out);
    assert!(assertion_passes(&report, "estimate_matches_expected"));
}
