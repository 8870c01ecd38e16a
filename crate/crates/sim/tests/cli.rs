use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_swarmpath-sim"));
    cmd.env_remove("SWARMPATH_OUT");
    cmd
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn run_writes_trace_metrics_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", scenarios().join("case1_gate.json").to_str().unwrap(), "--controller", "swarmpath", "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["trace.csv", "metrics.json", "trace.svg"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let m = json(&dir.path().join("metrics.json"));
    assert_eq!(m["controller"], "swarmpath");
    assert_eq!(m["outcome"], "completed");
    assert_eq!(m["drones"].as_array().unwrap().len(), 4);
}

#[test]
fn missing_scenario_exits_1_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["run", "no/such/scenario.json", "-o"]).arg(dir.path()).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/scenario.json"));
}

#[test]
fn invalid_scenario_exits_1_with_the_violation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"start":[0,0],"goal":[5,0],"obstacles":[{"center":[2.5,2],"radius":0.5,"r_apf":0.6,"r_imp":0.3}]}"#)
        .unwrap();
    let out = bin().arg("run").arg(&bad).arg("-o").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius < r_imp violated"));
}

#[test]
fn one_step_budget_exits_2_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", scenarios().join("case1_gate.json").to_str().unwrap(), "--max-steps", "1", "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2, "header, initial frame and one step");
    assert_eq!(json(&dir.path().join("metrics.json"))["outcome"], "max_steps");
}

#[test]
fn out_dir_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SWARMPATH_OUT", dir.path())
        .args(["run", scenarios().join("open_field.json").to_str().unwrap(), "--controller", "apf", "--dt", "0.02"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let m = json(&dir.path().join("metrics.json"));
    assert_eq!(m["controller"], "conventional-apf");
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.lines().nth(2).unwrap().starts_with("0.02,,,"));
}

#[test]
fn compare_open_field_is_a_tie() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["compare", scenarios().join("open_field.json").to_str().unwrap(), "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let r = json(&dir.path().join("comparison.json"));
    let ratio = r["time_ratio"].as_f64().unwrap();
    assert!((0.95..=1.05).contains(&ratio), "{ratio}");
    assert_eq!(r["ape"]["label"], "APE (path-length-normalized)");
    for f in ["trace_swarmpath.csv", "trace_apf.csv", "comparison.svg"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
}

#[test]
fn compare_reports_a_stalled_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["compare", scenarios().join("trap_local_minimum.json").to_str().unwrap(), "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let r = json(&dir.path().join("comparison.json"));
    assert_eq!(r["baseline"]["outcome"], "stalled");
    assert_eq!(r["swarmpath"]["outcome"], "completed");
    assert!(r["swarmpath"]["completion_time"].as_f64().unwrap() > 0.0);
    assert!(r["time_ratio"].is_null());
    assert!(r["reference_pairs"].as_array().unwrap().iter().all(|p| p["ratio"].is_null()));
}

#[test]
fn sweep_flags_the_critical_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["sweep", scenarios().join("sweep_d.json").to_str().unwrap(), "-o"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&dir.path().join("sweep.json"));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let flagged: Vec<f64> = rows.iter().filter(|row| row.get("note").is_some()).map(|row| row["value"].as_f64().unwrap()).collect();
    assert_eq!(flagged, vec![12.6]);
    assert_eq!(rows[1]["note"], "critically damped (2√(mk)=12.597)");
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("drone,d=12.5,d=12.6,d=12.7,d=12.8\n"));
}

#[test]
fn single_value_sweep_row_matches_run_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = scenarios().join("case1_gate.json");
    let spec = dir.path().join("one.json");
    std::fs::write(&spec, format!(r#"{{"scenario":{:?},"parameter":"k","values":[20.88]}}"#, scenario.to_str().unwrap()))
        .unwrap();
    assert_eq!(code(&bin().arg("sweep").arg(&spec).arg("-o").arg(dir.path().join("s")).output().unwrap()), 0);
    assert_eq!(code(&bin().arg("run").arg(&scenario).arg("-o").arg(dir.path().join("r")).output().unwrap()), 0);
    let sweep = json(&dir.path().join("s/sweep.json"));
    let metrics = json(&dir.path().join("r/metrics.json"));
    assert_eq!(sweep["rows"][0]["run"], metrics);
}

#[test]
fn validate_is_repeatable_and_dt_hook_fails() {
    let a = bin().arg("validate").output().unwrap();
    let b = bin().arg("validate").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status, b.status);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("max |x - x_exact|"), "{text}");

    let coarse = bin().args(["validate", "--dt", "0.5"]).output().unwrap();
    assert_ne!(code(&coarse), 0);
    assert!(String::from_utf8_lossy(&coarse.stdout).contains("FAIL"));
}

#[test]
fn hidden_flag_is_not_advertised() {
    let help = bin().args(["validate", "--help"]).output().unwrap();
    assert!(!String::from_utf8_lossy(&help.stdout).contains("--dt"));
}
