//! Impedance parameter sweeps.
//!
//! A sweep document names a scenario, one impedance parameter and the values
//! to try:
//!
//! ```json
//! { "scenario": "case1_gate.json", "parameter": "d",
//!   "values": [12.5, 12.6, 12.7, 12.8],
//!   "base": { "m": 1.9, "d": 12.6, "k": 20.88 } }
//! ```
//!
//! `scenario` is either a path, resolved relative to the sweep document, or
//! an inline scenario object. `base` defaults to the scenario's own
//! impedance parameters. Each value gets one SwarmPath run; the runs are
//! independent and execute on separate threads.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use swarmpath_core::impedance::critical_damping;
use swarmpath_core::metrics::RunMetrics;
use swarmpath_core::simulator::{run, Controller};
use swarmpath_core::{ImpedanceParams, ScenarioSpec};

use crate::report::{sig6, RunReport};
use crate::scenario::{load_scenario, load_scenario_file, ScenarioError};

/// Rows whose damping lies this close to `2√(mk)` are marked critical.
pub const CRITICAL_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    M,
    D,
    K,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::M => "m",
            SweepParameter::D => "d",
            SweepParameter::K => "k",
        }
    }

    pub fn apply(self, base: ImpedanceParams, value: f64) -> ImpedanceParams {
        match self {
            SweepParameter::M => ImpedanceParams { m: value, ..base },
            SweepParameter::D => ImpedanceParams { d: value, ..base },
            SweepParameter::K => ImpedanceParams { k: value, ..base },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("cannot read {path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
    #[error("malformed sweep document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("sweep scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("sweep run for {parameter}={value}: {source}")]
    Run { parameter: &'static str, value: f64, source: swarmpath_core::Error },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseDoc {
    m: f64,
    d: f64,
    k: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScenarioRef {
    Path(String),
    Inline(serde_json::Value),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepDoc {
    scenario: ScenarioRef,
    parameter: SweepParameter,
    values: Vec<f64>,
    #[serde(default)]
    base: Option<BaseDoc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: ImpedanceParams,
    pub scenario: ScenarioSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.values.is_empty() {
            return Err(SweepError::Invalid("values must be non-empty".to_owned()));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(SweepError::Invalid(format!("values must be positive, found {v}")));
        }
        for &v in &self.values {
            let mut spec = self.scenario.clone();
            spec.impedance = self.parameter.apply(self.base, v);
            spec.validate().map_err(|e| SweepError::Invalid(format!("{}={v}: {e}", self.parameter.name())))?;
        }
        Ok(())
    }
}

/// Parse a sweep document; relative scenario paths resolve against `dir`.
pub fn load_sweep(text: &str, dir: &Path) -> Result<SweepSpec, SweepError> {
    let doc: SweepDoc = serde_json::from_str(text)?;
    let scenario = match doc.scenario {
        ScenarioRef::Path(p) => load_scenario_file(&dir.join(p))?,
        ScenarioRef::Inline(v) => load_scenario(&v.to_string())?,
    };
    let base = doc.base.map(|b| ImpedanceParams { m: b.m, d: b.d, k: b.k }).unwrap_or(scenario.impedance);
    let spec = SweepSpec { parameter: doc.parameter, values: doc.values, base, scenario };
    spec.validate()?;
    Ok(spec)
}

pub fn load_sweep_file(path: &Path) -> Result<SweepSpec, SweepError> {
    let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io { path: path.to_owned(), source })?;
    load_sweep(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Serialize)]
pub struct SweepImpedance {
    pub m: f64,
    pub d: f64,
    pub k: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub impedance: SweepImpedance,
    pub critical_damping: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub run: RunReport,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub parameter: &'static str,
    pub controller: &'static str,
    pub rows: Vec<SweepRow>,
}

/// `Some("critically damped (2√(mk)=…)")` when `p` is critically damped to
/// within [`CRITICAL_TOLERANCE`].
pub fn critical_note(p: &ImpedanceParams) -> Option<String> {
    let c = critical_damping(p.m, p.k).ok()?;
    ((p.d - c).abs() < CRITICAL_TOLERANCE).then(|| format!("critically damped (2√(mk)={c:.3})"))
}

/// Run every value of the sweep, concurrently, and collect rows in value order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = spec
            .values
            .iter()
            .map(|&value| {
                s.spawn(move || {
                    let mut scenario = spec.scenario.clone();
                    scenario.impedance = spec.parameter.apply(spec.base, value);
                    run(&scenario, Controller::SwarmPath)
                        .map(|trace| (value, scenario.impedance, RunMetrics::of(&trace)))
                        .map_err(|source| SweepError::Run { parameter: spec.parameter.name(), value, source })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        let (value, p, metrics) = r?;
        rows.push(SweepRow {
            value,
            impedance: SweepImpedance { m: p.m, d: p.d, k: p.k },
            critical_damping: critical_damping(p.m, p.k).map(sig6).unwrap_or(f64::NAN),
            note: critical_note(&p),
            run: RunReport::from(&metrics),
        });
    }
    Ok(SweepReport { parameter: spec.parameter.name(), controller: Controller::SwarmPath.tag(), rows })
}

/// Table with one row per drone and one column per swept value, followed by
/// outcome and note rows.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("drone");
    for row in &report.rows {
        write!(out, ",{}={}", report.parameter, row.value).unwrap();
    }
    out.push('\n');
    let drones = report.rows.first().map_or(0, |r| r.run.drones.len());
    for i in 0..drones {
        write!(out, "{}", i + 1).unwrap();
        for row in &report.rows {
            write!(out, ",{}", row.run.drones[i].path_length).unwrap();
        }
        out.push('\n');
    }
    out.push_str("outcome");
    for row in &report.rows {
        write!(out, ",{}", row.run.outcome).unwrap();
    }
    out.push_str("\nnote");
    for row in &report.rows {
        write!(out, ",{}", row.note.as_deref().unwrap_or("")).unwrap();
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use swarmpath_core::Vec2;

    fn small_sweep(parameter: SweepParameter, values: Vec<f64>) -> SweepSpec {
        let scenario = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(1.0, 0.0));
        SweepSpec { parameter, values, base: ImpedanceParams::DEFAULT, scenario }
    }

    #[test]
    fn critical_note_only_near_identity() {
        let p = ImpedanceParams::DEFAULT;
        assert_eq!(critical_note(&p).as_deref(), Some("critically damped (2√(mk)=12.597)"));
        assert_eq!(critical_note(&ImpedanceParams { d: 12.5, ..p }), None);
        assert_eq!(critical_note(&ImpedanceParams { d: 12.7, ..p }), None);
    }

    #[test]
    fn rejects_empty_and_non_positive_values() {
        assert!(matches!(small_sweep(SweepParameter::D, vec![]).validate(), Err(SweepError::Invalid(_))));
        assert!(matches!(small_sweep(SweepParameter::D, vec![12.6, 0.0]).validate(), Err(SweepError::Invalid(_))));
        assert!(matches!(small_sweep(SweepParameter::K, vec![-1.0]).validate(), Err(SweepError::Invalid(_))));
    }

    #[test]
    fn rows_follow_value_order() {
        let spec = small_sweep(SweepParameter::K, vec![29.0, 20.88, 21.0]);
        let report = run_sweep(&spec).unwrap();
        let ks: Vec<f64> = report.rows.iter().map(|r| r.impedance.k).collect();
        assert_eq!(ks, vec![29.0, 20.88, 21.0]);
    }

    #[test]
    fn csv_shape() {
        let report = run_sweep(&small_sweep(SweepParameter::D, vec![12.5, 12.6])).unwrap();
        let csv = sweep_csv(&report);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "drone,d=12.5,d=12.6");
        assert_eq!(lines.len(), 1 + 4 + 2);
        assert_eq!(lines[5], "outcome,completed,completed");
        assert_eq!(lines[6], "note,,critically damped (2√(mk)=12.597)");
    }

    #[test]
    fn parses_inline_scenario_and_default_base() {
        let text = r#"{"scenario":{"start":[0,0],"goal":[2,0]},"parameter":"m","values":[1.9]}"#;
        let spec = load_sweep(text, Path::new(".")).unwrap();
        assert_eq!(spec.base, ImpedanceParams::DEFAULT);
        assert_eq!(spec.parameter, SweepParameter::M);
    }

    #[test]
    fn unknown_parameter_is_parse_error() {
        let text = r#"{"scenario":{"start":[0,0],"goal":[2,0]},"parameter":"q","values":[1.0]}"#;
        assert!(matches!(load_sweep(text, Path::new(".")), Err(SweepError::Parse(_))));
    }
}
