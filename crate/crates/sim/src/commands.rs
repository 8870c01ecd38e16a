//! The four subcommands, as library functions so they can be tested without
//! spawning processes. Each returns the exit status the binary should use;
//! errors map to exit status 1.

use std::path::{Path, PathBuf};

use swarmpath_core::metrics::{ape, compare, RunMetrics};
use swarmpath_core::simulator::{run, Controller, Outcome, SimulationTrace};
use swarmpath_core::ScenarioSpec;

use crate::plot::render_svg;
use crate::report::{comparison_report, to_json, RunReport};
use crate::scenario::{load_scenario_file, ScenarioError};
use crate::sweep::{load_sweep_file, run_sweep, sweep_csv, SweepError};
use crate::trace_io::write_trace;
use crate::validate::validate_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Every run completed.
    Success,
    /// Input or validation error.
    Error,
    /// Outputs were written but some run ended at max_steps or stalled.
    Incomplete,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Error => 1,
            ExitStatus::Incomplete => 2,
        }
    }

    fn of(outcomes: &[Outcome]) -> Self {
        if outcomes.iter().all(|o| *o == Outcome::Completed) {
            ExitStatus::Success
        } else {
            ExitStatus::Incomplete
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] swarmpath_core::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

/// Step-size and step-budget overrides from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOverrides {
    pub dt: Option<f64>,
    pub max_steps: Option<usize>,
}

fn load_with(path: &Path, overrides: RunOverrides) -> Result<ScenarioSpec, CliError> {
    let mut spec = load_scenario_file(path)?;
    if let Some(dt) = overrides.dt {
        spec.dt = dt;
    }
    if let Some(n) = overrides.max_steps {
        spec.max_steps = n;
    }
    spec.validate().map_err(ScenarioError::from)?;
    Ok(spec)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_owned(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Write { path: path.clone(), source })?;
    Ok(path)
}

/// Files written by a command, in the order they were written.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub status: ExitStatus,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn run_summary(trace: &SimulationTrace) -> String {
    let m = RunMetrics::of(trace);
    match m.completion_time {
        Some(t) => format!("{}: {} in {t:.2} s", m.controller.tag(), m.outcome.tag()),
        None => format!("{}: {} after {} frames", m.controller.tag(), m.outcome.tag(), trace.frames.len()),
    }
}

/// `run`: one controller on one scenario → `trace.csv`, `metrics.json`, `trace.svg`.
pub fn cmd_run(
    scenario: &Path,
    controller: Controller,
    out_dir: &Path,
    overrides: RunOverrides,
) -> Result<CommandOutput, CliError> {
    let spec = load_with(scenario, overrides)?;
    let trace = run(&spec, controller)?;
    let files = vec![
        write(out_dir, "trace.csv", &write_trace(&trace))?,
        write(out_dir, "metrics.json", &to_json(&RunReport::from(&RunMetrics::of(&trace))))?,
        write(out_dir, "trace.svg", &render_svg(&spec, &[&trace]))?,
    ];
    Ok(CommandOutput { status: ExitStatus::of(&[trace.outcome]), files, summary: run_summary(&trace) })
}

/// `compare`: both controllers on one scenario → both traces,
/// `comparison.json` and an overlay plot.
pub fn cmd_compare(scenario: &Path, out_dir: &Path) -> Result<CommandOutput, CliError> {
    let spec = load_scenario_file(scenario)?;
    let (sp, bl) = std::thread::scope(|s| {
        let sp = s.spawn(|| run(&spec, Controller::SwarmPath));
        let bl = s.spawn(|| run(&spec, Controller::ConventionalApf));
        (sp.join().expect("swarmpath run panicked"), bl.join().expect("baseline run panicked"))
    });
    let (sp, bl) = (sp?, bl?);

    let mut report = compare(&sp, &bl)?;
    // Divergence of each SwarmPath drone from its conventional-APF counterpart.
    report.ape = (0..sp.drone_count()).map(|i| ape(&sp, &bl, i)).collect::<Result<Vec<_>, _>>().ok();
    let files = vec![
        write(out_dir, "trace_swarmpath.csv", &write_trace(&sp))?,
        write(out_dir, "trace_apf.csv", &write_trace(&bl))?,
        write(out_dir, "comparison.json", &to_json(&comparison_report(&report)))?,
        write(out_dir, "comparison.svg", &render_svg(&spec, &[&sp, &bl]))?,
    ];
    let mut summary = format!("{}\n{}", run_summary(&sp), run_summary(&bl));
    if let Some(r) = report.comparison.as_ref().and_then(|c| c.time_ratio) {
        summary.push_str(&format!("\ntime ratio {r:.3}"));
    }
    Ok(CommandOutput { status: ExitStatus::of(&[sp.outcome, bl.outcome]), files, summary })
}

/// `sweep`: one SwarmPath run per value → `sweep.json`, `sweep.csv`.
pub fn cmd_sweep(sweep_spec: &Path, out_dir: &Path) -> Result<CommandOutput, CliError> {
    let spec = load_sweep_file(sweep_spec)?;
    let report = run_sweep(&spec)?;
    let files = vec![write(out_dir, "sweep.json", &to_json(&report))?, write(out_dir, "sweep.csv", &sweep_csv(&report))?];
    let all_done = report.rows.iter().all(|r| r.run.outcome == Outcome::Completed.tag());
    let summary = format!("{} values of {}", report.rows.len(), report.parameter);
    Ok(CommandOutput { status: if all_done { ExitStatus::Success } else { ExitStatus::Incomplete }, files, summary })
}

/// `validate`: integrator and force-law self-checks, printed to the summary.
pub fn cmd_validate(dt: f64) -> CommandOutput {
    let (text, ok) = validate_report(dt);
    CommandOutput { status: if ok { ExitStatus::Success } else { ExitStatus::Error }, files: Vec::new(), summary: text }
}
