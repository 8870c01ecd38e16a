//! CSV trace files.
//!
//! One header row, then one row per frame:
//!
//! ```text
//! t,leader_x,leader_y,drone1_x,drone1_y,drone1_mode,drone2_x,...
//! 0,0,0,0.4,0.4,L,0.4,-0.4,L,...
//! ```
//!
//! Drones are numbered from 1. The mode column is `L` for a leader link and
//! `O<k>` for a link to obstacle `k`, counted from 0 over the scenario's
//! obstacles followed by each gate's two poles. Conventional-APF traces have
//! no leader, so both leader columns are empty.
//!
//! Numbers are written in shortest round-trip form, so a reloaded trace is
//! bit-identical to the one that was written.

use std::fmt::Write as _;

use swarmpath_core::simulator::{is_complete, Controller, DroneSample, Frame, Outcome, SimulationTrace};
use swarmpath_core::topology::LinkMode;
use swarmpath_core::{ScenarioSpec, Vec2};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TraceError {
    #[error("trace is empty")]
    Empty,
    #[error("unexpected trace header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Row { line: usize, msg: String },
    #[error("trace has {found} drones but the scenario has {expected}")]
    DroneCount { expected: usize, found: usize },
}

pub fn header(drone_count: usize) -> String {
    let mut h = String::from("t,leader_x,leader_y");
    for i in 1..=drone_count {
        write!(h, ",drone{i}_x,drone{i}_y,drone{i}_mode").unwrap();
    }
    h
}

pub fn mode_code(mode: LinkMode) -> String {
    match mode {
        LinkMode::LeaderLinked => "L".to_owned(),
        LinkMode::ObstacleLinked(k) => format!("O{k}"),
    }
}

pub fn parse_mode(code: &str) -> Option<LinkMode> {
    match code {
        "L" => Some(LinkMode::LeaderLinked),
        _ => {
            let digits = code.strip_prefix('O')?;
            // Reject signs and empty suffixes that `parse` would tolerate.
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok().map(LinkMode::ObstacleLinked)
        }
    }
}

pub fn write_trace(trace: &SimulationTrace) -> String {
    let n = trace.drone_count();
    let mut out = header(n);
    out.push('\n');
    for frame in &trace.frames {
        write!(out, "{}", frame.t).unwrap();
        match frame.leader {
            Some(p) => write!(out, ",{},{}", p.x, p.y).unwrap(),
            None => out.push_str(",,"),
        }
        for d in &frame.drones {
            write!(out, ",{},{},{}", d.position.x, d.position.y, mode_code(d.mode)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn num(field: &str, line: usize, what: &str) -> Result<f64, TraceError> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| TraceError::Row { line, msg: format!("bad {what} value {field:?}") })
}

/// Parse a trace written by [`write_trace`] for `spec`.
///
/// The controller is recovered from the leader columns and the outcome from
/// the final frame: complete if every drone is home, `max_steps` if the run
/// used its whole step budget, stalled otherwise.
pub fn read_trace(text: &str, spec: &ScenarioSpec) -> Result<SimulationTrace, TraceError> {
    let mut lines = text.lines();
    let head = lines.next().ok_or(TraceError::Empty)?;
    let cols = head.split(',').count();
    if cols < 3 || (cols - 3) % 3 != 0 || head != header((cols - 3) / 3) {
        return Err(TraceError::Header(head.to_owned()));
    }
    let n = (cols - 3) / 3;
    if n != spec.drone_count() {
        return Err(TraceError::DroneCount { expected: spec.drone_count(), found: n });
    }

    let mut frames = Vec::new();
    let mut controller = None;
    for (idx, row) in lines.enumerate() {
        let line = idx + 2;
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != cols {
            return Err(TraceError::Row { line, msg: format!("expected {cols} fields, found {}", fields.len()) });
        }
        let t = num(fields[0], line, "t")?;
        let leader = match (fields[1], fields[2]) {
            ("", "") => None,
            (x, y) => Some(Vec2::new(num(x, line, "leader_x")?, num(y, line, "leader_y")?)),
        };
        let this = if leader.is_some() { Controller::SwarmPath } else { Controller::ConventionalApf };
        if *controller.get_or_insert(this) != this {
            return Err(TraceError::Row { line, msg: "leader columns present in only some rows".to_owned() });
        }
        let mut drones = Vec::with_capacity(n);
        for i in 0..n {
            let base = 3 + 3 * i;
            let position = Vec2::new(num(fields[base], line, "drone x")?, num(fields[base + 1], line, "drone y")?);
            let mode = parse_mode(fields[base + 2])
                .ok_or_else(|| TraceError::Row { line, msg: format!("bad mode {:?}", fields[base + 2]) })?;
            drones.push(DroneSample { position, mode });
        }
        frames.push(Frame { t, leader, drones });
    }

    let last = frames.last().ok_or(TraceError::Empty)?;
    let outcome = if is_complete(spec, last) {
        Outcome::Completed
    } else if frames.len() > spec.max_steps {
        Outcome::MaxSteps
    } else {
        Outcome::Stalled
    };
    Ok(SimulationTrace {
        spec: spec.clone(),
        controller: controller.unwrap_or(Controller::SwarmPath),
        frames,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use swarmpath_core::simulator::run;

    #[test]
    fn header_names_drones_from_one() {
        assert_eq!(header(2), "t,leader_x,leader_y,drone1_x,drone1_y,drone1_mode,drone2_x,drone2_y,drone2_mode");
    }

    #[test]
    fn mode_codes() {
        assert_eq!(mode_code(LinkMode::LeaderLinked), "L");
        assert_eq!(mode_code(LinkMode::ObstacleLinked(3)), "O3");
        assert_eq!(parse_mode("O12"), Some(LinkMode::ObstacleLinked(12)));
        assert_eq!(parse_mode("L"), Some(LinkMode::LeaderLinked));
        for bad in ["", "O", "O+1", "O-1", "X", "l"] {
            assert_eq!(parse_mode(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn baseline_rows_leave_leader_empty() {
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(1.0, 0.0));
        spec.max_steps = 2;
        let text = write_trace(&run(&spec, Controller::ConventionalApf).unwrap());
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("0,,,0.4,0.4,L,"), "{row}");
    }

    #[test]
    fn short_run_round_trips_with_outcome() {
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(1.0, 0.0));
        spec.max_steps = 3;
        let trace = run(&spec, Controller::SwarmPath).unwrap();
        assert_eq!(trace.outcome, Outcome::MaxSteps);
        assert_eq!(read_trace(&write_trace(&trace), &spec).unwrap(), trace);
    }

    #[test]
    fn rejects_wrong_drone_count() {
        let spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(1.0, 0.0));
        let text = format!("{}\n0,0,0,0,0,L\n", header(1));
        assert_eq!(read_trace(&text, &spec), Err(TraceError::DroneCount { expected: 4, found: 1 }));
    }

    #[test]
    fn rejects_ragged_row() {
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(1.0, 0.0));
        spec.formation_offsets = vec![Vec2::ZERO];
        let text = format!("{}\n0,0,0,0,0\n", header(1));
        assert!(matches!(read_trace(&text, &spec), Err(TraceError::Row { line: 2, .. })));
    }
}
