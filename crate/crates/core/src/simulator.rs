//! Fixed-step simulation loop producing replayable traces.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::baseline::{baseline_step_among, initial_baseline, BaselineDroneState};
use crate::error::{Error, Result};
use crate::topology::{swarm_step_among, LinkMode, SwarmState};
use crate::vec2::Vec2;
use crate::world::{Obstacle, ScenarioSpec};

/// Consecutive stalled steps after which a run is abandoned.
pub const STALL_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Controller {
    SwarmPath,
    ConventionalApf,
}

impl Controller {
    pub fn tag(self) -> &'static str {
        match self {
            Controller::SwarmPath => "swarmpath",
            Controller::ConventionalApf => "conventional-apf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    MaxSteps,
    Stalled,
}

impl Outcome {
    pub fn tag(self) -> &'static str {
        match self {
            Outcome::Completed => "completed",
            Outcome::MaxSteps => "max_steps",
            Outcome::Stalled => "stalled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneSample {
    pub position: Vec2,
    pub mode: LinkMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t: f64,
    /// Virtual leader position; absent for the conventional-APF controller.
    pub leader: Option<Vec2>,
    pub drones: Vec<DroneSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub spec: ScenarioSpec,
    pub controller: Controller,
    pub frames: Vec<Frame>,
    pub outcome: Outcome,
}

impl SimulationTrace {
    pub fn drone_count(&self) -> usize {
        self.frames.first().map_or(0, |f| f.drones.len())
    }

    /// Position history of one drone.
    pub fn positions(&self, drone: usize) -> impl Iterator<Item = Vec2> + '_ {
        self.frames.iter().map(move |f| f.drones[drone].position)
    }
}

/// Slack on the completion test. Followers are carried by the leader's
/// displacement, so they sit a few ulps off `leader + offset`; without it a
/// leader parked exactly on the goal threshold can leave the formation
/// forever incomplete.
pub const COMPLETION_SLACK: f64 = 1e-9;

/// Every drone within the goal threshold of its own goal.
pub fn is_complete(spec: &ScenarioSpec, frame: &Frame) -> bool {
    let limit = spec.apf.goal_threshold + COMPLETION_SLACK;
    frame.drones.iter().enumerate().all(|(i, d)| d.position.distance(spec.drone_goal(i)) <= limit)
}

/// Full controller state between steps.
#[derive(Debug, Clone, PartialEq)]
pub enum ControllerState {
    SwarmPath(SwarmState),
    ConventionalApf { drones: Vec<BaselineDroneState>, step: usize },
}

impl ControllerState {
    pub fn initial(spec: &ScenarioSpec, controller: Controller) -> Self {
        match controller {
            Controller::SwarmPath => ControllerState::SwarmPath(SwarmState::initial(spec)),
            Controller::ConventionalApf => {
                ControllerState::ConventionalApf { drones: initial_baseline(spec), step: 0 }
            }
        }
    }

    pub fn step_index(&self) -> usize {
        match self {
            ControllerState::SwarmPath(s) => s.step,
            ControllerState::ConventionalApf { step, .. } => *step,
        }
    }

    /// Observable part of the state.
    pub fn frame(&self, dt: f64) -> Frame {
        match self {
            ControllerState::SwarmPath(s) => Frame {
                t: s.t,
                leader: Some(s.leader.position),
                drones: s.drones.iter().map(|d| DroneSample { position: d.position, mode: d.mode }).collect(),
            },
            ControllerState::ConventionalApf { drones, step } => Frame {
                t: *step as f64 * dt,
                leader: None,
                drones: drones
                    .iter()
                    .map(|d| DroneSample { position: d.position, mode: LinkMode::LeaderLinked })
                    .collect(),
            },
        }
    }

    /// Whether the controller made no progress this step because of a
    /// vanishing field.
    pub fn is_stalled(&self) -> bool {
        match self {
            ControllerState::SwarmPath(s) => s.leader.stalled,
            ControllerState::ConventionalApf { drones, .. } => drones.iter().any(|d| d.stalled),
        }
    }

    pub fn advance(&self, spec: &ScenarioSpec, obstacles: &[Obstacle]) -> Result<Self> {
        match self {
            ControllerState::SwarmPath(s) => Ok(ControllerState::SwarmPath(swarm_step_among(s, spec, obstacles)?)),
            ControllerState::ConventionalApf { drones, step } => Ok(ControllerState::ConventionalApf {
                drones: baseline_step_among(drones, spec, obstacles)?,
                step: step + 1,
            }),
        }
    }
}

/// Simulate `spec` under `controller` until completion, `max_steps`, or a
/// persistent stall.
pub fn run(spec: &ScenarioSpec, controller: Controller) -> Result<SimulationTrace> {
    let obstacles = spec.effective_obstacles();
    let mut state = ControllerState::initial(spec, controller);
    let first = state.frame(spec.dt);
    let mut outcome = if is_complete(spec, &first) { Some(Outcome::Completed) } else { None };
    let mut frames = vec![first];
    let mut stalled_run = 0;
    while outcome.is_none() && state.step_index() < spec.max_steps {
        state = state
            .advance(spec, &obstacles)
            .map_err(|e| Error::AtStep { step: state.step_index() + 1, source: Box::new(e) })?;
        let frame = state.frame(spec.dt);
        let complete = is_complete(spec, &frame);
        frames.push(frame);
        stalled_run = if state.is_stalled() { stalled_run + 1 } else { 0 };
        if complete {
            outcome = Some(Outcome::Completed);
        } else if stalled_run >= STALL_LIMIT {
            outcome = Some(Outcome::Stalled);
        }
    }
    Ok(SimulationTrace {
        spec: spec.clone(),
        controller,
        frames,
        outcome: outcome.unwrap_or(Outcome::MaxSteps),
    })
}
