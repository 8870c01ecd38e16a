//! Artificial potential field forces and the virtual-leader global planner.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vec2::Vec2;
use crate::world::{ApfParams, Obstacle, ScenarioSpec};

/// Lower clamp on surface distance, keeps `1/d_o` finite.
pub const MIN_SURFACE_DISTANCE: f64 = 1e-6;

/// Below this field magnitude a point is treated as a local minimum.
pub const STALL_FORCE: f64 = 1e-9;

/// Linear attraction `k_att * (goal - p)`.
pub fn attraction_force(p: Vec2, goal: Vec2, k_att: f64) -> Vec2 {
    (goal - p) * k_att
}

/// Repulsion of a single obstacle.
///
/// Magnitude `k_rep * (1/d_o - 1/d_safe)` with `d_o` the (clamped) surface
/// distance and `d_safe = obs.r_apf`, pointing from the obstacle center to
/// `p`; zero once `d_o > d_safe`.
pub fn repulsion_force(p: Vec2, obs: &Obstacle, k_rep: f64) -> Result<Vec2> {
    let offset = p - obs.center;
    let center_distance = offset.norm();
    let d_o = (center_distance - obs.radius).max(MIN_SURFACE_DISTANCE);
    let d_safe = obs.r_apf;
    if d_o > d_safe {
        return Ok(Vec2::ZERO);
    }
    if center_distance == 0.0 {
        return Err(Error::SingularRepulsion);
    }
    let magnitude = k_rep * (1.0 / d_o - 1.0 / d_safe);
    Ok(offset * (magnitude / center_distance))
}

pub fn total_force(p: Vec2, goal: Vec2, obstacles: &[Obstacle], apf: &ApfParams) -> Result<Vec2> {
    let mut force = attraction_force(p, goal, apf.k_att);
    for obs in obstacles {
        force += repulsion_force(p, obs, apf.k_rep)?;
    }
    Ok(force)
}

/// Result of one constant-speed descent step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentStep {
    pub position: Vec2,
    pub reached_goal: bool,
    pub stalled: bool,
}

/// Move `dt * speed` along the normalized field towards `goal`.
///
/// Shared by the virtual leader and the conventional-APF drones.
pub fn descend(
    position: Vec2,
    goal: Vec2,
    obstacles: &[Obstacle],
    apf: &ApfParams,
    dt: f64,
) -> Result<DescentStep> {
    if position.distance(goal) <= apf.goal_threshold {
        return Ok(DescentStep { position, reached_goal: true, stalled: false });
    }
    let force = total_force(position, goal, obstacles, apf)?;
    let magnitude = force.norm();
    if magnitude < STALL_FORCE {
        return Ok(DescentStep { position, reached_goal: false, stalled: true });
    }
    let next = position + force * (dt * apf.leader_speed / magnitude);
    Ok(DescentStep {
        position: next,
        reached_goal: next.distance(goal) <= apf.goal_threshold,
        stalled: false,
    })
}

/// The virtual leader: a massless point descending the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderState {
    pub position: Vec2,
    pub reached_goal: bool,
    /// Set when the last step found no usable field direction.
    pub stalled: bool,
}

impl LeaderState {
    pub fn at(position: Vec2) -> Self {
        Self { position, reached_goal: false, stalled: false }
    }
}

/// Advance the leader by one step. A leader that already reached the goal
/// stays where it is.
pub fn leader_step(state: LeaderState, spec: &ScenarioSpec) -> Result<LeaderState> {
    leader_step_among(state, spec, &spec.effective_obstacles())
}

/// [`leader_step`] with a precomputed effective obstacle list.
pub fn leader_step_among(
    state: LeaderState,
    spec: &ScenarioSpec,
    obstacles: &[Obstacle],
) -> Result<LeaderState> {
    if state.reached_goal {
        return Ok(LeaderState { stalled: false, ..state });
    }
    let step = descend(state.position, spec.goal, obstacles, &spec.apf, spec.dt)?;
    Ok(LeaderState { position: step.position, reached_goal: step.reached_goal, stalled: step.stalled })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    Complete,
    /// Ran out of steps before reaching the goal.
    IncompleteMaxSteps,
    /// Stopped at a point where the field vanishes.
    IncompleteStalled,
}

/// Leader path sampled every `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub points: Vec<Vec2>,
    pub dt: f64,
    pub status: PathStatus,
}

impl Path {
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

/// Run the leader from `start` until it reaches the goal, stalls, or exhausts
/// `max_steps`.
pub fn plan_leader_path(spec: &ScenarioSpec) -> Result<Path> {
    let obstacles = spec.effective_obstacles();
    let mut state = LeaderState::at(spec.start);
    state.reached_goal = spec.start.distance(spec.goal) <= spec.apf.goal_threshold;
    let mut points = vec![state.position];
    let mut status = PathStatus::IncompleteMaxSteps;
    if state.reached_goal {
        status = PathStatus::Complete;
    } else {
        for _ in 0..spec.max_steps {
            state = leader_step_among(state, spec, &obstacles)?;
            if state.stalled {
                status = PathStatus::IncompleteStalled;
                break;
            }
            points.push(state.position);
            if state.reached_goal {
                status = PathStatus::Complete;
                break;
            }
        }
    }
    Ok(Path { points, dt: spec.dt, status })
}
