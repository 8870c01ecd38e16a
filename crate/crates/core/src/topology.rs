//! Adaptive link topology: each follower is tied either to the virtual
//! leader or, while close to an obstacle, to that obstacle, which pushes its
//! setpoint radially outward.

use alloc::vec::Vec;

use crate::apf::{leader_step_among, LeaderState};
use crate::error::{Error, Result};
use crate::impedance::{link_step, ExternalForce, LinkDynamicState};
use crate::vec2::Vec2;
use crate::world::{Obstacle, ScenarioSpec, TopologyParams};

/// Smoothing factor of the running mean speed.
pub const MEAN_SPEED_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkMode {
    LeaderLinked,
    /// Linked to the effective obstacle with this index.
    ObstacleLinked(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneState {
    pub id: usize,
    pub position: Vec2,
    pub link: LinkDynamicState,
    pub mode: LinkMode,
    /// Exponential moving average of speed, m/s.
    pub mean_speed: f64,
}

impl DroneState {
    /// A drone resting on its formation target.
    pub fn at_rest(id: usize, position: Vec2) -> Self {
        Self { id, position, link: LinkDynamicState::default(), mode: LinkMode::LeaderLinked, mean_speed: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub leader: LeaderState,
    pub drones: Vec<DroneState>,
    pub t: f64,
    pub step: usize,
}

impl SwarmState {
    /// Leader on `start`, every drone on its formation target with a relaxed link.
    pub fn initial(spec: &ScenarioSpec) -> Self {
        let mut leader = LeaderState::at(spec.start);
        leader.reached_goal = spec.start.distance(spec.goal) <= spec.apf.goal_threshold;
        let drones = spec
            .formation_offsets
            .iter()
            .enumerate()
            .map(|(id, off)| DroneState::at_rest(id, spec.start + *off))
            .collect();
        Self { leader, drones, t: 0.0, step: 0 }
    }
}

/// Obstacle with the smallest surface distance to `p`; ties go to the lower index.
pub fn nearest_obstacle(p: Vec2, obstacles: &[Obstacle]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, obs) in obstacles.iter().enumerate() {
        let d = obs.surface_distance(p);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    best
}

/// Link-mode transition for one drone.
///
/// A leader-linked drone latches onto its nearest obstacle once inside that
/// obstacle's `r_imp`. An obstacle-linked drone releases only after leaving
/// `r_imp·(1 + hysteresis)`; it never hops straight to another obstacle.
pub fn update_link_mode(drone: &DroneState, obstacles: &[Obstacle], topo: &TopologyParams) -> LinkMode {
    match drone.mode {
        LinkMode::LeaderLinked => match nearest_obstacle(drone.position, obstacles) {
            Some((i, d)) if d < obstacles[i].r_imp => LinkMode::ObstacleLinked(i),
            _ => LinkMode::LeaderLinked,
        },
        LinkMode::ObstacleLinked(i) => {
            let obs = &obstacles[i];
            if obs.surface_distance(drone.position) > obs.r_imp * (1.0 + topo.hysteresis) {
                LinkMode::LeaderLinked
            } else {
                drone.mode
            }
        }
    }
}

/// Radial deflection of magnitude `k_eff·r_imp`, pointing from the obstacle
/// center to the drone, with `k_eff = k_impF·(1 + velocity_gain·mean_speed)`.
pub fn deflection_offset(drone: &DroneState, obs: &Obstacle, topo: &TopologyParams) -> Result<Vec2> {
    let outward = (drone.position - obs.center).normalized().ok_or(Error::SingularDeflection)?;
    let k_eff = topo.k_imp_f * (1.0 + topo.velocity_gain * drone.mean_speed);
    Ok(outward * (k_eff * obs.r_imp))
}

/// Setpoint of a drone: formation target, plus the deflection while obstacle-linked.
pub fn desired_position(drone: &DroneState, leader: &LeaderState, spec: &ScenarioSpec) -> Result<Vec2> {
    desired_position_among(drone, leader, spec, &spec.effective_obstacles())
}

fn desired_position_among(
    drone: &DroneState,
    leader: &LeaderState,
    spec: &ScenarioSpec,
    obstacles: &[Obstacle],
) -> Result<Vec2> {
    let target = leader.position + spec.formation_offsets[drone.id];
    match drone.mode {
        LinkMode::LeaderLinked => Ok(target),
        LinkMode::ObstacleLinked(i) => Ok(target + deflection_offset(drone, &obstacles[i], &spec.topology)?),
    }
}

/// Advance the whole swarm by one `dt`.
pub fn swarm_step(state: &SwarmState, spec: &ScenarioSpec) -> Result<SwarmState> {
    swarm_step_among(state, spec, &spec.effective_obstacles())
}

/// [`swarm_step`] with a precomputed effective obstacle list.
pub fn swarm_step_among(state: &SwarmState, spec: &ScenarioSpec, obstacles: &[Obstacle]) -> Result<SwarmState> {
    let leader = leader_step_among(state.leader, spec, obstacles)?;
    let carry = leader.position - state.leader.position;
    let mut drones = Vec::with_capacity(state.drones.len());
    for drone in &state.drones {
        let mut next = *drone;
        next.mode = update_link_mode(drone, obstacles, &spec.topology);
        let desired = desired_position_among(&next, &leader, spec, obstacles)?;
        // The link lives in the frame translating with the leader: the
        // leader's own displacement carries the drone, only setpoint changes
        // relative to the formation excite the spring-damper.
        let carried = drone.position + carry;
        let link = LinkDynamicState { delta_x: carried - desired, delta_v: drone.link.delta_v };
        next.link = link_step(link, ExternalForce::default(), &spec.impedance, spec.dt);
        next.position = desired + next.link.delta_x;
        let speed = next.position.distance(drone.position) / spec.dt;
        next.mean_speed = (1.0 - MEAN_SPEED_ALPHA) * drone.mean_speed + MEAN_SPEED_ALPHA * speed;
        drones.push(next);
    }
    let step = state.step + 1;
    Ok(SwarmState { leader, drones, t: step as f64 * spec.dt, step })
}
