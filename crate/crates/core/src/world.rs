//! Scenario description: obstacles, gates, formation and tuning parameters.
//!
//! All clearance radii (`r_apf`, `r_imp`) are measured from the obstacle
//! surface, so an obstacle's repulsion field reaches out to
//! `radius + r_apf` from its center.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::impedance;
use crate::vec2::Vec2;

/// A circular obstacle (pole or tree trunk seen from above).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub center: Vec2,
    /// Physical body radius.
    pub radius: f64,
    /// Surface clearance at which APF repulsion switches on.
    pub r_apf: f64,
    /// Surface clearance at which a drone links to this obstacle.
    pub r_imp: f64,
}

impl Obstacle {
    pub fn new(center: Vec2, radius: f64, r_apf: f64, r_imp: f64) -> Self {
        Self { center, radius, r_apf, r_imp }
    }

    /// Distance from `p` to the obstacle surface; negative inside the body.
    pub fn surface_distance(&self, p: Vec2) -> f64 {
        p.distance(self.center) - self.radius
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center.is_finite()
            && self.radius.is_finite()
            && self.r_apf.is_finite()
            && self.r_imp.is_finite())
        {
            return Err(invalid("obstacle values must be finite"));
        }
        if self.radius <= 0.0 {
            return Err(invalid("0 < radius violated"));
        }
        if self.radius >= self.r_imp {
            return Err(invalid("radius < r_imp violated"));
        }
        if self.r_imp > self.r_apf {
            return Err(invalid("r_imp <= r_apf violated"));
        }
        Ok(())
    }
}

/// Two poles a drone is meant to fly between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub pole_a: Obstacle,
    pub pole_b: Obstacle,
}

impl Gate {
    /// Free space between the two pole surfaces along the center line.
    pub fn gap(&self) -> f64 {
        self.pole_a.center.distance(self.pole_b.center) - self.pole_a.radius - self.pole_b.radius
    }

    pub fn validate(&self) -> Result<()> {
        self.pole_a.validate()?;
        self.pole_b.validate()?;
        if self.gap().is_nan() || self.gap() <= 0.0 {
            return Err(invalid("gate poles overlap (gap > 0 violated)"));
        }
        Ok(())
    }
}

/// Virtual link mass-spring-damper parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceParams {
    /// Virtual mass, kg.
    pub m: f64,
    /// Damping, N·s/m.
    pub d: f64,
    /// Stiffness, N/m.
    pub k: f64,
}

impl ImpedanceParams {
    pub const DEFAULT: ImpedanceParams = ImpedanceParams { m: 1.9, d: 12.6, k: 20.88 };

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(invalid("impedance m > 0 violated"));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(invalid("impedance d > 0 violated"));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(invalid("impedance k > 0 violated"));
        }
        Ok(())
    }

    /// Natural frequency `sqrt(k/m)` in rad/s.
    pub fn natural_frequency(&self) -> f64 {
        libm::sqrt(self.k / self.m)
    }

    pub fn damping_ratio(&self) -> f64 {
        self.d / impedance::critical_damping_unchecked(self.m, self.k)
    }
}

impl Default for ImpedanceParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Global planner gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApfParams {
    pub k_att: f64,
    pub k_rep: f64,
    /// Constant leader (and baseline drone) speed, m/s.
    pub leader_speed: f64,
    /// Goal is reached once within this distance, m.
    pub goal_threshold: f64,
}

impl ApfParams {
    pub const DEFAULT: ApfParams =
        ApfParams { k_att: 1.0, k_rep: 0.3, leader_speed: 0.5, goal_threshold: 0.1 };

    pub fn validate(&self) -> Result<()> {
        let fields = [
            (self.k_att, "apf k_att > 0 violated"),
            (self.k_rep, "apf k_rep > 0 violated"),
            (self.leader_speed, "apf leader_speed > 0 violated"),
            (self.goal_threshold, "apf goal_threshold > 0 violated"),
        ];
        for (value, msg) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid(msg));
            }
        }
        Ok(())
    }
}

impl Default for ApfParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Parameters of the adaptive link topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyParams {
    /// Deflection force coefficient (dimensionless).
    pub k_imp_f: f64,
    /// Release band as a fraction of `r_imp`.
    pub hysteresis: f64,
    /// Linear scaling of `k_imp_f` with a drone's mean speed, s/m.
    pub velocity_gain: f64,
}

impl TopologyParams {
    pub const DEFAULT: TopologyParams =
        TopologyParams { k_imp_f: 0.5, hysteresis: 0.1, velocity_gain: 0.0 };

    pub fn validate(&self) -> Result<()> {
        if !(self.k_imp_f > 0.0 && self.k_imp_f.is_finite()) {
            return Err(invalid("topology k_impF > 0 violated"));
        }
        if !(self.hysteresis >= 0.0 && self.hysteresis < 1.0) {
            return Err(invalid("topology 0 <= hysteresis < 1 violated"));
        }
        if !(self.velocity_gain >= 0.0 && self.velocity_gain.is_finite()) {
            return Err(invalid("topology velocity_gain >= 0 violated"));
        }
        Ok(())
    }
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Four drones on a square of side 0.8 m centered on the leader.
///
/// Numbered front-left, front-right, back-right, back-left for a swarm
/// heading along +x.
pub fn default_formation() -> Vec<Vec2> {
    alloc::vec![
        Vec2::new(0.4, 0.4),
        Vec2::new(0.4, -0.4),
        Vec2::new(-0.4, -0.4),
        Vec2::new(-0.4, 0.4),
    ]
}

/// Complete world description for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub start: Vec2,
    pub goal: Vec2,
    pub obstacles: Vec<Obstacle>,
    pub gates: Vec<Gate>,
    /// One offset per drone, relative to the leader.
    pub formation_offsets: Vec<Vec2>,
    pub impedance: ImpedanceParams,
    pub apf: ApfParams,
    pub topology: TopologyParams,
    pub dt: f64,
    pub max_steps: usize,
}

impl ScenarioSpec {
    /// An obstacle-free scenario with default parameters and formation.
    pub fn open_field(start: Vec2, goal: Vec2) -> Self {
        Self {
            start,
            goal,
            obstacles: Vec::new(),
            gates: Vec::new(),
            formation_offsets: default_formation(),
            impedance: ImpedanceParams::DEFAULT,
            apf: ApfParams::DEFAULT,
            topology: TopologyParams::DEFAULT,
            dt: 0.01,
            max_steps: 10_000,
        }
    }

    pub fn drone_count(&self) -> usize {
        self.formation_offsets.len()
    }

    /// Free obstacles followed by both poles of every gate, in declaration order.
    pub fn effective_obstacles(&self) -> Vec<Obstacle> {
        let mut out = Vec::with_capacity(self.obstacles.len() + 2 * self.gates.len());
        out.extend_from_slice(&self.obstacles);
        for gate in &self.gates {
            out.push(gate.pole_a);
            out.push(gate.pole_b);
        }
        out
    }

    /// Goal of drone `i`: the swarm goal shifted by its formation offset.
    pub fn drone_goal(&self, i: usize) -> Vec2 {
        self.goal + self.formation_offsets[i]
    }

    /// Check every invariant of the scenario and its parts.
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.goal.is_finite() {
            return Err(invalid("start and goal must be finite"));
        }
        for (i, obs) in self.obstacles.iter().enumerate() {
            obs.validate().map_err(|e| prefix(e, &format!("obstacle {i}")))?;
        }
        for (i, gate) in self.gates.iter().enumerate() {
            gate.validate().map_err(|e| prefix(e, &format!("gate {i}")))?;
        }
        self.impedance.validate()?;
        self.apf.validate()?;
        self.topology.validate()?;
        if self.formation_offsets.is_empty() {
            return Err(invalid("at least one drone required"));
        }
        for (i, off) in self.formation_offsets.iter().enumerate() {
            if !off.is_finite() {
                return Err(invalid(&format!("formation offset {i} must be finite")));
            }
            if self.formation_offsets[..i].contains(off) {
                return Err(invalid(&format!("formation offset {i} duplicates an earlier offset")));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt > 0 violated"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps > 0 violated"));
        }
        for (i, obs) in self.effective_obstacles().iter().enumerate() {
            if obs.surface_distance(self.start) <= obs.r_apf {
                return Err(invalid(&format!("start lies inside r_apf of effective obstacle {i}")));
            }
            if obs.surface_distance(self.goal) <= obs.r_apf {
                return Err(invalid(&format!("goal lies inside r_apf of effective obstacle {i}")));
            }
        }
        Ok(())
    }
}

fn invalid(msg: &str) -> Error {
    Error::Validation(msg.into())
}

fn prefix(err: Error, what: &str) -> Error {
    match err {
        Error::Validation(msg) => Error::Validation(format!("{what}: {msg}")),
        other => other,
    }
}
