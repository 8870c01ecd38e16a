//! Conventional APF comparator: every drone descends the field towards its
//! own goal with no links to the leader or to each other.

use alloc::vec::Vec;

use crate::apf::descend;
use crate::error::Result;
use crate::vec2::Vec2;
use crate::world::{Obstacle, ScenarioSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineDroneState {
    pub id: usize,
    pub position: Vec2,
    pub reached_goal: bool,
    /// Set when the last step found no usable field direction.
    pub stalled: bool,
}

/// Every drone at `start + offset`, flagged if already within the goal threshold.
pub fn initial_baseline(spec: &ScenarioSpec) -> Vec<BaselineDroneState> {
    (0..spec.drone_count())
        .map(|id| {
            let position = spec.start + spec.formation_offsets[id];
            BaselineDroneState {
                id,
                position,
                reached_goal: position.distance(spec.drone_goal(id)) <= spec.apf.goal_threshold,
                stalled: false,
            }
        })
        .collect()
}

pub fn baseline_step(drones: &[BaselineDroneState], spec: &ScenarioSpec) -> Result<Vec<BaselineDroneState>> {
    baseline_step_among(drones, spec, &spec.effective_obstacles())
}

/// [`baseline_step`] with a precomputed effective obstacle list.
pub fn baseline_step_among(
    drones: &[BaselineDroneState],
    spec: &ScenarioSpec,
    obstacles: &[Obstacle],
) -> Result<Vec<BaselineDroneState>> {
    drones
        .iter()
        .map(|drone| {
            if drone.reached_goal {
                return Ok(BaselineDroneState { stalled: false, ..*drone });
            }
            let step = descend(drone.position, spec.drone_goal(drone.id), obstacles, &spec.apf, spec.dt)?;
            Ok(BaselineDroneState {
                id: drone.id,
                position: step.position,
                reached_goal: step.reached_goal,
                stalled: step.stalled,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apf::plan_leader_path;

    #[test]
    fn single_drone_matches_leader() {
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(4.0, 1.0));
        spec.formation_offsets = alloc::vec![Vec2::ZERO];
        spec.obstacles.push(Obstacle::new(Vec2::new(2.0, 0.55), 0.15, 0.5, 0.3));
        let path = plan_leader_path(&spec).unwrap();
        let mut drones = initial_baseline(&spec);
        for p in &path.points[1..] {
            drones = baseline_step(&drones, &spec).unwrap();
            assert_eq!(drones[0].position, *p);
        }
        assert!(drones[0].reached_goal);
    }

    #[test]
    fn already_at_goal_stays() {
        let spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(0.05, 0.0));
        let drones = initial_baseline(&spec);
        assert!(drones.iter().all(|d| d.reached_goal));
        let next = baseline_step(&drones, &spec).unwrap();
        assert_eq!(next, drones);
    }
}
