//! JSON scenario documents.
//!
//! ```json
//! { "start": [0, 0], "goal": [7, 0],
//!   "obstacles": [{ "center": [2, 0.8], "radius": 0.15, "r_apf": 0.6, "r_imp": 0.3 }],
//!   "gates": [{ "pole_a": { ... }, "pole_b": { ... } }],
//!   "formation_offsets": [[0.4, 0.4], [0.4, -0.4]],
//!   "impedance": { "m": 1.9, "d": 12.6, "k": 20.88 },
//!   "apf": { "k_att": 1.0, "k_rep": 0.3, "leader_speed": 0.5, "goal_threshold": 0.1 },
//!   "topology": { "k_impF": 0.5, "hysteresis": 0.1, "velocity_gain": 0.0 },
//!   "dt": 0.01, "max_steps": 10000 }
//! ```
//!
//! Only `start` and `goal` are required; everything else falls back to the
//! defaults of `swarmpath-core`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmpath_core::world::default_formation;
use swarmpath_core::{ApfParams, Gate, ImpedanceParams, Obstacle, ScenarioSpec, TopologyParams, Vec2};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed scenario document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] swarmpath_core::Error),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleDoc {
    center: [f64; 2],
    radius: f64,
    r_apf: f64,
    r_imp: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    pole_a: ObstacleDoc,
    pole_b: ObstacleDoc,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImpedanceDoc {
    m: f64,
    d: f64,
    k: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApfDoc {
    k_att: f64,
    k_rep: f64,
    leader_speed: f64,
    goal_threshold: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDoc {
    #[serde(rename = "k_impF")]
    k_imp_f: f64,
    hysteresis: f64,
    velocity_gain: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    /// Free-form description, not part of the scenario itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    start: [f64; 2],
    goal: [f64; 2],
    #[serde(default)]
    obstacles: Vec<ObstacleDoc>,
    #[serde(default)]
    gates: Vec<GateDoc>,
    #[serde(default = "default_offsets")]
    formation_offsets: Vec<[f64; 2]>,
    #[serde(default = "default_impedance")]
    impedance: ImpedanceDoc,
    #[serde(default = "default_apf")]
    apf: ApfDoc,
    #[serde(default = "default_topology")]
    topology: TopologyDoc,
    #[serde(default = "default_dt")]
    dt: f64,
    #[serde(default = "default_max_steps")]
    max_steps: usize,
}

fn default_offsets() -> Vec<[f64; 2]> {
    default_formation().into_iter().map(Into::into).collect()
}

fn default_impedance() -> ImpedanceDoc {
    let p = ImpedanceParams::DEFAULT;
    ImpedanceDoc { m: p.m, d: p.d, k: p.k }
}

fn default_apf() -> ApfDoc {
    let p = ApfParams::DEFAULT;
    ApfDoc { k_att: p.k_att, k_rep: p.k_rep, leader_speed: p.leader_speed, goal_threshold: p.goal_threshold }
}

fn default_topology() -> TopologyDoc {
    let p = TopologyParams::DEFAULT;
    TopologyDoc { k_imp_f: p.k_imp_f, hysteresis: p.hysteresis, velocity_gain: p.velocity_gain }
}

fn default_dt() -> f64 {
    0.01
}

fn default_max_steps() -> usize {
    10_000
}

impl From<ObstacleDoc> for Obstacle {
    fn from(o: ObstacleDoc) -> Self {
        Obstacle::new(o.center.into(), o.radius, o.r_apf, o.r_imp)
    }
}

impl From<&Obstacle> for ObstacleDoc {
    fn from(o: &Obstacle) -> Self {
        ObstacleDoc { center: o.center.into(), radius: o.radius, r_apf: o.r_apf, r_imp: o.r_imp }
    }
}

impl From<ScenarioDoc> for ScenarioSpec {
    fn from(doc: ScenarioDoc) -> Self {
        ScenarioSpec {
            start: doc.start.into(),
            goal: doc.goal.into(),
            obstacles: doc.obstacles.into_iter().map(Obstacle::from).collect(),
            gates: doc
                .gates
                .into_iter()
                .map(|g| Gate { pole_a: g.pole_a.into(), pole_b: g.pole_b.into() })
                .collect(),
            formation_offsets: doc.formation_offsets.into_iter().map(Vec2::from).collect(),
            impedance: ImpedanceParams { m: doc.impedance.m, d: doc.impedance.d, k: doc.impedance.k },
            apf: ApfParams {
                k_att: doc.apf.k_att,
                k_rep: doc.apf.k_rep,
                leader_speed: doc.apf.leader_speed,
                goal_threshold: doc.apf.goal_threshold,
            },
            topology: TopologyParams {
                k_imp_f: doc.topology.k_imp_f,
                hysteresis: doc.topology.hysteresis,
                velocity_gain: doc.topology.velocity_gain,
            },
            dt: doc.dt,
            max_steps: doc.max_steps,
        }
    }
}

impl From<&ScenarioSpec> for ScenarioDoc {
    fn from(spec: &ScenarioSpec) -> Self {
        ScenarioDoc {
            note: None,
            start: spec.start.into(),
            goal: spec.goal.into(),
            obstacles: spec.obstacles.iter().map(ObstacleDoc::from).collect(),
            gates: spec
                .gates
                .iter()
                .map(|g| GateDoc { pole_a: (&g.pole_a).into(), pole_b: (&g.pole_b).into() })
                .collect(),
            formation_offsets: spec.formation_offsets.iter().map(|v| (*v).into()).collect(),
            impedance: ImpedanceDoc { m: spec.impedance.m, d: spec.impedance.d, k: spec.impedance.k },
            apf: ApfDoc {
                k_att: spec.apf.k_att,
                k_rep: spec.apf.k_rep,
                leader_speed: spec.apf.leader_speed,
                goal_threshold: spec.apf.goal_threshold,
            },
            topology: TopologyDoc {
                k_imp_f: spec.topology.k_imp_f,
                hysteresis: spec.topology.hysteresis,
                velocity_gain: spec.topology.velocity_gain,
            },
            dt: spec.dt,
            max_steps: spec.max_steps,
        }
    }
}

/// Parse and validate a scenario document.
pub fn load_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text)?;
    let spec = ScenarioSpec::from(doc);
    spec.validate()?;
    Ok(spec)
}

pub fn load_scenario_file(path: &Path) -> Result<ScenarioSpec, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_owned(), source })?;
    load_scenario(&text)
}

/// Pretty-printed document that [`load_scenario`] reads back to the same spec.
pub fn scenario_to_json(spec: &ScenarioSpec) -> String {
    let mut text = serde_json::to_string_pretty(&ScenarioDoc::from(spec)).expect("scenario serializes");
    text.push('\n');
    text
}
