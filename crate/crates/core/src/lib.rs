//! Swarm path planning in the plane: a virtual leader descends an artificial
//! potential field while follower drones track it through mass-spring-damper
//! links, temporarily re-linking to nearby obstacles to deflect around them.
//!
//! The crate is `no_std` and only needs an allocator. File formats and the
//! command-line front end live in `swarmpath-sim`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod apf;
pub mod baseline;
pub mod error;
pub mod impedance;
pub mod metrics;
pub mod simulator;
pub mod topology;
pub mod vec2;
pub mod world;

pub use error::{Error, Result};
pub use vec2::Vec2;
pub use world::{ApfParams, Gate, ImpedanceParams, Obstacle, ScenarioSpec, TopologyParams};
