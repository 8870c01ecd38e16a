//! File formats, reports, plots and the command-line front end for
//! `swarmpath-core`.
//!
//! * [`scenario`] — JSON scenario documents.
//! * [`trace_io`] — CSV traces that reload bit-exactly.
//! * [`report`] — JSON metric reports with fixed key order.
//! * [`plot`] — SVG plots of scenarios and traces.
//! * [`sweep`] — impedance parameter sweeps.
//! * [`validate`] — integrator and force-law self-checks.
//! * [`commands`] — the `run`, `compare`, `sweep` and `validate` subcommands.

pub mod commands;
pub mod plot;
pub mod report;
pub mod scenario;
pub mod sweep;
pub mod trace_io;
pub mod validate;
