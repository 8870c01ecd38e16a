use alloc::string::String;
use core::fmt;

/// Errors raised by the planning and metrics routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scenario value broke one of its invariants. The message names it.
    Validation(String),
    /// Query point coincides with an obstacle center; repulsion has no direction.
    SingularRepulsion,
    /// Drone coincides with an obstacle center; deflection has no direction.
    SingularDeflection,
    /// A parameter was outside the domain of a closed-form routine.
    Domain(&'static str),
    /// A drone index outside the trace.
    BadIndex { index: usize, count: usize },
    /// Pairwise query with `i == j`.
    SamePair(usize),
    /// Two traces sampled with different time steps.
    DtMismatch { a: f64, b: f64 },
    /// Reference trajectory has zero length, APE is undefined.
    ZeroReferenceLength,
    /// Traces being compared were produced from different scenarios.
    SpecMismatch,
    /// A controller error raised while stepping, with the step index attached.
    AtStep { step: usize, source: alloc::boxed::Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::SingularRepulsion => f.write_str("singular repulsion direction"),
            Error::SingularDeflection => f.write_str("singular deflection direction"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BadIndex { index, count } => {
                write!(f, "drone index {index} out of range (trace has {count} drones)")
            }
            Error::SamePair(i) => write!(f, "pairwise distance needs two distinct drones, got {i} twice"),
            Error::DtMismatch { a, b } => write!(f, "time step mismatch: {a} vs {b}"),
            Error::ZeroReferenceLength => f.write_str("reference path length is zero"),
            Error::SpecMismatch => f.write_str("traces come from different scenarios"),
            Error::AtStep { step, source } => write!(f, "step {step}: {source}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
