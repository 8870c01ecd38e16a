//! Second-order virtual link `m·ẍ + d·ẋ + k·x = F_ext` per axis.

use crate::error::{Error, Result};
use crate::vec2::Vec2;
use crate::world::ImpedanceParams;

/// Displacement of a drone from its desired position and its rate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkDynamicState {
    pub delta_x: Vec2,
    pub delta_v: Vec2,
}

/// Virtual external force driving a link, N.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalForce(pub Vec2);

/// Damping that makes the link critically damped: `2·sqrt(m·k)`.
pub fn critical_damping(m: f64, k: f64) -> Result<f64> {
    if !(m > 0.0 && k > 0.0) {
        return Err(Error::Domain("critical damping needs m > 0 and k > 0"));
    }
    Ok(critical_damping_unchecked(m, k))
}

pub(crate) fn critical_damping_unchecked(m: f64, k: f64) -> f64 {
    2.0 * libm::sqrt(m * k)
}

/// One semi-implicit Euler step: velocity first, then position with the
/// updated velocity.
pub fn link_step(
    state: LinkDynamicState,
    f_ext: ExternalForce,
    params: &ImpedanceParams,
    dt: f64,
) -> LinkDynamicState {
    let accel = (f_ext.0 - state.delta_v * params.d - state.delta_x * params.k) * (1.0 / params.m);
    let delta_v = state.delta_v + accel * dt;
    let delta_x = state.delta_x + delta_v * dt;
    LinkDynamicState { delta_x, delta_v }
}

/// Link energy `½m|v|² + ½k|x|²`.
pub fn link_energy(state: &LinkDynamicState, params: &ImpedanceParams) -> f64 {
    0.5 * params.m * state.delta_v.dot(state.delta_v) + 0.5 * params.k * state.delta_x.dot(state.delta_x)
}

/// Closed-form unforced response of a critically damped scalar link.
///
/// `x(t) = (x0 + (v0 + ωn·x0)·t)·exp(-ωn·t)` with `ωn = sqrt(k/m)`.
pub fn analytic_response(params: &ImpedanceParams, x0: f64, v0: f64, t: f64) -> Result<f64> {
    let critical = critical_damping(params.m, params.k)?;
    if (params.d - critical).abs() > 1e-9 * critical {
        return Err(Error::Domain("analytic response covers the critically damped case only"));
    }
    let wn = params.natural_frequency();
    Ok((x0 + (v0 + wn * x0) * t) * libm::exp(-wn * t))
}
