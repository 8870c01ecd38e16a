//! Built-in self-checks: the link integrator against its closed form, and the
//! APF force law's cutoff continuity and rotation equivariance.

use std::fmt::Write as _;

use swarmpath_core::apf::{repulsion_force, total_force};
use swarmpath_core::impedance::{analytic_response, critical_damping, link_step, ExternalForce, LinkDynamicState};
use swarmpath_core::{ApfParams, ImpedanceParams, Obstacle, Vec2};

/// Integration step of the built-in integrator check.
pub const DEFAULT_DT: f64 = 0.01;
/// Simulated time of the integrator check, s.
pub const HORIZON: f64 = 5.0;
pub const MAX_INTEGRATOR_ERROR: f64 = 1e-3;
pub const OVERSHOOT_FLOOR: f64 = -1e-6;
pub const MAX_CUTOFF_JUMP: f64 = 1e-6;
pub const MAX_EQUIVARIANCE_ERROR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorCheck {
    pub max_error: f64,
    pub min_displacement: f64,
}

impl IntegratorCheck {
    pub fn passed(&self) -> bool {
        self.max_error < MAX_INTEGRATOR_ERROR && self.min_displacement >= OVERSHOOT_FLOOR
    }
}

/// Release a critically damped link (m = 1.9, k = 20.88) from x0 = 1, v0 = 0
/// and compare every step with the closed-form response.
pub fn check_integrator(dt: f64) -> IntegratorCheck {
    let (m, k) = (1.9, 20.88);
    let params = ImpedanceParams { m, d: critical_damping(m, k).expect("positive m, k"), k };
    let steps = (HORIZON / dt).round() as usize;
    let mut state = LinkDynamicState { delta_x: Vec2::new(1.0, 0.0), delta_v: Vec2::ZERO };
    let mut max_error: f64 = 0.0;
    let mut min_displacement: f64 = 1.0;
    for n in 1..=steps {
        state = link_step(state, ExternalForce::default(), &params, dt);
        let exact = analytic_response(&params, 1.0, 0.0, n as f64 * dt).expect("critically damped");
        let x = state.delta_x.x;
        // A diverging run produces NaN eventually; count that as failure.
        max_error = if x.is_finite() { max_error.max((x - exact).abs()) } else { f64::INFINITY };
        min_displacement = min_displacement.min(if x.is_finite() { x } else { f64::NEG_INFINITY });
    }
    IntegratorCheck { max_error, min_displacement }
}

/// Largest repulsion magnitude found just inside the cutoff, and whether the
/// force is exactly zero just outside it.
pub fn check_cutoff() -> (f64, bool) {
    let mut max_inside: f64 = 0.0;
    let mut zero_outside = true;
    for &(radius, r_apf, k_rep) in &[(0.2, 0.6, 0.3), (0.5, 1.0, 2.0), (0.12, 1.34, 3.8)] {
        let obs = Obstacle::new(Vec2::ZERO, radius, r_apf, r_apf);
        for dir in [Vec2::new(1.0, 0.0), Vec2::new(0.6, 0.8), Vec2::new(-0.28, -0.96)] {
            let edge = radius + r_apf;
            let inside = repulsion_force(dir * (edge - 1e-9), &obs, k_rep).expect("off-center");
            let outside = repulsion_force(dir * (edge + 1e-9), &obs, k_rep).expect("off-center");
            max_inside = max_inside.max(inside.norm());
            zero_outside &= outside == Vec2::ZERO;
        }
    }
    (max_inside, zero_outside)
}

/// Largest deviation between the force at a rotated point of a rotated scene
/// and the rotated force.
pub fn check_equivariance() -> f64 {
    let apf = ApfParams { k_att: 1.0, k_rep: 0.8, ..ApfParams::DEFAULT };
    let goal = Vec2::new(5.0, 1.0);
    let obstacles = [
        Obstacle::new(Vec2::new(2.0, 0.5), 0.3, 1.0, 0.5),
        Obstacle::new(Vec2::new(3.5, -0.4), 0.2, 0.8, 0.4),
    ];
    let points = [Vec2::new(1.2, 0.1), Vec2::new(2.6, 0.9), Vec2::new(3.1, -1.0), Vec2::new(0.0, 0.0)];
    let mut worst: f64 = 0.0;
    for &angle in &[0.3, 1.0, 2.5, -2.0] {
        let rotated: Vec<Obstacle> =
            obstacles.iter().map(|o| Obstacle { center: o.center.rotated(angle), ..*o }).collect();
        for &p in &points {
            let f = total_force(p, goal, &obstacles, &apf).expect("regular points");
            let g = total_force(p.rotated(angle), goal.rotated(angle), &rotated, &apf).expect("regular points");
            worst = worst.max((g - f.rotated(angle)).norm());
        }
    }
    worst
}

/// Run every check; the report text is deterministic.
pub fn validate_report(dt: f64) -> (String, bool) {
    let integ = check_integrator(dt);
    let (jump, zero_outside) = check_cutoff();
    let equi = check_equivariance();
    let cutoff_ok = jump < MAX_CUTOFF_JUMP && zero_outside;
    let equi_ok = equi < MAX_EQUIVARIANCE_ERROR;
    let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };

    let mut out = String::new();
    writeln!(
        out,
        "integrator   dt={dt} horizon={HORIZON}s  max |x - x_exact| = {:.3e} (limit {MAX_INTEGRATOR_ERROR:e})  min x = {:.3e} (floor {OVERSHOOT_FLOOR:e})  {}",
        integ.max_error,
        integ.min_displacement,
        verdict(integ.passed())
    )
    .unwrap();
    writeln!(
        out,
        "apf cutoff   max |F_rep| just inside = {jump:.3e} (limit {MAX_CUTOFF_JUMP:e})  zero just outside = {zero_outside}  {}",
        verdict(cutoff_ok)
    )
    .unwrap();
    writeln!(
        out,
        "apf rotation max |F(Rp) - R F(p)| = {equi:.3e} (limit {MAX_EQUIVARIANCE_ERROR:e})  {}",
        verdict(equi_ok)
    )
    .unwrap();
    let ok = integ.passed() && cutoff_ok && equi_ok;
    (out, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent scalar re-implementation of the
    // same velocity-first Euler step.
    #[test]
    fn default_step_error_matches_reference() {
        let c = check_integrator(DEFAULT_DT);
        assert!((c.max_error - 0.010372553022488296).abs() < 1e-12, "{c:?}");
        assert!((c.min_displacement - 2.6115666945868784e-6).abs() < 1e-15, "{c:?}");
        assert!(!c.passed());
    }

    #[test]
    fn error_is_first_order_in_dt() {
        let coarse = check_integrator(0.01).max_error;
        let fine = check_integrator(0.005).max_error;
        assert!((coarse / fine - 2.0).abs() < 0.05, "{coarse} / {fine}");
        assert!(check_integrator(0.0005).passed());
    }

    #[test]
    fn coarse_step_fails() {
        assert!(!check_integrator(0.5).passed());
        assert!(!validate_report(0.5).1);
    }

    #[test]
    fn force_law_checks_pass() {
        let (jump, zero_outside) = check_cutoff();
        assert!(jump < MAX_CUTOFF_JUMP && zero_outside);
        assert!(check_equivariance() < MAX_EQUIVARIANCE_ERROR);
    }

    #[test]
    fn report_is_repeatable() {
        assert_eq!(validate_report(DEFAULT_DT), validate_report(DEFAULT_DT));
    }
}
