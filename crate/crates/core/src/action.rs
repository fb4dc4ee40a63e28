//! Closed-form classical mechanics in the linear potential `V = m g x`:
//! two-time actions, the relative action between falling and free motion,
//! mean trajectories and the spread bound.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::trajectory::Trajectory;

/// An action together with its kinetic and potential integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub value: f64,
    /// `integral m xdot^2 / 2 dt`
    pub kinetic: f64,
    /// `integral V dt`
    pub potential: f64,
}

pub fn bvp_trajectory(x0: f64, t0: f64, x1: f64, t1: f64, g: f64) -> Result<Trajectory> {
    Trajectory::boundary_value(x0, t0, x1, t1, g)
}

/// Action of the classical path from `x0` at `t0` to `x1` at `t1`:
/// `S = (m/2) [ (x0-x1)^2/T - g (x0+x1) T - g^2 T^3 / 12 ]`.
pub fn classical_action(
    x0: f64,
    x1: f64,
    t0: f64,
    t1: f64,
    params: &PhysicalParams,
) -> Result<ActionValue> {
    if !(t1 > t0) {
        return Err(Error::DegenerateInterval { t0, t1 });
    }
    let PhysicalParams { m, g, .. } = *params;
    let span = t1 - t0;
    let value = 0.5 * m * ((x0 - x1).powi(2) / span - g * (x0 + x1) * span - g * g * span.powi(3) / 12.0);

    // integrals along x(s) = x0 + v s - g s^2 / 2
    let v = (x1 - x0) / span + 0.5 * g * span;
    let kinetic = 0.5 * m * (v * v * span - v * g * span * span + g * g * span.powi(3) / 3.0);
    let potential = m * g * (x0 * span + 0.5 * v * span * span - g * span.powi(3) / 6.0);
    Ok(ActionValue {
        value,
        kinetic,
        potential,
    })
}

/// Free action of the path whose final endpoint is displaced by the classical
/// fall: `S = m (x0 - xt - g t^2 / 2)^2 / (2 t)`.
pub fn shifted_free_action(x0: f64, xt: f64, t: f64, params: &PhysicalParams) -> Result<ActionValue> {
    if !(t > 0.0) {
        return Err(Error::DegenerateInterval { t0: 0.0, t1: t });
    }
    let d = x0 - xt - 0.5 * params.g * t * t;
    let kinetic = params.m * d * d / (2.0 * t);
    Ok(ActionValue {
        value: kinetic,
        kinetic,
        potential: 0.0,
    })
}

/// Relative action `S_g - S_free = -m g xt t - m g^2 t^3 / 6`.
pub fn delta_action(xt: f64, t: f64, params: &PhysicalParams) -> f64 {
    let PhysicalParams { m, g, .. } = *params;
    -m * g * xt * t - m * g * g * t.powi(3) / 6.0
}

/// Mean position and momentum after time `t`.
pub fn ehrenfest_mean(x0: f64, p0: f64, t: f64, params: &PhysicalParams) -> (f64, f64) {
    let PhysicalParams { m, g, .. } = *params;
    (x0 + p0 * t / m - 0.5 * g * t * t, p0 - m * g * t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadBound {
    /// `hbar t / (m sigma0)`
    pub bound: f64,
    /// `sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2)`
    pub exact: f64,
}

/// Width growth of a packet; neither value depends on `g`.
pub fn spread_bound(sigma0: f64, t: f64, params: &PhysicalParams) -> Result<SpreadBound> {
    if !(sigma0 > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma0 must be positive, got {sigma0}")));
    }
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let PhysicalParams { hbar, m, .. } = *params;
    let r = hbar * t / (2.0 * m * sigma0 * sigma0);
    Ok(SpreadBound {
        bound: hbar * t / (m * sigma0),
        exact: sigma0 * (1.0 + r * r).sqrt(),
    })
}
