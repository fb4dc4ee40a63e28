//! Proper-time action in the weak-field metric
//! `d tau^2 = (1 - 2 g x / c^2) dt^2 - dx^2 / c^2` and its `c -> infinity` limit.
//!
//! The relativistic action is `S = m c^2 (tau - t)`. Expanding the square root
//! gives `S -> integral (-m g x - m xdot^2 / 2) dt` with an `O(1/c^2)` remainder.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::trajectory::Trajectory;

pub const MIN_QUADRATURE_INTERVALS: usize = 16;
pub const DEFAULT_QUADRATURE_INTERVALS: usize = 4096;
/// Errors below this are round-off; no scaling order is fitted from them.
pub const LIMIT_NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelActionResult {
    pub proper_time: f64,
    /// `m c^2 (tau - t)`
    pub action: f64,
    /// `integral (-m g x - m xdot^2 / 2) dt` along the same path
    pub nr_action: f64,
    pub abs_error: f64,
}

/// Rest-start path that is the Newtonian free fall of the metric above.
///
/// `g_tt = 1 - 2 g x / c^2` is stationary for `x'' = +g`, the opposite sense to
/// the `+m g x` Schrödinger potential, so the returned trajectory carries
/// acceleration parameter `-g`.
pub fn metric_fall_from_rest(x0: f64, params: &PhysicalParams) -> Trajectory {
    Trajectory::initial_value(x0, 0.0, 0.0, -params.g)
}

fn simpson(n_quad: usize, t0: f64, t: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    if n_quad < MIN_QUADRATURE_INTERVALS {
        return Err(Error::BadQuadrature(n_quad));
    }
    let n = n_quad + n_quad % 2;
    let h = t / n as f64;
    let mut sum = f(t0)? + f(t0 + t)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(t0 + i as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

/// `tau - t`, integrated in a cancellation-free form.
fn proper_time_lag(traj: &Trajectory, t: f64, params: &PhysicalParams, n_quad: usize) -> Result<f64> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let c2 = params.c * params.c;
    let t0 = traj.start_time();
    simpson(n_quad, t0, t, |s| {
        let x = traj.position(s);
        let v = traj.velocity(s);
        let eps = (2.0 * params.g * x + v * v) / c2;
        let radicand = 1.0 - eps;
        if !(radicand > 0.0) {
            return Err(Error::SuperluminalPath { t: s, radicand });
        }
        // sqrt(1 - eps) - 1
        Ok(-eps / (1.0 + radicand.sqrt()))
    })
}

/// Proper time elapsed along `traj` during `t` units of coordinate time.
pub fn proper_time(traj: &Trajectory, t: f64, params: &PhysicalParams, n_quad: usize) -> Result<f64> {
    Ok(t + proper_time_lag(traj, t, params, n_quad)?)
}

pub fn rel_action(
    traj: &Trajectory,
    t: f64,
    params: &PhysicalParams,
    n_quad: usize,
) -> Result<RelActionResult> {
    let lag = proper_time_lag(traj, t, params, n_quad)?;
    let action = params.m * params.c * params.c * lag;
    let nr_action = simpson(n_quad, traj.start_time(), t, |s| {
        let v = traj.velocity(s);
        Ok(-params.m * params.g * traj.position(s) - 0.5 * params.m * v * v)
    })?;
    Ok(RelActionResult {
        proper_time: t + lag,
        action,
        nr_action,
        abs_error: (action - nr_action).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub c: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitTable {
    pub rows: Vec<LimitRow>,
    /// Least-squares slope of `ln(abs_error)` against `ln(c)`; `None` when any
    /// error is at round-off level.
    pub fitted_order: Option<f64>,
    /// Whether the error decreases strictly with `c`.
    pub monotone: bool,
}

/// Measures how fast the relativistic action approaches its Newtonian limit.
pub fn nr_limit_check(
    traj: &Trajectory,
    t: f64,
    params: &PhysicalParams,
    c_list: &[f64],
) -> Result<LimitTable> {
    if c_list.len() < 3 || c_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(format!(
            "need at least three strictly increasing light speeds, got {c_list:?}"
        )));
    }
    let rows = c_list
        .iter()
        .map(|&c| {
            let res = rel_action(traj, t, &params.with_c(c), DEFAULT_QUADRATURE_INTERVALS)?;
            Ok(LimitRow {
                c,
                abs_error: res.abs_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let fitted_order = if rows.iter().all(|r| r.abs_error > LIMIT_NOISE_FLOOR) {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.c.ln(), r.abs_error.ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    let monotone = rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
    Ok(LimitTable {
        rows,
        fitted_order,
        monotone,
    })
}
