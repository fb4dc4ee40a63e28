//! Exact propagator for `H = p^2/(2m) + m g x`.
//!
//! The nested commutators of the kinetic and linear terms terminate at third
//! order, so the propagator factors exactly:
//!
//! ```text
//! U(t) = exp(-i m g^2 t^3 / (6 hbar))
//!      * exp(-i m g t x / hbar)
//!      * exp(-i t p^2 / (2 m hbar))
//!      * exp(+i g t^2 p / (2 hbar))
//! ```
//!
//! The rightmost factor maps `psi(x)` to `psi(x + g t^2 / 2)`. Factors act
//! right to left. The two momentum-diagonal factors share one FFT round trip.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::spectral::SpectralPlan;
use crate::wavepacket::{moments, WavePacket};

/// One stretch of constant acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub g: f64,
    pub dt: f64,
}

/// Piecewise-constant acceleration history.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AccelSchedule {
    segments: Vec<Segment>,
}

impl AccelSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.dt.is_finite() && s.dt > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "schedule segment {i} has non-positive duration {}",
                    s.dt
                )));
            }
            if !s.g.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "schedule segment {i} has non-finite acceleration"
                )));
            }
        }
        Ok(Self { segments })
    }

    /// A single segment of duration `t` (empty when `t == 0`).
    pub fn constant(g: f64, t: f64) -> Result<Self> {
        if t == 0.0 {
            return Ok(Self::default());
        }
        Self::new(vec![Segment { g, dt: t }])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.dt).sum()
    }
}

fn map_momentum_diagonal(
    psi: &WavePacket,
    phase_of_k: impl Fn(f64) -> f64,
) -> Result<WavePacket> {
    let grid = *psi.grid();
    let plan = SpectralPlan::new(grid.n());
    let multiplier: Vec<Complex64> = grid
        .wavenumbers_fft_order()
        .into_iter()
        .map(|k| Complex64::from_polar(1.0, phase_of_k(k)))
        .collect();
    let mut buf = psi.amplitudes().to_vec();
    plan.apply_diagonal(&mut buf, &multiplier);
    WavePacket::from_parts_checked(grid, buf)
}

/// `psi(x) -> psi(x + a)`, exact on the periodic lattice.
pub fn shift_packet(psi: &WavePacket, a: f64) -> Result<WavePacket> {
    if a == 0.0 {
        return Ok(psi.clone());
    }
    map_momentum_diagonal(psi, |k| k * a)
}

/// Free evolution `exp(-i t p^2 / (2 m hbar))`.
pub fn evolve_free(psi: &WavePacket, params: &PhysicalParams, t: f64) -> Result<WavePacket> {
    evolve_exact(psi, &params.with_g(0.0), t)
}

/// Multiplies by `exp(-i slope x / hbar)`; shifts the mean momentum by `-slope`.
pub fn apply_linear_phase(psi: &WavePacket, slope: f64, params: &PhysicalParams) -> WavePacket {
    let grid = *psi.grid();
    let amp = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, z)| z * Complex64::from_polar(1.0, -slope * grid.x(i) / params.hbar))
        .collect();
    WavePacket::from_parts_checked(grid, amp).expect("phase factors leave the margin untouched")
}

/// Multiplies by `exp(i theta)`.
pub fn apply_global_phase(psi: &WavePacket, theta: f64) -> WavePacket {
    let rot = Complex64::from_polar(1.0, theta);
    let amp = psi.amplitudes().iter().map(|z| z * rot).collect();
    WavePacket::from_parts_checked(*psi.grid(), amp)
        .expect("phase factors leave the margin untouched")
}

/// Applies the exact propagator `exp(-i H t / hbar)`.
pub fn evolve_exact(psi: &WavePacket, params: &PhysicalParams, t: f64) -> Result<WavePacket> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(psi.clone());
    }
    let PhysicalParams { hbar, m, g, .. } = *params;
    check_center_path(psi, params, t)?;
    let fall = 0.5 * g * t * t;
    // shift then free evolution, both diagonal in k
    let moved = map_momentum_diagonal(psi, |k| k * fall - hbar * t * k * k / (2.0 * m))?;
    if g == 0.0 {
        return Ok(moved);
    }
    let kicked = apply_linear_phase(&moved, m * g * t, params);
    Ok(apply_global_phase(
        &kicked,
        -m * g * g * t.powi(3) / (6.0 * hbar),
    ))
}

/// The periodic lattice would silently wrap a packet that leaves through one
/// edge; reject runs whose mean position leaves the interior at any time.
fn check_center_path(psi: &WavePacket, params: &PhysicalParams, t: f64) -> Result<()> {
    let mo = moments(psi, params);
    let v = mo.mean_p / params.m;
    let center = |s: f64| mo.mean_x + v * s - 0.5 * params.g * s * s;
    let mut extremes = vec![center(0.0), center(t)];
    if params.g != 0.0 {
        let turn = v / params.g;
        if turn > 0.0 && turn < t {
            extremes.push(center(turn));
        }
    }
    let (lo, hi) = psi.grid().interior();
    match extremes.into_iter().find(|x| !(*x > lo && *x < hi)) {
        Some(x) => Err(Error::GridOverflow {
            reason: format!("packet center reaches x = {x} outside the interior [{lo}, {hi}]"),
            segment: None,
        }),
        None => Ok(()),
    }
}

/// Sequential [`evolve_exact`] over the schedule's segments.
pub fn evolve_piecewise(
    psi: &WavePacket,
    params: &PhysicalParams,
    schedule: &AccelSchedule,
) -> Result<WavePacket> {
    let mut state = psi.clone();
    for (i, seg) in schedule.segments().iter().enumerate() {
        state = evolve_exact(&state, &params.with_g(seg.g), seg.dt).map_err(|e| e.in_segment(i))?;
    }
    Ok(state)
}
