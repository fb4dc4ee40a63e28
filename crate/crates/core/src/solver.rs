//! Strang split-step spectral integrator for `i hbar dpsi/dt = (p^2/2m + m g x) psi`.
//!
//! Each step is `exp(-i V dt/2hbar) exp(-i T dt/hbar) exp(-i V dt/2hbar)`;
//! adjacent potential half-steps are fused into full steps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::propagator::evolve_exact;
use crate::spectral::SpectralPlan;
use crate::wavepacket::{check_margin, l2_distance, WavePacket};

/// Errors below this are treated as round-off when estimating the order.
pub const ORDER_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub n_steps: usize,
    /// Snapshot every this many steps; 0 keeps only the final state.
    pub record_every: usize,
}

impl SolverConfig {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            record_every: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitStepRun {
    pub state: WavePacket,
    /// `(time, state)` pairs at every `record_every` steps.
    pub snapshots: Vec<(f64, WavePacket)>,
}

pub fn evolve_split_step(
    psi: &WavePacket,
    params: &PhysicalParams,
    t: f64,
    cfg: SolverConfig,
) -> Result<SplitStepRun> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if cfg.n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let grid = *psi.grid();
    let PhysicalParams { hbar, m, g, .. } = *params;
    let dt = t / cfg.n_steps as f64;

    let plan = SpectralPlan::new(grid.n());
    let kinetic: Vec<Complex64> = grid
        .wavenumbers_fft_order()
        .into_iter()
        .map(|k| Complex64::from_polar(1.0, -hbar * k * k * dt / (2.0 * m)))
        .collect();
    let potential_phase = |fraction: f64| -> Vec<Complex64> {
        grid.positions()
            .into_iter()
            .map(|x| Complex64::from_polar(1.0, -fraction * m * g * x * dt / hbar))
            .collect()
    };
    let half_kick = potential_phase(0.5);
    let full_kick = potential_phase(1.0);
    let apply = |buf: &mut [Complex64], w: &[Complex64]| {
        for (z, w) in buf.iter_mut().zip(w) {
            *z *= w;
        }
    };

    let mut buf = psi.amplitudes().to_vec();
    let mut snapshots = Vec::new();
    apply(&mut buf, &half_kick);
    for step in 1..=cfg.n_steps {
        plan.apply_diagonal(&mut buf, &kinetic);
        let last = step == cfg.n_steps;
        let snapshot = cfg.record_every > 0 && step % cfg.record_every == 0;
        if last || snapshot {
            apply(&mut buf, &half_kick);
            let state = WavePacket::from_parts_checked(grid, buf.clone())?;
            if snapshot {
                snapshots.push((step as f64 * dt, state));
            }
            if !last {
                apply(&mut buf, &half_kick);
            }
        } else {
            apply(&mut buf, &full_kick);
            // wrap-around mid-run must not go unnoticed
            check_margin(&grid, &buf)?;
        }
    }
    let state = WavePacket::from_parts_checked(grid, buf)?;
    Ok(SplitStepRun { state, snapshots })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub l2_error: f64,
    /// `ln(err(n)/err(n')) / ln(n'/n)` against the next row; `None` on the
    /// last row or when either error is at round-off level.
    pub observed_order: Option<f64>,
}

/// L2 error of the split-step solver against [`evolve_exact`] for each step count.
pub fn convergence_report(
    psi: &WavePacket,
    params: &PhysicalParams,
    t: f64,
    step_counts: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if step_counts.is_empty() || step_counts[0] == 0 || step_counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!(
            "step counts must be positive and strictly increasing, got {step_counts:?}"
        )));
    }
    let reference = evolve_exact(psi, params, t)?;
    let errors = step_counts
        .iter()
        .map(|&n| {
            let run = evolve_split_step(psi, params, t, SolverConfig::new(n))?;
            l2_distance(&run.state, &reference)
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(step_counts
        .iter()
        .enumerate()
        .map(|(i, &n_steps)| {
            let observed_order = step_counts.get(i + 1).and_then(|&next| {
                let (e0, e1) = (errors[i], errors[i + 1]);
                (e0 > ORDER_NOISE_FLOOR && e1 > ORDER_NOISE_FLOOR)
                    .then(|| (e0 / e1).ln() / (next as f64 / n_steps as f64).ln())
            });
            ConvergenceRow {
                n_steps,
                l2_error: errors[i],
                observed_order,
            }
        })
        .collect())
}
