//! Two-branch interferometer: a spin-controlled superposition of a falling
//! branch (`|0>`, evolved with `g`) and an inertial branch (`|1>`, evolved
//! freely), read out through the spin `X` and `Y` expectations.
//!
//! With the spin prepared in `(|0> + |1>)/sqrt(2)` the fringe signals are
//! `<X> = Re <B|A>` and `<Y> = Im <B|A>`, where `A` is the falling branch and
//! `B` the reference branch.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::propagator::{evolve_exact, evolve_piecewise, shift_packet, AccelSchedule, Segment};
use crate::solver::{evolve_split_step, SolverConfig};
use crate::wavepacket::{moments, overlap, WavePacket};

/// Tolerance on `sigma_x sigma_p / (hbar/2) - 1` for treating a state as a
/// minimum-uncertainty Gaussian.
const MIN_UNCERTAINTY_TOL: f64 = 1e-9;

/// How the falling and inertial branches are brought back together.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// The inertial branch is translated by the classical fall `-g t^2/2`
    /// so both branch centers coincide at readout.
    Colocated,
    /// Each branch follows its own acceleration history; a run at time `t`
    /// uses the first `t` of each schedule.
    Schedules {
        accelerated: AccelSchedule,
        reference: AccelSchedule,
    },
}

/// Which propagator evolves the branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Analytic,
    SplitStep { n_steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceRecord {
    pub t: f64,
    /// `<B|A>`
    pub overlap: Complex64,
    pub visibility: f64,
    /// Principal value in `(-pi, pi]`.
    pub phase: f64,
    /// Continuous companion of `phase`; equals the branch closest to the
    /// prediction for single runs.
    pub phase_unwrapped: f64,
    pub fringe_x: f64,
    pub fringe_y: f64,
    pub predicted_phase: f64,
    /// Available for minimum-uncertainty Gaussian inputs in the colocated scheme.
    pub predicted_visibility: Option<f64>,
}

/// `(-m g xbar t - m g^2 t^3 / 6) / hbar`.
pub fn predicted_phase(xbar: f64, t: f64, params: &PhysicalParams) -> f64 {
    let PhysicalParams { hbar, m, g, .. } = *params;
    (-m * g * xbar * t - m * g * g * t.powi(3) / 6.0) / hbar
}

/// `exp(-(m g t sigma_t / hbar)^2 / 2)`: modulus of the Gaussian characteristic
/// function at the branch momentum transfer `m g t`.
pub fn gaussian_visibility(sigma_t: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    if !(sigma_t > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma_t must be positive, got {sigma_t}")));
    }
    let q = params.m * params.g * t * sigma_t / params.hbar;
    Ok((-0.5 * q * q).exp())
}

fn nearest_branch(phase: f64, target: f64) -> f64 {
    phase + 2.0 * PI * ((target - phase) / (2.0 * PI)).round()
}

/// Record for already-evolved branches; `predicted_visibility` is left empty.
pub fn interfere_branches(
    accelerated: &WavePacket,
    reference: &WavePacket,
    t: f64,
    params: &PhysicalParams,
) -> Result<InterferenceRecord> {
    let amp = overlap(reference, accelerated)?;
    let xbar = moments(reference, params).mean_x;
    let predicted = predicted_phase(xbar, t, params);
    let phase = amp.arg();
    Ok(InterferenceRecord {
        t,
        overlap: amp,
        visibility: amp.norm(),
        phase,
        phase_unwrapped: nearest_branch(phase, predicted),
        fringe_x: amp.re,
        fringe_y: amp.im,
        predicted_phase: predicted,
        predicted_visibility: None,
    })
}

fn evolve_constant(psi: &WavePacket, params: &PhysicalParams, g: f64, t: f64, backend: Backend) -> Result<WavePacket> {
    let p = params.with_g(g);
    match backend {
        Backend::Analytic => evolve_exact(psi, &p, t),
        Backend::SplitStep { n_steps } => Ok(evolve_split_step(psi, &p, t, SolverConfig::new(n_steps))?.state),
    }
}

fn evolve_schedule(psi: &WavePacket, params: &PhysicalParams, schedule: &AccelSchedule, backend: Backend) -> Result<WavePacket> {
    match backend {
        Backend::Analytic => evolve_piecewise(psi, params, schedule),
        Backend::SplitStep { n_steps } => {
            let total = schedule.total_duration();
            let mut state = psi.clone();
            for (i, seg) in schedule.segments().iter().enumerate() {
                let steps = ((n_steps as f64 * seg.dt / total).round() as usize).max(1);
                state = evolve_constant(&state, params, seg.g, seg.dt, Backend::SplitStep { n_steps: steps })
                    .map_err(|e| e.in_segment(i))?;
            }
            Ok(state)
        }
    }
}

fn truncate(schedule: &AccelSchedule, t: f64) -> Result<AccelSchedule> {
    let mut left = t;
    let mut out = Vec::new();
    for seg in schedule.segments() {
        if left <= 0.0 {
            break;
        }
        let dt = seg.dt.min(left);
        out.push(Segment { g: seg.g, dt });
        left -= dt;
    }
    AccelSchedule::new(out)
}

fn is_minimum_uncertainty(psi: &WavePacket, params: &PhysicalParams) -> bool {
    let mo = moments(psi, params);
    (mo.sigma_x * mo.sigma_p / (0.5 * params.hbar) - 1.0).abs() < MIN_UNCERTAINTY_TOL
}

/// One run of the interferometer with the analytic propagator.
pub fn run_protocol(
    psi0: &WavePacket,
    params: &PhysicalParams,
    t: f64,
    scheme: &Scheme,
) -> Result<InterferenceRecord> {
    run_protocol_with(psi0, params, t, scheme, Backend::Analytic)
}

pub fn run_protocol_with(
    psi0: &WavePacket,
    params: &PhysicalParams,
    t: f64,
    scheme: &Scheme,
    backend: Backend,
) -> Result<InterferenceRecord> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    match scheme {
        Scheme::Colocated => {
            let falling = evolve_constant(psi0, params, params.g, t, backend)?;
            let inertial = evolve_constant(psi0, params, 0.0, t, backend)?;
            let reference = shift_packet(&inertial, 0.5 * params.g * t * t)?;
            let mut record = interfere_branches(&falling, &reference, t, params)?;
            if is_minimum_uncertainty(psi0, params) {
                let sigma_t = moments(&reference, params).sigma_x;
                record.predicted_visibility = Some(gaussian_visibility(sigma_t, t, params)?);
            }
            Ok(record)
        }
        Scheme::Schedules {
            accelerated,
            reference,
        } => {
            let (ta, tb) = (accelerated.total_duration(), reference.total_duration());
            if (ta - tb).abs() > 1e-12 * ta.abs().max(1.0) {
                return Err(Error::SchemeMismatch {
                    accelerated: ta,
                    reference: tb,
                });
            }
            if t > ta * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "t = {t} exceeds the schedule duration {ta}"
                )));
            }
            let a = evolve_schedule(psi0, params, &truncate(accelerated, t)?, backend)?;
            let b = evolve_schedule(psi0, params, &truncate(reference, t)?, backend)?;
            interfere_branches(&a, &b, t, params)
        }
    }
}

/// Runs the interferometer at each time and unwraps the phase.
pub fn fringe_scan(
    psi0: &WavePacket,
    params: &PhysicalParams,
    t_values: &[f64],
    scheme: &Scheme,
) -> Result<Vec<InterferenceRecord>> {
    fringe_scan_with(psi0, params, t_values, scheme, Backend::Analytic)
}

pub fn fringe_scan_with(
    psi0: &WavePacket,
    params: &PhysicalParams,
    t_values: &[f64],
    scheme: &Scheme,
    backend: Backend,
) -> Result<Vec<InterferenceRecord>> {
    if t_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "scan times must be strictly increasing".into(),
        ));
    }
    let mut records = t_values
        .iter()
        .map(|&t| run_protocol_with(psi0, params, t, scheme, backend))
        .collect::<Result<Vec<_>>>()?;
    unwrap_phases(&mut records)?;
    Ok(records)
}

/// Nearest-branch continuation; the first sample sits on the branch closest
/// to its prediction.
pub fn unwrap_phases(records: &mut [InterferenceRecord]) -> Result<()> {
    for i in 1..records.len() {
        let prev = records[i - 1];
        let cur = &mut records[i];
        let predicted_step = cur.predicted_phase - prev.predicted_phase;
        if predicted_step.abs() >= PI {
            return Err(Error::PhaseAliasing {
                index: i - 1,
                next: i,
                step: predicted_step,
            });
        }
        cur.phase_unwrapped = nearest_branch(cur.phase, prev.phase_unwrapped);
        let step = cur.phase_unwrapped - prev.phase_unwrapped;
        if step.abs() >= PI {
            return Err(Error::PhaseAliasing {
                index: i - 1,
                next: i,
                step,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::propagator::apply_global_phase;
    use crate::wavepacket::make_gaussian;

    fn setup() -> (PhysicalParams, WavePacket) {
        let grid = Grid::new(-20.0, 20.0, 256).unwrap();
        let p = PhysicalParams::natural(1.0);
        (p, make_gaussian(&grid, 0.0, 0.0, 1.0, &p).unwrap())
    }

    #[test]
    fn closed_form_helpers() {
        let p = PhysicalParams::natural(1.0);
        assert_eq!(predicted_phase(0.3, 2.0, &p.with_g(0.0)), 0.0);
        assert!((predicted_phase(0.0, 1.0, &p) + 1.0 / 6.0).abs() < 1e-15);
        assert!((predicted_phase(-0.5, 1.0, &p) - 1.0 / 3.0).abs() < 1e-15);

        assert_eq!(gaussian_visibility(1.0, 1.0, &p.with_g(0.0)).unwrap(), 1.0);
        let v = gaussian_visibility(1.25_f64.sqrt(), 1.0, &p).unwrap();
        assert!((v - (-0.625_f64).exp()).abs() < 1e-15);
        let v2 = gaussian_visibility(1.25_f64.sqrt(), 1.0, &p.with_g(2.0)).unwrap();
        assert!((v2 - v.powi(4)).abs() < 1e-15);
        assert!(gaussian_visibility(0.0, 1.0, &p).is_err());
    }

    #[test]
    fn zero_time_record() {
        let (p, psi) = setup();
        let r = run_protocol(&psi, &p, 0.0, &Scheme::Colocated).unwrap();
        assert!((r.overlap - 1.0).norm() < 1e-12);
        assert_eq!(r.phase, 0.0);
        assert!((r.visibility - 1.0).abs() < 1e-12);
        assert_eq!(r.predicted_visibility, Some(1.0));
    }

    #[test]
    fn canonical_run() {
        let (p, psi) = setup();
        let r = run_protocol(&psi, &p, 1.0, &Scheme::Colocated).unwrap();
        assert!((r.phase - 1.0 / 3.0).abs() < 1e-6, "{}", r.phase);
        assert!((r.visibility - (-0.625_f64).exp()).abs() < 1e-4);
        assert!((r.predicted_phase - 1.0 / 3.0).abs() < 1e-8);
        assert!((r.predicted_visibility.unwrap() - r.visibility).abs() < 1e-8);
        assert!((r.fringe_x.powi(2) + r.fringe_y.powi(2) - r.visibility.powi(2)).abs() < 1e-12);

        let s = run_protocol_with(&psi, &p, 1.0, &Scheme::Colocated, Backend::SplitStep { n_steps: 2048 }).unwrap();
        assert!((s.phase - r.phase).abs() < 1e-5);
        assert!((s.visibility - r.visibility).abs() < 1e-5);
    }

    #[test]
    fn symmetries() {
        let (p, psi) = setup();
        let a = evolve_exact(&psi, &p, 1.0).unwrap();
        let b = shift_packet(&evolve_exact(&psi, &p.with_g(0.0), 1.0).unwrap(), 0.5).unwrap();
        let r = interfere_branches(&a, &b, 1.0, &p).unwrap();
        let rot = interfere_branches(&apply_global_phase(&a, 2.1), &apply_global_phase(&b, 2.1), 1.0, &p).unwrap();
        assert!((r.overlap - rot.overlap).norm() < 1e-12);
        assert!((r.phase - rot.phase).abs() < 1e-12);
        let swapped = interfere_branches(&b, &a, 1.0, &p).unwrap();
        assert!((swapped.overlap - r.overlap.conj()).norm() < 1e-12);
        assert!((swapped.visibility - r.visibility).abs() < 1e-12);
    }

    #[test]
    fn schedules_scheme() {
        let (p, psi) = setup();
        let accelerated = AccelSchedule::constant(1.0, 1.0).unwrap();
        let reference = AccelSchedule::constant(0.0, 1.0).unwrap();
        let scheme = Scheme::Schedules { accelerated: accelerated.clone(), reference };
        let r = run_protocol(&psi, &p, 1.0, &scheme).unwrap();
        assert!(r.visibility <= 1.0 + 1e-12);
        assert!(r.predicted_visibility.is_none());

        let bad = Scheme::Schedules {
            accelerated,
            reference: AccelSchedule::constant(0.0, 2.0).unwrap(),
        };
        assert!(matches!(run_protocol(&psi, &p, 1.0, &bad), Err(Error::SchemeMismatch { .. })));
    }

    #[test]
    fn scan_tracks_prediction() {
        let (p, psi) = setup();
        let ts: Vec<f64> = (1..=10).map(|i| i as f64 * 0.1).collect();
        let rows = fringe_scan(&psi, &p, &ts, &Scheme::Colocated).unwrap();
        for r in &rows {
            let xbar = -0.5 * p.g * r.t * r.t;
            assert!((r.phase_unwrapped - predicted_phase(xbar, r.t, &p)).abs() < 1e-5);
            assert!((r.fringe_x - r.visibility * r.phase.cos()).abs() < 1e-12);
        }
        let single = fringe_scan(&psi, &p, &[0.0], &Scheme::Colocated).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn sparse_scan_aliases() {
        let (p, psi) = setup();
        let res = fringe_scan(&psi, &p.with_g(2.0), &[0.0, 0.8, 1.6], &Scheme::Colocated);
        assert!(matches!(res, Err(Error::PhaseAliasing { .. })));
    }
}
