//! `evolve` and `interfere` drivers.

use gravphase::interferometry::{fringe_scan_with, predicted_phase};
use gravphase::propagator::evolve_exact;
use gravphase::solver::{evolve_split_step, SolverConfig};
use gravphase::{make_gaussian, moments, Error, WavePacket};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::csv_bytes;

pub const EVOLVE_HEADER: [&str; 7] = [
    "t",
    "mean_x_exact",
    "mean_p_exact",
    "sigma_x_exact",
    "mean_x_numeric",
    "sigma_x_numeric",
    "norm_error",
];

pub const INTERFERE_HEADER: [&str; 8] = [
    "t",
    "re_overlap",
    "im_overlap",
    "visibility",
    "phase",
    "phase_unwrapped",
    "predicted_phase",
    "predicted_visibility",
];

/// Builds the configured initial Gaussian, mapping failures onto config fields.
pub fn initial_state(cfg: &RunConfig) -> Result<WavePacket, CliError> {
    let s = cfg.initial;
    make_gaussian(&cfg.grid, s.x0, s.p0, s.sigma0, &cfg.params).map_err(|e| match e {
        Error::BadSigma { .. } => CliError::Config {
            field: "initial.sigma0".into(),
            message: e.to_string(),
        },
        Error::InvalidArgument(msg) => CliError::Config {
            field: "initial.p0".into(),
            message: msg,
        },
        other => CliError::Run {
            context: "initial state (initial.x0, initial.sigma0 against grid.x_min/grid.x_max)".into(),
            source: other,
        },
    })
}

pub fn evolve(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let section = cfg.evolve.as_ref().ok_or_else(|| CliError::Config {
        field: "evolve".into(),
        message: "missing required section".into(),
    })?;
    let psi0 = initial_state(cfg)?;
    let p = &cfg.params;
    let rows = section
        .times
        .iter()
        .map(|&t| {
            let ctx = format!("evolve at t = {t} (grid.x_min/grid.x_max too narrow)");
            let exact = evolve_exact(&psi0, p, t).map_err(CliError::run(ctx.clone()))?;
            let numeric = evolve_split_step(&psi0, p, t, SolverConfig::new(section.n_steps))
                .map_err(CliError::run(ctx))?
                .state;
            let (a, b) = (moments(&exact, p), moments(&numeric, p));
            let norm_error = (a.norm - 1.0).abs().max((b.norm - 1.0).abs());
            Ok(vec![
                Some(t),
                Some(a.mean_x),
                Some(a.mean_p),
                Some(a.sigma_x),
                Some(b.mean_x),
                Some(b.sigma_x),
                Some(norm_error),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(csv_bytes(&EVOLVE_HEADER, &rows))
}

/// Splits the aliased gap so each predicted phase step stays below pi/2.
fn denser_times(times: &[f64], index: usize, cfg: &RunConfig) -> String {
    let (t0, t1) = (times[index], times[index + 1]);
    let ehrenfest = |t: f64| {
        let s = cfg.initial;
        let xbar = s.x0 + s.p0 * t / cfg.params.m - 0.5 * cfg.params.g * t * t;
        predicted_phase(xbar, t, &cfg.params)
    };
    let jump = (ehrenfest(t1) - ehrenfest(t0)).abs();
    let pieces = ((jump / std::f64::consts::FRAC_PI_2).ceil() as usize).max(2);
    let mut out: Vec<f64> = times[..=index].to_vec();
    out.extend((1..pieces).map(|i| t0 + (t1 - t0) * i as f64 / pieces as f64));
    out.extend_from_slice(&times[index + 1..]);
    let items: Vec<String> = out.iter().map(|t| format!("{t}")).collect();
    format!("[{}]", items.join(", "))
}

pub fn interfere(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let section = cfg.interfere.as_ref().ok_or_else(|| CliError::Config {
        field: "interfere".into(),
        message: "missing required section".into(),
    })?;
    let psi0 = initial_state(cfg)?;
    let records = fringe_scan_with(&psi0, &cfg.params, &section.times, &section.scheme, section.backend)
        .map_err(|e| match e {
            Error::PhaseAliasing { index, .. } => CliError::Aliasing {
                suggestion: denser_times(&section.times, index, cfg),
                source: e,
            },
            other => CliError::Run {
                context: "interfere (grid.x_min/grid.x_max or interfere.times)".into(),
                source: other,
            },
        })?;
    let rows: Vec<Vec<Option<f64>>> = records
        .iter()
        .map(|r| {
            vec![
                Some(r.t),
                Some(r.overlap.re),
                Some(r.overlap.im),
                Some(r.visibility),
                Some(r.phase),
                Some(r.phase_unwrapped),
                Some(r.predicted_phase),
                r.predicted_visibility,
            ]
        })
        .collect();
    Ok(csv_bytes(&INTERFERE_HEADER, &rows))
}
