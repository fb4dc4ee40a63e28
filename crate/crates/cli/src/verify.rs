//! The `verify` report: every oracle and property check, each with its
//! measured value, target and tolerance.

use std::fmt;

use gravphase::action::{classical_action, delta_action, ehrenfest_mean, shifted_free_action, spread_bound};
use gravphase::interferometry::{
    gaussian_visibility, interfere_branches, predicted_phase, run_protocol, run_protocol_with, Backend,
    InterferenceRecord, Scheme,
};
use gravphase::oracle::{commutator_element, dense_hamiltonian, HermitianSpectrum};
use gravphase::propagator::{apply_global_phase, evolve_exact, evolve_piecewise, shift_packet, AccelSchedule, Segment};
use gravphase::relativistic::{metric_fall_from_rest, nr_limit_check, proper_time, DEFAULT_QUADRATURE_INTERVALS};
use gravphase::solver::{convergence_report, evolve_split_step, SolverConfig};
use gravphase::{l2_distance, make_gaussian, moments, overlap, PhysicalParams, Trajectory, WavePacket};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::initial_state;
use crate::config::RunConfig;

pub const ORACLE_L2_TOL: f64 = 1e-6;
pub const SPREAD_ANALYTIC_TOL: f64 = 1e-10;
pub const SPREAD_NUMERIC_TOL: f64 = 1e-6;
pub const COMMUTATOR_REL_TOL: f64 = 1e-6;
pub const ACTION_IDENTITY_TOL: f64 = 1e-12;
pub const PHASE_TOL: f64 = 1e-5;
pub const VISIBILITY_TOL: f64 = 1e-4;
pub const BACKEND_TOL: f64 = 1e-5;
pub const EHRENFEST_TOL: f64 = 1e-6;
pub const STRANG_ORDER_RANGE: (f64, f64) = (1.8, 2.2);
pub const LIMIT_ORDER_RANGE: (f64, f64) = (-2.1, -1.9);
pub const STATIC_PROPER_TIME_TOL: f64 = 1e-14;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const COMPOSITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub target: String,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `|measured - target| <= tol`.
    fn near(name: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: (measured - target).abs() <= tol,
            measured: format!("{measured:.12e}"),
            target: format!("{target:.12e}"),
            tolerance: format!("{tol:e}"),
            detail: None,
        }
    }

    /// Passes when a non-negative deviation is at most `tol`.
    fn below(name: impl Into<String>, deviation: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: deviation <= tol,
            measured: format!("{deviation:.6e}"),
            target: "0".into(),
            tolerance: format!("{tol:e}"),
            detail: None,
        }
    }

    fn within(name: impl Into<String>, measured: f64, (lo, hi): (f64, f64)) -> Self {
        Self {
            name: name.into(),
            passed: (lo..=hi).contains(&measured),
            measured: format!("{measured:.6}"),
            target: format!("[{lo}, {hi}]"),
            tolerance: "range".into(),
            detail: None,
        }
    }

    fn failed(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            name: name.into(),
            passed: false,
            measured: "error".into(),
            target: "-".into(),
            tolerance: "-".into(),
            detail: Some(err.to_string()),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<44} measured={} target={} tol={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.target,
            self.tolerance
        )?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub all_passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut out: String = self.checks.iter().map(|c| format!("{c}\n")).collect();
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.checks.len() - failed,
            self.checks.len()
        ));
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

type CheckResult = Result<Vec<Check>, (String, gravphase::Error)>;

fn tag(name: &str) -> impl Fn(gravphase::Error) -> (String, gravphase::Error) + '_ {
    move |e| (name.to_string(), e)
}

fn collect(out: &mut Vec<Check>, result: CheckResult) {
    match result {
        Ok(checks) => out.extend(checks),
        Err((name, e)) => out.push(Check::failed(name, e)),
    }
}

pub fn run(cfg: &RunConfig) -> VerifyReport {
    let mut checks = Vec::new();
    match initial_state(cfg) {
        Ok(psi) => {
            checks.push(Check::below("initial_state_norm", (psi.norm() - 1.0).abs(), 1e-12));
            collect(&mut checks, factorization(cfg, &psi));
            collect(&mut checks, spread(cfg, &psi));
            collect(&mut checks, commutator(cfg, &psi));
            collect(&mut checks, protocol(cfg, &psi));
            collect(&mut checks, ehrenfest(cfg));
            collect(&mut checks, strang_order(cfg, &psi));
            collect(&mut checks, symmetries(cfg, &psi));
        }
        Err(e) => checks.push(Check::failed("initial_state", e)),
    }
    checks.extend(action_identity(cfg));
    collect(&mut checks, relativistic(cfg));
    VerifyReport {
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn factorization(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let name = "factorization_vs_dense_oracle";
    let t = cfg.verify.protocol_time;
    let h = dense_hamiltonian(&cfg.grid, &cfg.params).map_err(tag(name))?;
    let u = HermitianSpectrum::new(&h).map_err(tag(name))?.propagator(t, &cfg.params);
    let oracle = u.apply(psi).map_err(tag(name))?;
    let exact = evolve_exact(psi, &cfg.params, t).map_err(tag(name))?;
    let d = l2_distance(&exact, &oracle).map_err(tag(name))?;
    Ok(vec![Check::below(name, d, ORACLE_L2_TOL).with_detail(format!("t = {t}, L2 distance"))])
}

fn spread(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let p = cfg.params;
    let free = p.with_g(0.0);
    let steps = SolverConfig::new(cfg.verify.split_steps);
    let mut out = Vec::new();
    for &t in &cfg.verify.spread_times {
        let name = format!("spread_g_independence_analytic[t={t}]");
        let a = moments(&evolve_exact(psi, &p, t).map_err(tag(&name))?, &p).sigma_x;
        let b = moments(&evolve_exact(psi, &free, t).map_err(tag(&name))?, &p).sigma_x;
        out.push(Check::below(name, (a - b).abs() / b, SPREAD_ANALYTIC_TOL));

        let name = format!("spread_g_independence_split_step[t={t}]");
        let a = moments(&evolve_split_step(psi, &p, t, steps).map_err(tag(&name))?.state, &p).sigma_x;
        let b = moments(&evolve_split_step(psi, &free, t, steps).map_err(tag(&name))?.state, &p).sigma_x;
        out.push(Check::below(name, (a - b).abs() / b, SPREAD_NUMERIC_TOL));
    }
    Ok(out)
}

fn commutator(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let p = cfg.params;
    let mut gs = vec![0.0, p.g];
    gs.dedup();
    let mut out = Vec::new();
    let element = |name: String, phi: &WavePacket, g: f64, t: f64| -> Result<Check, (String, gravphase::Error)> {
        let params = p.with_g(g);
        let c = commutator_element(phi, psi, t, &cfg.grid, &params).map_err(tag(&name))?;
        let target = Complex64::new(0.0, -p.hbar * t / p.m) * overlap(phi, psi).map_err(tag(&name))?;
        let rel = (c - target).norm() / target.norm();
        Ok(Check {
            name,
            passed: rel <= COMMUTATOR_REL_TOL,
            measured: format!("{:.10e}{:+.10e}i", c.re, c.im),
            target: format!("{:.10e}{:+.10e}i", target.re, target.im),
            tolerance: format!("rel {COMMUTATOR_REL_TOL:e}"),
            detail: Some(format!("relative deviation {rel:.3e}")),
        })
    };
    for &g in &gs {
        for &t in &cfg.verify.commutator_times {
            if t == 0.0 {
                continue;
            }
            out.push(element(format!("commutator_identity[g={g},t={t}]"), psi, g, t)?);
        }
    }
    let s = cfg.initial;
    let name = "commutator_identity_off_diagonal".to_string();
    let phi = make_gaussian(&cfg.grid, s.x0 + 0.5 * s.sigma0, s.p0 + 0.3, 1.2 * s.sigma0, &p).map_err(tag(&name))?;
    let t = *cfg.verify.commutator_times.last().expect("validated non-empty");
    if t > 0.0 {
        out.push(element(name, &phi, p.g, t)?);
    }
    Ok(out)
}

fn action_identity(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut worst, mut worst_x0) = (0.0_f64, 0.0_f64);
    for _ in 0..cfg.verify.random_tuples {
        let params = PhysicalParams {
            m: rng.random_range(0.1..2.0),
            g: rng.random_range(-2.0..2.0),
            ..cfg.params
        };
        let t = rng.random_range(0.2..2.0);
        let xt = rng.random_range(-3.0..3.0);
        let x0a: f64 = rng.random_range(-3.0..3.0);
        let x0b: f64 = rng.random_range(-3.0..3.0);
        let diff = |x0: f64| {
            classical_action(x0, xt, 0.0, t, &params).expect("t > 0").value
                - shifted_free_action(x0, xt, t, &params).expect("t > 0").value
        };
        let (da, db) = (diff(x0a), diff(x0b));
        worst = worst.max((da - delta_action(xt, t, &params)).abs());
        worst_x0 = worst_x0.max((da - db).abs());
    }
    let detail = format!("{} seeded tuples, seed {}", cfg.verify.random_tuples, cfg.seed);
    vec![
        Check::below("delta_action_identity", worst, ACTION_IDENTITY_TOL).with_detail(detail.clone()),
        Check::below("delta_action_x0_independence", worst_x0, ACTION_IDENTITY_TOL).with_detail(detail),
    ]
}

fn protocol(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let p = cfg.params;
    let t = cfg.verify.protocol_time;
    let s = cfg.initial;
    let name = "interference_protocol";
    let analytic = run_protocol(psi, &p, t, &Scheme::Colocated).map_err(tag(name))?;
    let numeric = run_protocol_with(
        psi,
        &p,
        t,
        &Scheme::Colocated,
        Backend::SplitStep {
            n_steps: cfg.verify.split_steps,
        },
    )
    .map_err(tag(name))?;
    let (xbar, _) = ehrenfest_mean(s.x0, s.p0, t, &p);
    let phase_target = predicted_phase(xbar, t, &p);
    let sigma_t = spread_bound(s.sigma0, t, &p).map_err(tag(name))?.exact;
    let vis_target = gaussian_visibility(sigma_t, t, &p).map_err(tag(name))?;
    Ok(vec![
        Check::near("interference_phase", analytic.phase_unwrapped, phase_target, PHASE_TOL),
        Check::near("interference_visibility", analytic.visibility, vis_target, VISIBILITY_TOL),
        Check::below(
            "backend_agreement_phase",
            (analytic.phase - numeric.phase).abs(),
            BACKEND_TOL,
        ),
        Check::below(
            "backend_agreement_visibility",
            (analytic.visibility - numeric.visibility).abs(),
            BACKEND_TOL,
        ),
    ])
}

fn ehrenfest(cfg: &RunConfig) -> CheckResult {
    let s = cfg.initial;
    let steps = SolverConfig::new(cfg.verify.split_steps);
    let (mut worst_exact, mut worst_numeric) = (0.0_f64, 0.0_f64);
    let name = "ehrenfest_means";
    for &g in &cfg.verify.ehrenfest_g {
        let p = cfg.params.with_g(g);
        let psi = make_gaussian(&cfg.grid, s.x0, s.p0, s.sigma0, &p).map_err(tag(name))?;
        for &t in &cfg.verify.ehrenfest_times {
            let (mx, mp) = ehrenfest_mean(s.x0, s.p0, t, &p);
            let dev = |w: &WavePacket| {
                let mo = moments(w, &p);
                (mo.mean_x - mx).abs().max((mo.mean_p - mp).abs())
            };
            worst_exact = worst_exact.max(dev(&evolve_exact(&psi, &p, t).map_err(tag(name))?));
            worst_numeric = worst_numeric.max(dev(&evolve_split_step(&psi, &p, t, steps).map_err(tag(name))?.state));
        }
    }
    let sweep = format!(
        "{}x{} (g, t) sweep",
        cfg.verify.ehrenfest_g.len(),
        cfg.verify.ehrenfest_times.len()
    );
    Ok(vec![
        Check::below("ehrenfest_analytic", worst_exact, EHRENFEST_TOL).with_detail(sweep.clone()),
        Check::below("ehrenfest_split_step", worst_numeric, EHRENFEST_TOL).with_detail(sweep),
    ])
}

fn strang_order(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let name = "strang_convergence_order";
    let rows = convergence_report(psi, &cfg.params, cfg.verify.solver_time, &cfg.verify.solver_steps)
        .map_err(tag(name))?;
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.observed_order).collect();
    let detail = rows
        .iter()
        .map(|r| format!("n={}: {:.3e}", r.n_steps, r.l2_error))
        .collect::<Vec<_>>()
        .join(", ");
    if orders.len() + 1 != rows.len() {
        return Ok(vec![Check::failed(name, format!("errors at round-off level: {detail}"))]);
    }
    let lo = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let decreasing = rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error);
    let mut check = Check::within(name, lo, STRANG_ORDER_RANGE);
    check.passed = check.passed && STRANG_ORDER_RANGE.1 >= hi && decreasing;
    check.measured = format!("{lo:.4}..{hi:.4}");
    Ok(vec![check.with_detail(detail)])
}

fn relativistic(cfg: &RunConfig) -> CheckResult {
    let p = cfg.params;
    let t = cfg.verify.relativistic_time;
    let name = "relativistic_limit_order";
    let table = nr_limit_check(&metric_fall_from_rest(0.0, &p), t, &p, &cfg.verify.c_list).map_err(tag(name))?;
    let detail = table
        .rows
        .iter()
        .map(|r| format!("c={}: {:.3e}", r.c, r.abs_error))
        .collect::<Vec<_>>()
        .join(", ");
    let limit = match table.fitted_order {
        Some(order) => {
            let mut c = Check::within(name, order, LIMIT_ORDER_RANGE);
            c.passed &= table.monotone;
            c.with_detail(detail)
        }
        None => Check::failed(name, format!("no measurable error: {detail}")),
    };
    let tau = proper_time(&Trajectory::stationary(0.0), t, &p, DEFAULT_QUADRATURE_INTERVALS).map_err(tag(name))?;
    Ok(vec![
        limit,
        Check::near("static_path_proper_time", tau, t, STATIC_PROPER_TIME_TOL),
    ])
}

fn record_distance(a: &InterferenceRecord, b: &InterferenceRecord) -> f64 {
    let pv = match (a.predicted_visibility, b.predicted_visibility) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    [
        (a.overlap - b.overlap).norm(),
        (a.visibility - b.visibility).abs(),
        (a.phase - b.phase).abs(),
        (a.phase_unwrapped - b.phase_unwrapped).abs(),
        (a.fringe_x - b.fringe_x).abs(),
        (a.fringe_y - b.fringe_y).abs(),
        (a.predicted_phase - b.predicted_phase).abs(),
        pv,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn symmetries(cfg: &RunConfig, psi: &WavePacket) -> CheckResult {
    let p = cfg.params;
    let t = cfg.verify.protocol_time;
    let name = "protocol_symmetries";
    let base = run_protocol(psi, &p, t, &Scheme::Colocated).map_err(tag(name))?;
    let rotated = run_protocol(&apply_global_phase(psi, 0.7), &p, t, &Scheme::Colocated).map_err(tag(name))?;

    let a = evolve_exact(psi, &p, t).map_err(tag(name))?;
    let b = shift_packet(&evolve_exact(psi, &p.with_g(0.0), t).map_err(tag(name))?, 0.5 * p.g * t * t)
        .map_err(tag(name))?;
    let forward = interfere_branches(&a, &b, t, &p).map_err(tag(name))?;
    let swapped = interfere_branches(&b, &a, t, &p).map_err(tag(name))?;
    let swap_dev = (swapped.overlap - forward.overlap.conj())
        .norm()
        .max((swapped.visibility - forward.visibility).abs());

    let half = AccelSchedule::new(vec![Segment { g: p.g, dt: 0.5 * t }, Segment { g: p.g, dt: 0.5 * t }])
        .map_err(tag(name))?;
    let piecewise = evolve_piecewise(psi, &p, &half).map_err(tag(name))?;
    let composition = l2_distance(&piecewise, &a).map_err(tag(name))?;

    Ok(vec![
        Check::below("global_phase_invariance", record_distance(&base, &rotated), SYMMETRY_TOL),
        Check::below("branch_swap_conjugates_overlap", swap_dev, SYMMETRY_TOL),
        Check::below("piecewise_matches_single_step", composition, COMPOSITION_TOL),
    ])
}
