//! Agreement between the analytic propagator, the split-step solver, the dense
//! oracle and the closed-form classical quantities.

use gravphase::action::{delta_action, ehrenfest_mean, spread_bound};
use gravphase::oracle::{dense_hamiltonian, HermitianSpectrum};
use gravphase::propagator::{apply_global_phase, apply_linear_phase, evolve_exact, evolve_free};
use gravphase::solver::{evolve_split_step, SolverConfig};
use gravphase::{l2_distance, make_gaussian, moments, to_momentum, Grid, PhysicalParams};
use num_complex::Complex64;

fn grid() -> Grid {
    Grid::new(-20.0, 20.0, 256).unwrap()
}

#[test]
fn analytic_and_split_step_match_dense_oracle() {
    let p = PhysicalParams::natural(1.0);
    let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, &p).unwrap();
    let spectrum = HermitianSpectrum::new(&dense_hamiltonian(&grid(), &p).unwrap()).unwrap();
    for t in [0.5, 1.0, 1.5] {
        let u = spectrum.propagator(t, &p);
        assert!(u.unitarity_error() < 1e-10);
        let oracle = u.apply(&psi).unwrap();
        let exact = evolve_exact(&psi, &p, t).unwrap();
        let numeric = evolve_split_step(&psi, &p, t, SolverConfig::new(2048)).unwrap().state;
        assert!(l2_distance(&exact, &oracle).unwrap() < 1e-6, "t = {t}");
        assert!(l2_distance(&numeric, &oracle).unwrap() < 1e-6, "t = {t}");
    }
}

#[test]
fn moving_packet_matches_oracle() {
    let p = PhysicalParams::new(1.0, 2.0, -0.7, 10.0).unwrap();
    let psi = make_gaussian(&grid(), 1.0, 1.5, 1.2, &p).unwrap();
    let spectrum = HermitianSpectrum::new(&dense_hamiltonian(&grid(), &p).unwrap()).unwrap();
    let oracle = spectrum.propagator(1.3, &p).apply(&psi).unwrap();
    let exact = evolve_exact(&psi, &p, 1.3).unwrap();
    assert!(l2_distance(&exact, &oracle).unwrap() < 1e-6);
}

#[test]
fn free_limit_is_pure_kinetic_phase() {
    let p = PhysicalParams::natural(0.0);
    let psi = make_gaussian(&grid(), -1.0, 0.8, 1.0, &p).unwrap();
    let out = evolve_exact(&psi, &p, 1.7).unwrap();
    let (k, a0, a1) = (
        grid().wavenumbers(),
        to_momentum(&psi),
        to_momentum(&out),
    );
    for ((k, x), y) in k.iter().zip(a0.amplitudes()).zip(a1.amplitudes()) {
        let expected = x * Complex64::from_polar(1.0, -1.7 * k * k / 2.0);
        assert!((y - expected).norm() < 1e-12);
    }
}

#[test]
fn ehrenfest_matches_both_backends() {
    let (x0, p0) = (0.5, 0.7);
    for g in [-1.0, 0.5, 2.0] {
        for t in [0.4, 1.0, 1.5] {
            let p = PhysicalParams::natural(g);
            let psi = make_gaussian(&grid(), x0, p0, 1.0, &p).unwrap();
            let (mx, mp) = ehrenfest_mean(x0, p0, t, &p);
            let exact = moments(&evolve_exact(&psi, &p, t).unwrap(), &p);
            let numeric = moments(
                &evolve_split_step(&psi, &p, t, SolverConfig::new(512)).unwrap().state,
                &p,
            );
            for mo in [exact, numeric] {
                assert!((mo.mean_x - mx).abs() < 1e-6);
                assert!((mo.mean_p - mp).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn measured_spread_follows_gaussian_formula() {
    let p = PhysicalParams::natural(1.0);
    let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, &p).unwrap();
    let free = evolve_free(&psi, &p, 2.0).unwrap();
    assert!((moments(&free, &p).sigma_x - 2.0_f64.sqrt()).abs() < 1e-6);
    for t in [0.5, 1.0, 2.0] {
        let falling = moments(&evolve_exact(&psi, &p, t).unwrap(), &p);
        let bound = spread_bound(1.0, t, &p).unwrap();
        assert!((falling.sigma_x - bound.exact).abs() < 1e-8);
    }
}

#[test]
fn relative_action_phase_matches_propagator_factors() {
    // exp(i dS / hbar) against the linear phase at xt times the global phase
    let p = PhysicalParams::new(0.8, 1.3, 0.9, 10.0).unwrap();
    let g = grid();
    let psi = make_gaussian(&g, 0.0, 0.0, 1.0, &p).unwrap();
    let t = 1.1;
    let kicked = apply_global_phase(
        &apply_linear_phase(&psi, p.m * p.g * t, &p),
        -p.m * p.g * p.g * t.powi(3) / (6.0 * p.hbar),
    );
    for i in [100, 128, 150] {
        let xt = g.x(i);
        let factor = kicked.amplitudes()[i] / psi.amplitudes()[i];
        let expected = Complex64::from_polar(1.0, delta_action(xt, t, &p) / p.hbar);
        assert!((factor - expected).norm() < 1e-12);
    }
}
