use gravphase::propagator::{evolve_exact, shift_packet};
use gravphase::{l2_distance, make_gaussian, moments, to_momentum, to_position, Grid, PhysicalParams, WavePacket};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(-20.0, 20.0, 256).unwrap()
}

fn interior_amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 256 - 2 * 13)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_round_trip_and_parseval(vals in interior_amplitudes()) {
        let g = grid();
        let m = g.margin_nodes();
        let mut amp = vec![Complex64::new(0.0, 0.0); g.n()];
        for (slot, (re, im)) in amp[m..g.n() - m].iter_mut().zip(vals) {
            *slot = Complex64::new(re, im);
        }
        prop_assume!(amp.iter().any(|z| z.norm() > 0.0));
        let psi = WavePacket::new(g, amp).unwrap();
        let phi = to_momentum(&psi);
        prop_assert!((phi.norm() - psi.norm()).abs() < 1e-12);
        let back = to_position(&phi).unwrap();
        let worst = psi
            .amplitudes()
            .iter()
            .zip(back.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst < 1e-12);
    }

    #[test]
    fn gaussian_moments_reproduce_request(
        x0 in -3.0..3.0f64, p0 in -4.0..4.0f64, sigma0 in 0.5..1.5f64,
    ) {
        let p = PhysicalParams::natural(0.0);
        let psi = make_gaussian(&grid(), x0, p0, sigma0, &p).unwrap();
        let mo = moments(&psi, &p);
        prop_assert!((mo.norm - 1.0).abs() < 1e-12);
        prop_assert!((mo.mean_x - x0).abs() < 1e-8);
        prop_assert!((mo.mean_p - p0).abs() < 1e-8);
        prop_assert!((mo.sigma_x - sigma0).abs() < 1e-8);
        prop_assert!(mo.sigma_x * mo.sigma_p >= 0.5 * p.hbar * (1.0 - 1e-9));
    }

    #[test]
    fn exact_evolution_is_unitary_and_spread_is_g_blind(
        g in -1.5..1.5f64, t in 0.0..2.0f64, sigma0 in 0.9..1.6f64,
    ) {
        let p = PhysicalParams::natural(g);
        let psi = make_gaussian(&grid(), 0.0, 0.0, sigma0, &p).unwrap();
        let falling = evolve_exact(&psi, &p, t).unwrap();
        let free = evolve_exact(&psi, &p.with_g(0.0), t).unwrap();
        prop_assert!((falling.norm() - 1.0).abs() < 1e-12);
        let (a, b) = (moments(&falling, &p), moments(&free, &p));
        prop_assert!((a.sigma_x - b.sigma_x).abs() / b.sigma_x < 1e-10);
        prop_assert!(a.sigma_x * a.sigma_p >= 0.5 * (1.0 - 1e-9));
    }

    #[test]
    fn exact_evolution_composes(g in -1.5..1.5f64, t1 in 0.0..1.0f64, t2 in 0.0..1.0f64) {
        let p = PhysicalParams::natural(g);
        let psi = make_gaussian(&grid(), 0.0, 0.3, 1.0, &p).unwrap();
        let stepwise = evolve_exact(&evolve_exact(&psi, &p, t1).unwrap(), &p, t2).unwrap();
        let direct = evolve_exact(&psi, &p, t1 + t2).unwrap();
        prop_assert!(l2_distance(&stepwise, &direct).unwrap() < 1e-10);
    }

    #[test]
    fn shift_is_a_group(a in -4.0..4.0f64, b in -4.0..4.0f64) {
        let p = PhysicalParams::natural(0.0);
        let psi = make_gaussian(&grid(), 0.0, 0.0, 1.0, &p).unwrap();
        let two = shift_packet(&shift_packet(&psi, a).unwrap(), b).unwrap();
        let one = shift_packet(&psi, a + b).unwrap();
        prop_assert!(l2_distance(&two, &one).unwrap() < 1e-12);
        prop_assert!((moments(&one, &p).mean_x + a + b).abs() < 1e-8);
    }
}
