use aho_core::pms::optimize_physical;
use aho_core::reference::ground_wavefunction_reduced;
use aho_core::wavefunction::{log_abs_psi, pms_profile, profile_grid};
use aho_core::{compare, expand, ground_energy, optimize, strong_coupling_alpha0, OscillatorParams, SolverConfig};
use proptest::prelude::*;

fn reduced(omega: f64, mu: f64) -> OscillatorParams {
    OscillatorParams::reduced(omega, mu).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansion_depends_only_on_reduced_coupling(
        hbar in 0.2f64..5.0,
        mass in 0.2f64..5.0,
        omega in 0.2f64..5.0,
        mu in 0.01f64..100.0,
        a in 0.3f64..3.0,
        b in 0.3f64..3.0,
    ) {
        let p = OscillatorParams::new(hbar, mass, omega, mu).unwrap();
        // same hbar mu / (m^2 omega^3) after hbar -> a hbar, m -> b m
        let q = OscillatorParams::new(a * hbar, b * mass, omega, mu * b * b / a).unwrap();
        let (rp, rq) = (p.reduce_units().reduced, q.reduce_units().reduced);
        prop_assert!((rp.mu / rq.mu - 1.0).abs() < 1e-13);

        let wt = 1.7;
        let ep = expand(&rp, wt, 6).unwrap();
        let eq = expand(&rq, wt, 6).unwrap();
        for (x, y) in ep.energies().iter().zip(eq.energies()) {
            prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(1e-12), "{} vs {}", x, y);
        }

        let (phys_p, _, _) = optimize_physical(&p, 3).unwrap();
        let (phys_q, _, _) = optimize_physical(&q, 3).unwrap();
        prop_assert!((phys_q / phys_p / a - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expansion_scales_with_frequency(omega in 0.3f64..3.0, mu in 0.0f64..50.0, s in 0.25f64..4.0, k in 1usize..=8) {
        let wt = 1.4 * omega;
        let e = expand(&reduced(omega, mu), wt, k).unwrap();
        let scaled = expand(&reduced(s * omega, s.powi(3) * mu), s * wt, k).unwrap();
        for (x, y) in e.energies().iter().zip(scaled.energies()) {
            prop_assert!((y - s * x).abs() <= 1e-10 * (s * x).abs().max(1e-12));
        }
    }
}

#[test]
fn alpha0_improves_from_third_to_eighth_order() {
    let reference = ground_energy(&reduced(0.0, 4.0), 1e-9).unwrap();
    let a3 = strong_coupling_alpha0(3).unwrap().alpha0;
    let a8 = strong_coupling_alpha0(8).unwrap().alpha0;
    assert!((a8 - reference).abs() < (a3 - reference).abs());
    assert!(a3 > 0.0 && a8 > 0.0);
}

#[test]
fn quartic_term_dominates_the_tail() {
    for mu in [1.0, 20.0, 200.0] {
        let p = reduced(1.0, mu);
        for k in [3, 4] {
            let r = optimize(&p, k).unwrap();
            let scales = p.ansatz_scales_tilde(r.omega_tilde_star).unwrap();
            let e = expand(&p, r.omega_tilde_star, k).unwrap();
            let crossover = scales.beta / scales.gamma;
            for i in 0..=20 {
                let x = crossover * (25.0 + 25.0 * i as f64 / 20.0);
                let ratio = log_abs_psi(&e, &scales, x) / (-scales.gamma * x.powi(3));
                assert!((ratio - 1.0).abs() <= 0.05, "mu={mu} K={k} x={x}: ratio {ratio}");
            }
        }
    }
}

#[test]
fn strong_coupling_profiles_improve_with_order() {
    let p = reduced(1.0, 200.0);
    let (_, exact) = ground_wavefunction_reduced(&p, &SolverConfig::with_tol(1e-8)).unwrap();
    let (_, k3) = pms_profile(&p, 3, exact.grid()).unwrap();
    let (_, k4) = pms_profile(&p, 4, exact.grid()).unwrap();
    let c3 = compare(&k3, &exact).unwrap();
    let c4 = compare(&k4, &exact).unwrap();
    assert!(c4.overlap > c3.overlap, "{} vs {}", c4.overlap, c3.overlap);
    assert!(c3.overlap < 1.0 + 1e-9 && c4.overlap < 1.0 + 1e-9);
}

#[test]
fn profiles_flat_at_origin() {
    let p = reduced(1.0, 200.0);
    for k in [3, 4] {
        let r = optimize(&p, k).unwrap();
        let scales = p.ansatz_scales_tilde(r.omega_tilde_star).unwrap();
        let grid = profile_grid(&expand(&p, r.omega_tilde_star, k).unwrap(), &scales, 2001);
        let (_, prof) = pms_profile(&p, k, &grid).unwrap();
        let slope = prof.slope_at_origin().unwrap();
        assert!(slope.abs() <= 1e-6, "K={k}: {slope}");
    }
}
