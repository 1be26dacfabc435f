use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use spinwork::bath_kernels::{KernelSet, Preparation, SpectralDensity};
use spinwork::pulse_algebra::{coefficients, compose, dagger, mat_mul, pi_pulse, Mat2, PulseUnitary};
use spinwork::thermodynamics::checked_efficiency;
use spinwork::work_engine::{
    initial_sz, work_echo, work_echo_finite_t, work_first_pulse, work_two_pulse, EchoInputs, SystemConfig,
    WorkBreakdown,
};

fn system(gamma: f64, cutoff: f64, temp: f64, eps: f64, sz0: f64) -> SystemConfig {
    let k = KernelSet::new(SpectralDensity::ohmic(gamma, cutoff).unwrap(), temp).unwrap();
    SystemConfig::new(k, eps, sz0).unwrap()
}

fn pulse() -> impl Strategy<Value = PulseUnitary> {
    (-PI..PI, -PI..PI, 0.0..PI).prop_map(|(phi, psi, theta)| PulseUnitary::from_euler(phi, psi, theta))
}

fn consistent(b: &WorkBreakdown) -> bool {
    let sum: f64 = b.per_pulse.iter().sum();
    let scale = b.per_pulse.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    (sum - b.total).abs() <= 1e-14 * scale && (b.spin_part + b.bath_int_part - b.total).abs() <= 1e-14 * scale
}

// Bare spin, H = (ε/2)σ_z: energy change across each pulse of a schedule.
fn spin_works(eps: f64, sz0: f64, pulses: &[PulseUnitary], waits: &[f64]) -> Vec<f64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let zero = c(0.0);
    let mut rho: Mat2 = [[c(0.5 * (1.0 + sz0)), zero], [zero, c(0.5 * (1.0 - sz0))]];
    let energy = |r: &Mat2| 0.5 * eps * (r[0][0] - r[1][1]).re;
    let mut out = Vec::new();
    for (i, p) in pulses.iter().enumerate() {
        if i > 0 {
            let t = waits[i - 1];
            let u = [[Complex64::from_polar(1.0, -0.5 * eps * t), zero], [zero, Complex64::from_polar(1.0, 0.5 * eps * t)]];
            rho = mat_mul(&mat_mul(&u, &rho), &dagger(&u));
        }
        let before = energy(&rho);
        rho = mat_mul(&mat_mul(&p.matrix(), &rho), &dagger(&p.matrix()));
        out.push(energy(&rho) - before);
    }
    out
}

#[test]
fn long_delay_limit() {
    // Coherence gone and G(τ) → G∞ up to 1/τ²: W → W₁ + ε(b − 1)a·sz0/2 + (1 − b)G∞/2.
    let sys = system(1.0, 1.0, 1.0, 0.7, -0.6);
    let p1 = coefficients(&PulseUnitary::from_euler(0.3, -1.2, 1.1)).unwrap();
    let p2 = coefficients(&PulseUnitary::from_euler(2.0, 0.4, 0.5)).unwrap();
    let (a, b) = (p1.zz(), p2.zz());
    let g = sys.kernels.g_inf();
    let w1 = (1.0 - a) * 0.5 * (g - 0.7 * -0.6);
    let expected = w1 + 0.5 * 0.7 * (b - 1.0) * a * -0.6 + 0.5 * (1.0 - b) * g;
    let w = work_two_pulse(&sys, &p1, &p2, 1e7, Preparation::Ergodic).unwrap();
    assert!((w.total - expected).abs() < 1e-10, "{} vs {expected}", w.total);
}

#[test]
fn decoupled_bath_has_no_normalized_work() {
    let sys = system(0.0, 1.0, 1.0, 1.0, -0.5);
    let p = coefficients(&pi_pulse()).unwrap();
    let w = work_two_pulse(&sys, &p, &p, 1.0, Preparation::Ergodic).unwrap();
    assert!(w.w.is_none());
    assert_eq!(w.bath_int_part, 0.0);
}

#[test]
fn bad_delays_and_preparations() {
    let sys = system(1.0, 1.0, 1.0, 1.0, -0.5);
    let id = coefficients(&PulseUnitary::identity()).unwrap();
    assert!(work_two_pulse(&sys, &id, &id, 0.0, Preparation::Ergodic).is_err());
    assert!(work_two_pulse(&sys, &id, &id, f64::INFINITY, Preparation::Ergodic).is_err());
    assert!(work_two_pulse(&sys, &id, &id, 1.0, Preparation::Finite(-1.0)).is_err());
    assert!(work_echo_finite_t(&sys.kernels, &EchoInputs::single_spin(&sys), &id, &id, 1.0, f64::NAN).is_err());
    assert!(SystemConfig::new(sys.kernels.clone(), 0.0, -0.5).is_err());
    assert!(SystemConfig::new(sys.kernels.clone(), 1.0, -1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn merge_limit(p in pulse(), q in pulse(), gamma in 0.0f64..2.0, temp in 0.0f64..5.0, eps in 0.01f64..3.0, sz0 in -1.0f64..0.0) {
        // τ → 0⁺: the two pulses act as their composition. The gap closes linearly in τ,
        // with a slope set by ε, K(0) and G∞.
        let sys = system(gamma, 1.0, temp, eps, sz0);
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let merged = work_first_pulse(&sys, &coefficients(&compose(&p, &q)).unwrap(), Preparation::Ergodic).unwrap();
        let gap = |tau: f64| work_two_pulse(&sys, &c1, &c2, tau, Preparation::Ergodic).unwrap().total - merged;
        let scale = 1.0 + eps * (1.0 + eps) + sys.kernels.noise_kernel(0.0) + sys.kernels.g_inf();
        prop_assert!(gap(1e-9).abs() <= 1e-8 * scale, "gap {:e}", gap(1e-9));
        let (slope6, slope7) = (gap(1e-6) / 1e-6, gap(1e-7) / 1e-7);
        prop_assert!((slope6 - slope7).abs() <= 1e-4 * scale, "slopes {slope6} {slope7}");
    }

    #[test]
    fn bare_spin_matches_direct_evolution(p in pulse(), q in pulse(), eps in 0.01f64..3.0, sz0 in -1.0f64..0.0, tau in 1e-3f64..20.0) {
        let sys = system(0.0, 1.0, 1.0, eps, sz0);
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let w = work_two_pulse(&sys, &c1, &c2, tau, Preparation::Ergodic).unwrap();
        let direct = spin_works(eps, sz0, &[p, q], &[tau]);
        prop_assert!((w.per_pulse[0] - direct[0]).abs() < 1e-13);
        prop_assert!((w.per_pulse[1] - direct[1]).abs() < 1e-12);
        prop_assert!(w.bath_int_part.abs() < 1e-15);

        let inputs = EchoInputs::single_spin(&sys);
        let e = work_echo(&sys.kernels, &inputs, &c1, &c2, tau).unwrap();
        let direct = spin_works(eps, sz0, &[p, pi_pulse(), q], &[tau, tau]);
        for i in 0..3 {
            prop_assert!((e.per_pulse[i] - direct[i]).abs() < 1e-12, "pulse {i}: {} vs {}", e.per_pulse[i], direct[i]);
        }
    }

    #[test]
    fn thomson_at_equal_temperatures(p in pulse(), q in pulse(), gamma in 0.0f64..3.0, temp in 0.01f64..10.0, eps in 0.01f64..3.0, tau in 1e-3f64..50.0) {
        // A cycle on a system in equilibrium at one temperature cannot deliver work.
        let k = KernelSet::new(SpectralDensity::ohmic(gamma, 1.0).unwrap(), temp).unwrap();
        let sys = SystemConfig::with_spin_temperature(k, eps, temp).unwrap();
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let w = work_two_pulse(&sys, &c1, &c2, tau, Preparation::Ergodic).unwrap();
        prop_assert!(w.total >= -1e-12, "W = {}", w.total);
        prop_assert!(checked_efficiency(&w, temp, temp).is_ok());
    }

    #[test]
    fn bounds_hold_for_two_temperature_states(p in pulse(), q in pulse(), gamma in 0.0f64..3.0, temp in 0.01f64..10.0, ts in 0.01f64..10.0, eps in 0.01f64..3.0, tau in 1e-3f64..50.0) {
        let k = KernelSet::new(SpectralDensity::ohmic(gamma, 1.0).unwrap(), temp).unwrap();
        let sys = SystemConfig::with_spin_temperature(k, eps, ts).unwrap();
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let w = work_two_pulse(&sys, &c1, &c2, tau, Preparation::Ergodic).unwrap();
        prop_assert!(consistent(&w));
        prop_assert!(checked_efficiency(&w, temp, ts).is_ok());
    }

    #[test]
    fn first_pulse_costs_work(p in pulse(), gamma in 0.0f64..3.0, temp in 0.0f64..10.0, eps in 0.01f64..3.0, sz0 in -1.0f64..0.0) {
        let sys = system(gamma, 1.0, temp, eps, sz0);
        let c = coefficients(&p).unwrap();
        let w = work_first_pulse(&sys, &c, Preparation::Ergodic).unwrap();
        prop_assert!(w >= 0.0);
        if c.zz() < 1.0 - 1e-9 && (gamma > 0.0 || sz0 < 0.0) {
            prop_assert!(w > 0.0);
        }
    }

    #[test]
    fn energy_scaling(p in pulse(), q in pulse(), gamma in 0.01f64..2.0, temp in 0.01f64..5.0, eps in 0.01f64..3.0, sz0 in -1.0f64..0.0, tau in 0.01f64..20.0, s in 0.1f64..10.0) {
        // Γ, T, ε → sΓ, sT, sε and τ → τ/s scale every energy by s.
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let a = work_two_pulse(&system(gamma, 1.0, temp, eps, sz0), &c1, &c2, tau, Preparation::Ergodic).unwrap();
        let b = work_two_pulse(&system(gamma, s, s * temp, s * eps, sz0), &c1, &c2, tau / s, Preparation::Ergodic).unwrap();
        prop_assert!((b.total - s * a.total).abs() <= 1e-10 * s * (1.0 + a.total.abs()));
        prop_assert!((b.w.unwrap() - a.w.unwrap()).abs() <= 1e-10 * a.w.unwrap().abs().max(1.0));
    }

    #[test]
    fn long_preparation_approaches_ergodic(p in pulse(), q in pulse(), gamma in 0.01f64..2.0, temp in 0.01f64..5.0, eps in 0.01f64..3.0, sz0 in -1.0f64..0.0, tau in 0.01f64..20.0) {
        let sys = system(gamma, 1.0, temp, eps, sz0);
        let (c1, c2) = (coefficients(&p).unwrap(), coefficients(&q).unwrap());
        let erg = work_two_pulse(&sys, &c1, &c2, tau, Preparation::Ergodic).unwrap();
        let fin = work_two_pulse(&sys, &c1, &c2, tau, Preparation::Finite(1e7)).unwrap();
        prop_assert!((erg.total - fin.total).abs() <= 1e-8 * (1.0 + gamma));
        let inputs = EchoInputs::single_spin(&sys);
        let erg = work_echo(&sys.kernels, &inputs, &c1, &c2, tau).unwrap();
        let fin = work_echo_finite_t(&sys.kernels, &inputs, &c1, &c2, tau, 1e7).unwrap();
        prop_assert!((erg.total - fin.total).abs() <= 1e-8 * (1.0 + gamma));
        prop_assert!(consistent(&erg) && consistent(&fin));
    }

    #[test]
    fn spin_state_round_trip(eps in 0.01f64..5.0, ts in 0.01f64..100.0) {
        // T_S = ε/(2 atanh(−sz0)) loses digits as |sz0| → 1.
        prop_assume!(eps / ts < 10.0);
        let k = KernelSet::new(SpectralDensity::ohmic(1.0, 1.0).unwrap(), 1.0).unwrap();
        let sys = SystemConfig::with_spin_temperature(k, eps, ts).unwrap();
        prop_assert!((sys.sz0 - initial_sz(eps, ts)).abs() == 0.0);
        prop_assert!((sys.spin_temperature() - ts).abs() <= 1e-8 * ts);
    }
}
