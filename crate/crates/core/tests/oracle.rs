use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinwork::bath_kernels::{Mode, Preparation};
use spinwork::oracle::{
    annihilation, build_model, initial_state, number, pi_factor, pi_factor_trotter, random_pulse, run_sequence, verify,
    AnalyticWork, ClosedForm, InitialCondition, ModelSpec, Step, VerifyConfig,
};
use spinwork::pulse_algebra::{coefficients, pi_pulse, PulseCoefficients};
use spinwork::work_engine::{SystemConfig, TwoPulseKernelSample, WorkBreakdown};
use spinwork::{Error, Result};

fn spec(modes: Vec<Mode>, cutoffs: Option<Vec<usize>>) -> ModelSpec {
    let mut s = ModelSpec::new(modes, 0.8, 0.4, 0.6);
    s.fock_cutoffs = cutoffs;
    s
}

// e^{−iht} for a real symmetric h, by diagonalization.
fn propagator(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(h.clone());
    let q = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t)));
    &q * d * q.adjoint()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn quick(config: VerifyConfig) -> VerifyConfig {
    VerifyConfig { work_cases: 6, echo_cases: 4, correlator_cases: 6, trend: false, ..config }
}

#[test]
fn default_battery_passes() {
    let report = verify(&VerifyConfig::default(), &ClosedForm).unwrap();
    assert!(report.strict_passed(), "{}", report.render());
    for name in ["bookkeeping", "first-pulse", "two-pulse finite-t", "echo finite-t", "correlated vs ergodic", "pi trotter"] {
        let c = report.check(name).unwrap_or_else(|| panic!("missing check {name}"));
        assert!(c.cases > 0);
    }
    assert!(report.render().ends_with("all strict checks passed\n"));
}

// Negative control: the sign of the two-pulse phase χ flipped.
struct FlippedChi;

impl AnalyticWork for FlippedChi {
    fn two_pulse(
        &self,
        cfg: &SystemConfig,
        p1: &PulseCoefficients,
        p2: &PulseCoefficients,
        tau: f64,
        prep: Preparation,
    ) -> Result<WorkBreakdown> {
        let mut s = TwoPulseKernelSample::new(&cfg.kernels, tau, prep)?;
        s.chi = -s.chi;
        Ok(s.assemble(cfg.spin_gap, cfg.sz0, p1, p2))
    }
}

// Negative control: first pulse without the bath backreaction.
struct NoBackreaction;

impl AnalyticWork for NoBackreaction {
    fn first_pulse(&self, cfg: &SystemConfig, p1: &PulseCoefficients, _prep: Preparation) -> Result<f64> {
        Ok(-(1.0 - p1.zz()) * 0.5 * cfg.spin_gap * cfg.sz0)
    }
}

#[test]
fn battery_catches_wrong_formulas() {
    let report = verify(&quick(VerifyConfig::default()), &FlippedChi).unwrap();
    assert!(!report.strict_passed());
    let failed: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"two-pulse finite-t"), "{failed:?}");
    assert!(failed.contains(&"correlated vs ergodic"), "{failed:?}");
    assert!(!failed.contains(&"first-pulse"));

    let report = verify(&quick(VerifyConfig::default()), &NoBackreaction).unwrap();
    let failed: Vec<&str> = report.failures().iter().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, vec!["first-pulse"]);
}

#[test]
fn decoupled_modes_pass() {
    let config = VerifyConfig {
        modes: vec![Mode { g: 0.0, omega: 1.0 }, Mode { g: 0.0, omega: 2.0 }],
        ..quick(VerifyConfig::default())
    };
    let report = verify(&config, &ClosedForm).unwrap();
    assert!(report.strict_passed(), "{}", report.render());
}

#[test]
fn bad_models_are_rejected() {
    let m = vec![Mode { g: 0.3, omega: 1.0 }];
    assert!(matches!(build_model(&spec(m.clone(), Some(vec![2]))), Err(Error::CutoffTooSmall(_))));
    assert!(matches!(build_model(&spec(m.clone(), Some(vec![30, 30]))), Err(Error::DimensionMismatch(_))));
    assert!(build_model(&spec(vec![], None)).is_err());
    assert!(build_model(&spec(vec![Mode { g: 0.3, omega: -1.0 }], None)).is_err());
    let mut big = spec(vec![Mode { g: 0.3, omega: 1.0 }; 4], Some(vec![40; 4]));
    big.dimension_cap = 1000;
    assert!(build_model(&big).is_err());
}

#[test]
fn polaron_shift_of_the_spectrum() {
    // h_s = ω a†a ± (g/2)(a + a†) is a displaced oscillator: levels ωn − g²/(4ω).
    let (g, w) = (0.6, 1.3);
    let model = build_model(&spec(vec![Mode { g, omega: w }], Some(vec![60]))).unwrap();
    for s in 0..2 {
        let spin = if s == 0 { 0.4 } else { -0.4 };
        let levels = model.block_spectrum(s);
        for n in 0..10 {
            let exact = spin + w * n as f64 - g * g / (4.0 * w);
            assert!((levels[n] - exact).abs() < 1e-10, "block {s} level {n}: {} vs {exact}", levels[n]);
        }
    }
}

#[test]
fn correlated_state_is_the_dense_gibbs_form() {
    // ρ ∝ exp[−H_S/T_S − (H_B + H_I)/T] with H_S = (ε/2)σ_z.
    let model = build_model(&spec(vec![Mode { g: 0.4, omega: 1.0 }, Mode { g: 0.3, omega: 1.7 }], None)).unwrap();
    let h = model.dense_hamiltonian();
    let n = h.nrows();
    let nb = n / 2;
    let mut hs = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        hs[(i, i)] = if i < nb { 0.4 } else { -0.4 };
    }
    let exponent = -(&hs / 0.6) - (&h - &hs) / 0.4;
    let eig = SymmetricEigen::new(exponent);
    let top = eig.eigenvalues.max();
    let w = eig.eigenvalues.map(|l| (l - top).exp());
    let rho = &eig.eigenvectors * DMatrix::from_diagonal(&w) * eig.eigenvectors.transpose();
    let rho = (&rho / rho.trace()).map(|x| Complex64::new(x, 0.0));

    let state = initial_state(&model, InitialCondition::Correlated).unwrap();
    assert!(max_abs(&(state.to_dense() - rho)) < 1e-12);
}

#[test]
fn factorized_evolution_matches_dense_propagation() {
    let modes = vec![Mode { g: 0.5, omega: 1.0 }, Mode { g: 0.3, omega: 2.1 }];
    let model = build_model(&spec(modes, Some(vec![16, 10]))).unwrap();
    let h = model.dense_hamiltonian();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (p1, p2) = (random_pulse(&mut rng), random_pulse(&mut rng));
    let state = initial_state(&model, InitialCondition::Factorized).unwrap();
    let schedule = [
        Step { wait: 0.7, pulse: p1 },
        Step { wait: 1.3, pulse: pi_pulse() },
        Step { wait: 0.4, pulse: p2 },
    ];
    let out = run_sequence(&model, &state, &schedule).unwrap();

    let nb = h.nrows() / 2;
    let lift = |u: [[Complex64; 2]; 2]| {
        let mut m = DMatrix::from_element(2 * nb, 2 * nb, Complex64::new(0.0, 0.0));
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..nb {
                    m[(a * nb + k, b * nb + k)] = u[a][b];
                }
            }
        }
        m
    };
    let hc = h.map(|x| Complex64::new(x, 0.0));
    let energy = |r: &DMatrix<Complex64>| (r * &hc).trace().re;
    let mut rho = state.to_dense();
    for (i, step) in schedule.iter().enumerate() {
        let u = propagator(&h, step.wait);
        rho = &u * rho * u.adjoint();
        let before = energy(&rho);
        let p = lift(step.pulse.matrix());
        rho = &p * rho * p.adjoint();
        assert!((energy(&rho) - before - out.works[i]).abs() < 1e-12);
    }
    assert!(max_abs(&(out.state.to_dense() - &rho)) < 1e-12);

    let inv = out.state.invariants();
    assert!(inv.trace_error < 1e-12);
    assert!(inv.hermiticity_error < 1e-12);
    assert!(inv.min_eigenvalue > -1e-12);
    assert!((out.works.iter().sum::<f64>() - (out.final_energy - out.initial_energy)).abs() < 1e-12);
}

#[test]
fn magnus_factor_matches_interaction_picture() {
    // T exp(±i∫η) = e^{iH_B t₂} e^{−i(H_B ∓ X)(t₂ − t₁)} e^{−iH_B t₁}, X = g(a + a†).
    let (g, w) = (0.5, 1.2);
    let levels = 40;
    let model = build_model(&spec(vec![Mode { g, omega: w }], Some(vec![levels]))).unwrap();
    let space = &model.modes[0];
    let a = annihilation(levels);
    let x = (&a + a.transpose()) * g;
    let hb = number(levels) * w;
    for sign in [1i8, -1] {
        for (t1, t2) in [(0.0, 1.0), (0.4, 2.9), (1.5, 1.7)] {
            let exact = propagator(&hb, -t2) * propagator(&(&hb - &x * f64::from(sign)), t2 - t1) * propagator(&hb, t1);
            let magnus = pi_factor(space, t1, t2, sign);
            // Compare on low Fock levels, far from the truncation edge.
            let k = 12;
            let diff = (magnus.view((0, 0), (k, k)) - exact.view((0, 0), (k, k))).map(|z| z.norm()).max();
            assert!(diff < 1e-10, "sign {sign}, [{t1}, {t2}]: {diff:.3e}");
        }
    }
    let exact = propagator(&hb, -2.0) * propagator(&(&hb - &x), 1.6) * propagator(&hb, 0.4);
    let trotter = pi_factor_trotter(space, 0.4, 2.0, 1, 200);
    let diff = (trotter.view((0, 0), (12, 12)) - exact.view((0, 0), (12, 12))).map(|z| z.norm()).max();
    assert!(diff < 1e-4, "trotter {diff:.3e}");
    // Vanishing coupling leaves the identity.
    let tiny = build_model(&spec(vec![Mode { g: 1e-4, omega: w }], Some(vec![20]))).unwrap();
    let f = pi_factor(&tiny.modes[0], 0.0, 2.0 * PI / w, 1);
    assert!((f[(0, 0)] - 1.0).norm() < 1e-6);
}

#[test]
fn coefficients_of_random_pulses_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p = random_pulse(&mut rng);
        assert!(coefficients(&p).is_ok());
    }
}
