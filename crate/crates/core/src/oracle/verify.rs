//! Battery comparing the closed-form work and correlator expressions with the simulator.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::correlator::{pi_correlator, pi_factor, pi_factor_trotter, CorrelatorItem};
use super::model::{build_model, FiniteBathModel, ModelSpec};
use super::state::{initial_state, run_sequence, InitialCondition, Step};
use crate::bath_kernels::{KernelSet, Mode, Preparation, SpectralDensity};
use crate::error::Result;
use crate::pulse_algebra::{coefficients, pi_pulse, PulseCoefficients, PulseUnitary};
use crate::work_engine::{
    work_echo, work_echo_finite_t, work_first_pulse, work_two_pulse, EchoInputs, SystemConfig, WorkBreakdown,
};

/// Source of the closed-form values under test. The default methods are the
/// library's formulas; test fixtures override one to check that the battery notices.
pub trait AnalyticWork: Sync {
    fn first_pulse(&self, cfg: &SystemConfig, p1: &PulseCoefficients, prep: Preparation) -> Result<f64> {
        work_first_pulse(cfg, p1, prep)
    }

    fn two_pulse(
        &self,
        cfg: &SystemConfig,
        p1: &PulseCoefficients,
        p2: &PulseCoefficients,
        tau: f64,
        prep: Preparation,
    ) -> Result<WorkBreakdown> {
        work_two_pulse(cfg, p1, p2, tau, prep)
    }

    fn echo(
        &self,
        kernels: &KernelSet,
        inputs: &EchoInputs,
        p1: &PulseCoefficients,
        p2: &PulseCoefficients,
        tau: f64,
        prep: Preparation,
    ) -> Result<WorkBreakdown> {
        match prep {
            Preparation::Ergodic => work_echo(kernels, inputs, p1, p2, tau),
            Preparation::Finite(t) => work_echo_finite_t(kernels, inputs, p1, p2, tau, t),
        }
    }
}

/// The library's own closed forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl AnalyticWork for ClosedForm {}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub modes: Vec<Mode>,
    pub fock_cutoffs: Option<Vec<usize>>,
    pub bath_temperature: f64,
    pub spin_gap: f64,
    pub spin_temperature: f64,
    /// Tolerance of the two-pulse and correlator checks; the echo check uses 10×.
    pub tol: f64,
    pub work_cases: usize,
    pub echo_cases: usize,
    pub correlator_cases: usize,
    /// Run the factorized-versus-correlated trend over 1..=3 modes.
    pub trend: bool,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            modes: vec![
                Mode { g: 0.3, omega: 1.0 },
                Mode { g: 0.25, omega: 1.6 },
                Mode { g: 0.35, omega: 2.3 },
            ],
            fock_cutoffs: None,
            bath_temperature: 0.25,
            spin_gap: 0.8,
            spin_temperature: 0.6,
            tol: 1e-8,
            work_cases: 20,
            echo_cases: 10,
            correlator_cases: 20,
            trend: true,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// Strict checks decide the verdict; the others are reported only.
    pub strict: bool,
    pub passed: bool,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn strict_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.strict || c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.strict && !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = match (c.strict, c.passed) {
                (true, true) => "PASS",
                (true, false) => "FAIL",
                (false, true) => "ok  ",
                (false, false) => "warn",
            };
            let _ = writeln!(
                out,
                "{verdict} {:<28} cases={:<3} max_err={:.3e} tol={:.1e} {}",
                c.name, c.cases, c.max_error, c.tolerance, c.detail
            );
        }
        let _ = writeln!(out, "{}", if self.strict_passed() { "all strict checks passed" } else { "strict failures present" });
        out
    }
}

/// Uniformly drawn Euler angles.
pub fn random_pulse(rng: &mut impl Rng) -> PulseUnitary {
    PulseUnitary::from_euler(rng.random_range(-PI..PI), rng.random_range(-PI..PI), rng.random_range(0.0..FRAC_PI_2))
}

struct Setup {
    model: FiniteBathModel,
    kernels: KernelSet,
    cfg: SystemConfig,
}

fn setup(config: &VerifyConfig, modes: Vec<Mode>, cutoffs: Option<Vec<usize>>) -> Result<Setup> {
    let mut spec = ModelSpec::new(modes.clone(), config.spin_gap, config.bath_temperature, config.spin_temperature);
    spec.fock_cutoffs = cutoffs;
    let model = build_model(&spec)?;
    let kernels = KernelSet::new(SpectralDensity::discrete(modes)?, config.bath_temperature)?;
    let cfg = SystemConfig::new(kernels.clone(), config.spin_gap, model.sz0())?;
    Ok(Setup { model, kernels, cfg })
}

struct Tally {
    cases: usize,
    max_error: f64,
    worst: String,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, max_error: 0.0, worst: String::new() }
    }

    fn record(&mut self, err: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        if err > self.max_error || err.is_nan() {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
            self.worst = label();
        }
    }

    fn finish(self, name: &str, strict: bool, tolerance: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            strict,
            passed: self.max_error <= tolerance,
            cases: self.cases,
            max_error: self.max_error,
            tolerance,
            detail: if self.worst.is_empty() { String::new() } else { format!("worst: {}", self.worst) },
        }
    }
}

fn scaled_error(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs().max(1.0)
}

fn relative_error(measured: Complex64, expected: Complex64) -> f64 {
    (measured - expected).norm() / expected.norm().max(1e-300)
}

/// Runs the full battery. Configuration problems surface as errors; check
/// failures are listed in the report.
pub fn verify(config: &VerifyConfig, analytic: &dyn AnalyticWork) -> Result<VerifyReport> {
    let main = setup(config, config.modes.clone(), config.fock_cutoffs.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = VerifyReport::default();
    let factorized = initial_state(&main.model, InitialCondition::Factorized)?;

    // bookkeeping and single pulse
    let mut first = Tally::new();
    let mut books = Tally::new();
    for _ in 0..config.work_cases {
        let pulse = random_pulse(&mut rng);
        let t = rng.random_range(0.0..4.0);
        let out = run_sequence(&main.model, &factorized, &[Step { wait: t, pulse }])?;
        let expected = analytic.first_pulse(&main.cfg, &coefficients(&pulse)?, Preparation::Finite(t))?;
        first.record(scaled_error(out.works[0], expected), || format!("t={t:.4}"));
        let drift = (out.works.iter().sum::<f64>() - (out.final_energy - out.initial_energy)).abs();
        let evolved = factorized.evolve(&main.model, t)?;
        let sz_drift = (evolved.sigma_z() - factorized.sigma_z()).abs();
        let energy_drift = (evolved.energy(&main.model) - factorized.energy(&main.model)).abs();
        books.record(drift.max(sz_drift).max(energy_drift), || format!("t={t:.4}"));
    }
    report.checks.push(books.finish("bookkeeping", true, 1e-10));
    report.checks.push(first.finish("first-pulse", true, config.tol));

    let mut two = Tally::new();
    for _ in 0..config.work_cases {
        let (p1, p2) = (random_pulse(&mut rng), random_pulse(&mut rng));
        let t = rng.random_range(0.0..4.0);
        let tau = rng.random_range(0.05..3.0);
        let out = run_sequence(&main.model, &factorized, &[Step { wait: t, pulse: p1 }, Step { wait: tau, pulse: p2 }])?;
        let b = analytic.two_pulse(&main.cfg, &coefficients(&p1)?, &coefficients(&p2)?, tau, Preparation::Finite(t))?;
        let measured: f64 = out.works.iter().sum();
        let spin_measured = out.state.spin_energy(&main.model) - factorized.spin_energy(&main.model);
        let err = scaled_error(measured, b.total).max(scaled_error(spin_measured, b.spin_part));
        two.record(err, || format!("t={t:.4} tau={tau:.4}"));
    }
    report.checks.push(two.finish("two-pulse finite-t", true, config.tol));

    let echo_tol = 10.0 * config.tol;
    let mut echo = Tally::new();
    let inputs = EchoInputs::single_spin(&main.cfg);
    for _ in 0..config.echo_cases {
        let (p1, p2) = (random_pulse(&mut rng), random_pulse(&mut rng));
        let t = rng.random_range(0.0..4.0);
        let tau = rng.random_range(0.05..3.0);
        let schedule = [
            Step { wait: t, pulse: p1 },
            Step { wait: tau, pulse: pi_pulse() },
            Step { wait: tau, pulse: p2 },
        ];
        let out = run_sequence(&main.model, &factorized, &schedule)?;
        let b = analytic.echo(&main.kernels, &inputs, &coefficients(&p1)?, &coefficients(&p2)?, tau, Preparation::Finite(t))?;
        let measured: f64 = out.works.iter().sum();
        let err = (measured - b.total).abs() / b.total.abs().max(1e-6);
        echo.record(err, || format!("t={t:.4} tau={tau:.4}"));
    }
    report.checks.push(echo.finish("echo finite-t", true, echo_tol));

    report.checks.extend(correlator_checks(config, &mut rng)?);

    // Correlated start against the ergodic formulas.
    let correlated = initial_state(&main.model, InitialCondition::Correlated)?;
    let mut corr = Tally::new();
    for _ in 0..config.work_cases {
        let (p1, p2) = (random_pulse(&mut rng), random_pulse(&mut rng));
        let tau = rng.random_range(0.05..3.0);
        let out = run_sequence(&main.model, &correlated, &[Step { wait: 0.0, pulse: p1 }, Step { wait: tau, pulse: p2 }])?;
        let b = analytic.two_pulse(&main.cfg, &coefficients(&p1)?, &coefficients(&p2)?, tau, Preparation::Ergodic)?;
        corr.record(scaled_error(out.works.iter().sum(), b.total), || format!("tau={tau:.4}"));
    }
    report.checks.push(corr.finish("correlated vs ergodic", true, config.tol));

    if config.trend {
        report.checks.push(initial_condition_trend(config, &mut rng)?);
    }
    Ok(report)
}

fn correlator_checks(config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let modes: Vec<Mode> = config.modes.iter().take(2).copied().collect();
    let cutoffs = config.fock_cutoffs.as_ref().map(|c| c.iter().take(2).copied().collect());
    let s = setup(config, modes, cutoffs)?;
    let ks = &s.kernels;
    let xi = |t: f64| ks.xi(t);
    let xd = |t: f64| ks.xi_dot(t);
    let g = |t: f64| ks.backreaction_g(t);
    let f = |t: f64| ks.backreaction_f(t);
    let envelope = |t: f64| -> Result<Complex64> { Ok(Complex64::new(-xi(t)?, f(t)?).exp()) };

    let (mut single, mut before, mut after, mut pair) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for _ in 0..config.correlator_cases {
        let mut ts: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..4.0)).collect();
        ts.sort_by(f64::total_cmp);
        let [t1, t2, t3, t4] = [ts[0], ts[1], ts[2], ts[3]];
        let sign: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
        let sg = f64::from(sign);
        let label = || format!("t=({t1:.3},{t2:.3},{t3:.3},{t4:.3}) sign={sign}");
        let pi = CorrelatorItem::Pi { start: t1, end: t2, sign };
        let noise = CorrelatorItem::Noise { time: t3 };
        let env = envelope(t2 - t1)?;

        let measured = pi_correlator(&s.model, &[pi])?;
        single.record(relative_error(measured, env), label);

        // ⟨η(t₃) Π(t₁, t₂)⟩
        let bracket = Complex64::new(g(t3 - t1)? - g(t3 - t2)?, xd(t3 - t1)? - xd(t3 - t2)?);
        let measured = pi_correlator(&s.model, &[noise, pi])?;
        before.record(relative_error(measured, bracket * env * sg), label);

        // ⟨Π(t₁, t₂) η(t₃)⟩
        let bracket = Complex64::new(-(g(t3 - t1)? - g(t3 - t2)?), xd(t3 - t1)? - xd(t3 - t2)?);
        let measured = pi_correlator(&s.model, &[pi, noise])?;
        after.record(relative_error(measured, bracket * env * sg), label);

        // ⟨Π±(t₃, t₄) Π∓(t₁, t₂)⟩
        let re = -xi(t2 - t1)? - xi(t4 - t3)? - xi(t4 - t2)? + xi(t4 - t1)? + xi(t3 - t2)? - xi(t3 - t1)?;
        let im = f(t2 - t1)? + f(t4 - t3)? + f(t4 - t2)? - f(t4 - t1)? - f(t3 - t2)? + f(t3 - t1)?;
        let items = [
            CorrelatorItem::Pi { start: t3, end: t4, sign },
            CorrelatorItem::Pi { start: t1, end: t2, sign: -sign },
        ];
        let measured = pi_correlator(&s.model, &items)?;
        pair.record(relative_error(measured, Complex64::new(re, im).exp()), label);
    }

    // Magnus form against a midpoint product of short slices.
    let mut trotter = Tally::new();
    for space in &s.model.modes {
        let (a, b) = (0.3, 1.7);
        let exact = pi_factor(space, a, b, 1);
        let sliced = pi_factor_trotter(space, a, b, 1, 400);
        // compare on the low-lying levels, where truncation does not reach
        let keep = (space.levels / 2).max(1);
        let diff = (exact.view((0, 0), (keep, keep)) - sliced.view((0, 0), (keep, keep)))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        trotter.record(diff, || format!("omega={}", space.mode.omega));
    }

    let tol = config.tol;
    Ok(vec![
        single.finish("pi <P>", true, tol),
        before.finish("pi <eta P>", true, tol),
        after.finish("pi <P eta>", true, tol),
        pair.finish("pi <P P>", true, tol),
        trotter.finish("pi trotter", true, 1e-4),
    ])
}

/// Time-averaged gap between a factorized start at time t and the correlated start,
/// for ohmic discretizations with 1, 2 and 3 modes. Exact agreement needs a continuum,
/// so this is reported as a trend.
fn initial_condition_trend(config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let (p1, p2) = (random_pulse(rng), random_pulse(rng));
    let tau = 0.7;
    let mut gaps = Vec::new();
    for n in 1..=3 {
        let modes = match SpectralDensity::discretize_ohmic(0.05, 1.0, n)? {
            SpectralDensity::Discrete { modes } => modes,
            SpectralDensity::Ohmic { .. } => unreachable!("discretization yields modes"),
        };
        let s = setup(config, modes, None)?;
        let fact = initial_state(&s.model, InitialCondition::Factorized)?;
        let corr = initial_state(&s.model, InitialCondition::Correlated)?;
        let reference: f64 = run_sequence(&s.model, &corr, &[Step { wait: 0.0, pulse: p1 }, Step { wait: tau, pulse: p2 }])?
            .works
            .iter()
            .sum();
        let samples = 16;
        let mut gap = 0.0;
        for j in 0..samples {
            let t = 10.0 + 2.5 * j as f64;
            let w: f64 = run_sequence(&s.model, &fact, &[Step { wait: t, pulse: p1 }, Step { wait: tau, pulse: p2 }])?
                .works
                .iter()
                .sum();
            gap += (w - reference).abs() / samples as f64;
        }
        gaps.push(gap);
    }
    let shrinking = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(CheckResult {
        name: "factorized vs correlated".into(),
        strict: false,
        passed: shrinking,
        cases: gaps.len(),
        max_error: gaps.iter().copied().fold(0.0, f64::max),
        tolerance: f64::INFINITY,
        detail: format!(
            "mean gap by mode count: {}",
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    })
}
