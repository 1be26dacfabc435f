//! Closed-form work for one, two and three (echo) ideal pulses.
//!
//! W < 0 means extraction. Each result splits into the spin-energy change
//! ΔH_S and the bath plus interaction change; the two always add up to the total.

use num_complex::Complex64;

use crate::bath_kernels::{KernelSet, Preparation};
use crate::error::{domain, invalid, Result};
use crate::pulse_algebra::{PulseCoefficients, MINUS, PLUS, Z};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// ⟨σ_z⟩ = −tanh(ε/(2T_S)); 0 at T_S = ∞, −1 at T_S = 0.
pub fn initial_sz(spin_gap: f64, spin_temperature: f64) -> f64 {
    if spin_temperature == 0.0 {
        return -spin_gap.signum();
    }
    -(0.5 * spin_gap / spin_temperature).tanh()
}

/// Inverse of `initial_sz`: T_S = ε/(2·atanh(−sz0)).
pub fn spin_temperature_from_sz(spin_gap: f64, sz0: f64) -> f64 {
    if sz0 == 0.0 {
        f64::INFINITY
    } else {
        0.5 * spin_gap / (-sz0).atanh()
    }
}

/// (⟨e^{iχσ_z}⟩, ⟨e^{iχσ_z}σ_z⟩) on a diagonal spin state with ⟨σ_z⟩ = sz0.
pub fn pauli_phase_averages(chi: f64, sz0: f64) -> (Complex64, Complex64) {
    let (s, c) = chi.sin_cos();
    (Complex64::new(c, sz0 * s), Complex64::new(sz0 * c, s))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub spin_gap: f64,
    pub sz0: f64,
    pub kernels: KernelSet,
}

impl SystemConfig {
    pub fn new(kernels: KernelSet, spin_gap: f64, sz0: f64) -> Result<Self> {
        if !(spin_gap > 0.0) || !spin_gap.is_finite() {
            return Err(invalid(format!("spin gap must be finite and > 0, got {spin_gap}")));
        }
        if !(-1.0..=1.0).contains(&sz0) {
            return Err(invalid(format!("initial sz must lie in [-1, 1], got {sz0}")));
        }
        Ok(SystemConfig { spin_gap, sz0, kernels })
    }

    pub fn with_spin_temperature(kernels: KernelSet, spin_gap: f64, spin_temperature: f64) -> Result<Self> {
        if !(spin_temperature >= 0.0) {
            return Err(invalid(format!("spin temperature must be >= 0, got {spin_temperature}")));
        }
        Self::new(kernels, spin_gap, initial_sz(spin_gap, spin_temperature))
    }

    pub fn bath_temperature(&self) -> f64 {
        self.kernels.temperature()
    }

    pub fn spin_temperature(&self) -> f64 {
        spin_temperature_from_sz(self.spin_gap, self.sz0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkBreakdown {
    pub per_pulse: Vec<f64>,
    /// ΔH_S.
    pub spin_part: f64,
    /// ΔH_I + ΔH_B.
    pub bath_int_part: f64,
    pub total: f64,
    /// 2W/G∞; `None` for a decoupled bath.
    pub w: Option<f64>,
}

impl WorkBreakdown {
    fn from_parts(per_pulse: Vec<f64>, spin_part: f64, g_inf: f64) -> Self {
        let total: f64 = per_pulse.iter().sum();
        WorkBreakdown {
            per_pulse,
            spin_part,
            bath_int_part: total - spin_part,
            total,
            w: (g_inf > 0.0).then(|| 2.0 * total / g_inf),
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(domain(format!("tau must be finite and > 0, got {tau}")));
    }
    Ok(())
}

/// W₁ = (1 − c_zz)(G_eff/2 − ε·sz0/2), with G_eff = G(t) or G∞.
pub fn work_first_pulse(cfg: &SystemConfig, p1: &PulseCoefficients, prep: Preparation) -> Result<f64> {
    let g_eff = cfg.kernels.g_after(prep.validate()?, 0.0);
    Ok((1.0 - p1.zz()) * (0.5 * g_eff - 0.5 * cfg.spin_gap * cfg.sz0))
}

/// Bath kernels entering the two-pulse work at one τ and preparation.
///
/// Independent of the spin gap, so one sample serves a whole disorder average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPulseKernelSample {
    pub tau: f64,
    pub xi: f64,
    pub xi_dot: f64,
    /// G(τ).
    pub g_tau: f64,
    /// G(t) or G∞.
    pub g_prep: f64,
    /// G(t + τ) or G∞.
    pub g_prep_tau: f64,
    /// χ(τ, t) or its ergodic limit.
    pub chi: f64,
    pub g_inf: f64,
}

impl TwoPulseKernelSample {
    pub fn new(kernels: &KernelSet, tau: f64, prep: Preparation) -> Result<Self> {
        check_tau(tau)?;
        let prep = prep.validate()?;
        Ok(TwoPulseKernelSample {
            tau,
            xi: kernels.xi(tau)?,
            xi_dot: kernels.xi_dot(tau)?,
            g_tau: kernels.backreaction_g(tau)?,
            g_prep: kernels.g_after(prep, 0.0),
            g_prep_tau: kernels.g_after(prep, tau),
            chi: kernels.chi2_at(tau, prep)?,
            g_inf: kernels.g_inf(),
        })
    }

    /// Two-pulse breakdown for spin gap ε and initial ⟨σ_z⟩ = sz0.
    pub fn assemble(&self, spin_gap: f64, sz0: f64, p1: &PulseCoefficients, p2: &PulseCoefficients) -> WorkBreakdown {
        let (a, b, s, om) = (p1.zz(), p2.zz(), sz0, spin_gap);
        let (avg_one, avg_sigma) = pauli_phase_averages(self.chi, s);
        let coherence = p1.get(PLUS, Z)
            * p2.get(Z, PLUS)
            * Complex64::from_polar((-self.xi).exp(), om * self.tau);

        let spin1 = -(1.0 - a) * 0.5 * om * s;
        let w1 = spin1 + (1.0 - a) * 0.5 * self.g_prep;

        let spin2 = 0.5 * om * (b - 1.0) * a * s + om * (coherence * avg_sigma).re;
        let bath2 = 0.5 * (1.0 - b) * ((1.0 - a) * self.g_tau + a * self.g_prep_tau)
            + (coherence * (I * self.xi_dot * avg_sigma + (self.g_tau - self.g_prep_tau) * avg_one)).re;

        WorkBreakdown::from_parts(vec![w1, spin2 + bath2], spin1 + spin2, self.g_inf)
    }
}

/// Two-pulse work: P1, free evolution for τ, P2.
pub fn work_two_pulse(
    cfg: &SystemConfig,
    p1: &PulseCoefficients,
    p2: &PulseCoefficients,
    tau: f64,
    prep: Preparation,
) -> Result<WorkBreakdown> {
    Ok(TwoPulseKernelSample::new(&cfg.kernels, tau, prep)?.assemble(cfg.spin_gap, cfg.sz0, p1, p2))
}

/// Spin inputs of the echo formulas: mean initial energy E, mean magnetization m and
/// the frequency Ω₀ multiplying the coherent phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoInputs {
    pub energy: f64,
    pub magnetization: f64,
    pub omega0: f64,
}

impl EchoInputs {
    /// E = ε·sz0/2, m = sz0, Ω₀ = ε.
    pub fn single_spin(cfg: &SystemConfig) -> Self {
        EchoInputs { energy: 0.5 * cfg.spin_gap * cfg.sz0, magnetization: cfg.sz0, omega0: cfg.spin_gap }
    }
}

/// Echo sequence P1, τ, π-pulse, τ, P2, ergodic preparation.
pub fn work_echo(
    kernels: &KernelSet,
    inputs: &EchoInputs,
    p1: &PulseCoefficients,
    p2: &PulseCoefficients,
    tau: f64,
) -> Result<WorkBreakdown> {
    echo(kernels, inputs, p1, p2, tau, Preparation::Ergodic)
}

/// Echo sequence after a finite preparation time t from a factorized state.
pub fn work_echo_finite_t(
    kernels: &KernelSet,
    inputs: &EchoInputs,
    p1: &PulseCoefficients,
    p2: &PulseCoefficients,
    tau: f64,
    t: f64,
) -> Result<WorkBreakdown> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("preparation time must be finite and >= 0, got {t}")));
    }
    echo(kernels, inputs, p1, p2, tau, Preparation::Finite(t))
}

fn echo(
    kernels: &KernelSet,
    inputs: &EchoInputs,
    p1: &PulseCoefficients,
    p2: &PulseCoefficients,
    tau: f64,
    prep: Preparation,
) -> Result<WorkBreakdown> {
    check_tau(tau)?;
    let (a, b) = (p1.zz(), p2.zz());
    let (e, m, om) = (inputs.energy, inputs.magnetization, inputs.omega0);

    let g_t = kernels.g_after(prep, 0.0);
    let g_t_tau = kernels.g_after(prep, tau);
    let g_t_2tau = kernels.g_after(prep, 2.0 * tau);
    let g_tau = kernels.backreaction_g(tau)?;
    let g_2tau = kernels.backreaction_g(2.0 * tau)?;
    let decay = (-4.0 * kernels.xi(tau)? + kernels.xi(2.0 * tau)?).exp();
    let rate = 2.0 * kernels.xi_dot(tau)? - kernels.xi_dot(2.0 * tau)?;
    let chi3 = kernels.chi3_at(tau, prep)?;
    let (sin3, cos3) = chi3.sin_cos();
    let coherence = p2.get(Z, PLUS) * p1.get(MINUS, Z) * decay;

    let spin1 = -(1.0 - a) * e;
    let w1 = spin1 + 0.5 * (1.0 - a) * g_t;

    let spin_pi = -2.0 * e * a;
    let w_pi = spin_pi + g_tau - a * (g_tau - g_t_tau);

    let spin2 = -(b - 1.0) * a * e + (coherence * Complex64::new(2.0 * e * cos3, -om * sin3)).re;
    let drift = g_2tau - g_t_2tau;
    let bath2 = 0.5 * (b - 1.0) * (-drift * a - 2.0 * g_tau + g_2tau)
        + (coherence
            * (I * rate * Complex64::new(m * cos3, -sin3) + drift * Complex64::new(cos3, -m * sin3)))
        .re;

    Ok(WorkBreakdown::from_parts(
        vec![w1, w_pi, spin2 + bath2],
        spin1 + spin_pi + spin2,
        kernels.g_inf(),
    ))
}
