//! Bath kernels: noise correlator K, decoherence exponent ξ and its rate,
//! backreaction functions G and F, and the pulse-sequence phase factors.
//!
//! Every kernel is written through the odd "residual"
//! `R(x) = Σ g² sin(ωx)/ω²` (ohmic: `γ·atan(Γx)`), using `F(x) = G∞·x − R(x)`.
//! Differences of F at shifted times then cancel their linear parts exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::gauss_laguerre;
use crate::special_functions::{digamma, log_gamma_modulus_drop, trigamma};

/// Returned as T₂ when the spin never decoheres.
pub const T2_CAP: f64 = 1e300;

/// One bath oscillator: coupling `g` and frequency `omega`, both frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub g: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    /// J(ω) = γ ω e^{−ω/Γ}.
    Ohmic { gamma: f64, cutoff: f64 },
    /// J(ω) = Σ g_k² δ(ω − ω_k).
    Discrete { modes: Vec<Mode> },
}

impl SpectralDensity {
    pub fn ohmic(gamma: f64, cutoff: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(invalid(format!("coupling gamma must be finite and >= 0, got {gamma}")));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(invalid(format!("cutoff must be finite and > 0, got {cutoff}")));
        }
        Ok(SpectralDensity::Ohmic { gamma, cutoff })
    }

    pub fn discrete(modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(invalid("discrete bath needs at least one mode"));
        }
        for m in &modes {
            if !(m.omega > 0.0) || !m.omega.is_finite() || !m.g.is_finite() {
                return Err(invalid(format!("mode needs finite g and omega > 0, got {m:?}")));
            }
        }
        Ok(SpectralDensity::Discrete { modes })
    }

    /// Gauss-Laguerre discretization of an ohmic density with `n` modes.
    ///
    /// Sums `Σ g_k² f(ω_k)` reproduce `∫ J(ω) f(ω) dω` with the rule's accuracy
    /// whenever `ω f(ω)` is smooth.
    pub fn discretize_ohmic(gamma: f64, cutoff: f64, n: usize) -> Result<Self> {
        Self::ohmic(gamma, cutoff)?;
        if n == 0 {
            return Err(invalid("discretization needs at least one mode"));
        }
        let rule = gauss_laguerre(n);
        let modes = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| Mode { g: cutoff * (gamma * w * x).sqrt(), omega: cutoff * x })
            .collect();
        Self::discrete(modes)
    }

    /// G∞ = Σ g²/ω; γΓ for the ohmic density.
    pub fn g_inf(&self) -> f64 {
        match self {
            SpectralDensity::Ohmic { gamma, cutoff } => gamma * cutoff,
            SpectralDensity::Discrete { modes } => modes.iter().map(|m| m.g * m.g / m.omega).sum(),
        }
    }
}

/// Preparation time before the first pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preparation {
    /// t → ∞: G(t + s) → G∞ and the oscillating residuals at t + s drop out.
    Ergodic,
    /// Factorized start, first pulse after this finite time.
    Finite(f64),
}

impl Preparation {
    pub fn validate(self) -> Result<Self> {
        match self {
            Preparation::Finite(t) if !(t >= 0.0) || !t.is_finite() => {
                Err(domain(format!("preparation time must be finite and >= 0, got {t}")))
            }
            p => Ok(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayRegime {
    PowerLaw,
    Gaussian,
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRegimeReport {
    /// Regime governing the long-time tail.
    pub regime: DecayRegime,
    /// Regime before the tail sets in.
    pub short_time_regime: DecayRegime,
    /// Gaussian time scale when the short-time regime is gaussian.
    pub short_time_scale: Option<f64>,
    /// Exponential tail time; `T2_CAP` when `capped`.
    pub t2: f64,
    pub capped: bool,
    pub description: String,
}

/// Kernels of one spectral density at one bath temperature. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSet {
    spectral: SpectralDensity,
    temperature: f64,
}

fn coth_half(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        1.0 / (0.5 * omega / temperature).tanh()
    }
}

// x - atan(x), accurate for small x.
fn x_minus_atan(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        let mut term = x * x2;
        let mut sum = 0.0;
        for k in 0..10 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * term / (2 * k + 3) as f64;
            term *= x2;
        }
        sum
    } else {
        x - x.atan()
    }
}

// u - sin(u), accurate for small u.
fn u_minus_sin(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = 0.0;
        for k in 0..8 {
            sum += term;
            term *= -u2 / ((2 * k + 4) * (2 * k + 5)) as f64;
        }
        sum
    } else {
        u - u.sin()
    }
}

fn require_nonnegative(t: f64, what: &str) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("{what} must be finite and >= 0, got {t}")));
    }
    Ok(())
}

impl KernelSet {
    pub fn new(spectral: SpectralDensity, temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(invalid(format!("bath temperature must be finite and >= 0, got {temperature}")));
        }
        Ok(KernelSet { spectral, temperature })
    }

    pub fn spectral(&self) -> &SpectralDensity {
        &self.spectral
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn g_inf(&self) -> f64 {
        self.spectral.g_inf()
    }

    /// Symmetrized noise correlator K(t); even in t.
    pub fn noise_kernel(&self, t: f64) -> f64 {
        let t = t.abs();
        let temp = self.temperature;
        match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => {
                let x2 = (cutoff * t).powi(2);
                let vacuum = gamma * cutoff * cutoff * (1.0 - x2) / (1.0 + x2).powi(2);
                if temp == 0.0 {
                    return vacuum;
                }
                let z = Complex64::new(1.0 + temp / cutoff, temp * t);
                let thermal = trigamma(z).expect("argument has positive real part").re;
                vacuum + 2.0 * gamma * temp * temp * thermal
            }
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| m.g * m.g * coth_half(m.omega, temp) * (m.omega * t).cos())
                .sum(),
        }
    }

    /// Decoherence exponent ξ(t) = ∫₀ᵗ ds ∫₀ˢ du K(u).
    pub fn xi(&self, t: f64) -> Result<f64> {
        require_nonnegative(t, "time")?;
        let temp = self.temperature;
        Ok(match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => {
                let vacuum = 0.5 * gamma * ((cutoff * t).powi(2)).ln_1p();
                if temp == 0.0 {
                    vacuum
                } else {
                    vacuum + 2.0 * gamma * log_gamma_modulus_drop(1.0 + temp / cutoff, temp * t)?
                }
            }
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| {
                    let s = (0.5 * m.omega * t).sin();
                    2.0 * m.g * m.g * coth_half(m.omega, temp) * s * s / (m.omega * m.omega)
                })
                .sum(),
        })
    }

    /// ξ̇(t).
    pub fn xi_dot(&self, t: f64) -> Result<f64> {
        require_nonnegative(t, "time")?;
        let temp = self.temperature;
        Ok(match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => {
                let x = cutoff * t;
                let vacuum = gamma * cutoff * x / (1.0 + x * x);
                if temp == 0.0 {
                    vacuum
                } else {
                    let z = Complex64::new(1.0 + temp / cutoff, temp * t);
                    vacuum + 2.0 * gamma * temp * digamma(z)?.im
                }
            }
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| m.g * m.g * coth_half(m.omega, temp) * (m.omega * t).sin() / m.omega)
                .sum(),
        })
    }

    /// Backreaction G(t) = Σ g²(1 − cos ωt)/ω.
    pub fn backreaction_g(&self, t: f64) -> Result<f64> {
        require_nonnegative(t, "time")?;
        Ok(self.g_unchecked(t))
    }

    fn g_unchecked(&self, t: f64) -> f64 {
        match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => {
                let x2 = (cutoff * t).powi(2);
                gamma * cutoff * x2 / (1.0 + x2)
            }
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| {
                    let s = (0.5 * m.omega * t).sin();
                    2.0 * m.g * m.g * s * s / m.omega
                })
                .sum(),
        }
    }

    /// Backreaction F(t) = ∫₀ᵗ G.
    pub fn backreaction_f(&self, t: f64) -> Result<f64> {
        require_nonnegative(t, "time")?;
        Ok(match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => gamma * x_minus_atan(cutoff * t),
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| m.g * m.g * u_minus_sin(m.omega * t) / (m.omega * m.omega))
                .sum(),
        })
    }

    /// R(x) = G∞·x − F(x); odd, bounded for the ohmic density.
    pub fn residual(&self, x: f64) -> f64 {
        match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => gamma * (cutoff * x).atan(),
            SpectralDensity::Discrete { modes } => modes
                .iter()
                .map(|m| m.g * m.g * (m.omega * x).sin() / (m.omega * m.omega))
                .sum(),
        }
    }

    /// G(t + offset), or G∞ in the ergodic limit.
    pub fn g_after(&self, prep: Preparation, offset: f64) -> f64 {
        match prep {
            Preparation::Ergodic => self.g_inf(),
            Preparation::Finite(t) => self.g_unchecked(t + offset),
        }
    }

    /// Two-pulse phase χ(τ, t) = F(t) + F(τ) − F(t + τ).
    pub fn chi2_at(&self, tau: f64, prep: Preparation) -> Result<f64> {
        require_nonnegative(tau, "tau")?;
        let base = -self.residual(tau);
        Ok(match prep.validate()? {
            Preparation::Ergodic => base,
            Preparation::Finite(t) => base - self.residual(t) + self.residual(t + tau),
        })
    }

    /// Echo phase χ₃(τ, t) = 2F(τ) − F(2τ) − 2F(t+τ) + F(t) + F(t+2τ).
    pub fn chi3_at(&self, tau: f64, prep: Preparation) -> Result<f64> {
        require_nonnegative(tau, "tau")?;
        let base = -2.0 * self.residual(tau) + self.residual(2.0 * tau);
        Ok(match prep.validate()? {
            Preparation::Ergodic => base,
            Preparation::Finite(t) => {
                base + 2.0 * self.residual(t + tau) - self.residual(t) - self.residual(t + 2.0 * tau)
            }
        })
    }

    /// (g₂, χ₂) = (G∞ − G(τ), −R(τ)).
    pub fn g2_chi2(&self, tau: f64) -> Result<(f64, f64)> {
        require_nonnegative(tau, "tau")?;
        Ok((self.g_inf() - self.g_unchecked(tau), self.chi2_at(tau, Preparation::Ergodic)?))
    }

    /// (g₃, χ₃) = (G∞ − G(2τ), 2F(τ) − F(2τ)).
    pub fn g3_chi3(&self, tau: f64) -> Result<(f64, f64)> {
        require_nonnegative(tau, "tau")?;
        Ok((self.g_inf() - self.g_unchecked(2.0 * tau), self.chi3_at(tau, Preparation::Ergodic)?))
    }

    /// Decay regimes of e^{−ξ(t)} for the ohmic density.
    ///
    /// The tail rate is the exact asymptotic slope of ξ, lim ξ̇ = πγT, at every temperature.
    pub fn decay_regimes(&self) -> Result<DecayRegimeReport> {
        let (gamma, cutoff) = match &self.spectral {
            SpectralDensity::Ohmic { gamma, cutoff } => (*gamma, *cutoff),
            SpectralDensity::Discrete { .. } => {
                return Err(Error::UnsupportedSpectrum("decay regimes need an ohmic density".into()))
            }
        };
        let temp = self.temperature;
        if gamma == 0.0 || temp == 0.0 {
            let description = if gamma == 0.0 {
                "decoupled spin: no decay".to_string()
            } else {
                format!("zero temperature: power law (1 + Γ²t²)^(-{}/2), no exponential tail", gamma)
            };
            return Ok(DecayRegimeReport {
                regime: DecayRegime::PowerLaw,
                short_time_regime: DecayRegime::PowerLaw,
                short_time_scale: None,
                t2: T2_CAP,
                capped: true,
                description,
            });
        }
        let t2 = 1.0 / (PI * gamma * temp);
        let capped = !(t2 < T2_CAP);
        let t2 = t2.min(T2_CAP);
        if temp < cutoff {
            Ok(DecayRegimeReport {
                regime: DecayRegime::Exponential,
                short_time_regime: DecayRegime::PowerLaw,
                short_time_scale: None,
                t2,
                capped,
                description: format!(
                    "power law for t < 1/T = {:.6e}, exponential tail with T2 = 1/(pi gamma T) = {:.6e}",
                    1.0 / temp,
                    t2
                ),
            })
        } else {
            let scale = (1.0 / (gamma * temp * cutoff)).sqrt();
            Ok(DecayRegimeReport {
                regime: DecayRegime::Exponential,
                short_time_regime: DecayRegime::Gaussian,
                short_time_scale: Some(scale),
                t2,
                capped,
                description: format!(
                    "gaussian with scale {:.6e} for t < 1/cutoff, exponential tail with T2 = 1/(pi gamma T) = {:.6e}",
                    scale, t2
                ),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(gamma: f64, cutoff: f64, temp: f64) -> KernelSet {
        KernelSet::new(SpectralDensity::ohmic(gamma, cutoff).unwrap(), temp).unwrap()
    }

    #[test]
    fn vanish_at_zero() {
        let ks = ohmic(0.4, 1.3, 2.0);
        assert_eq!(ks.xi(0.0).unwrap(), 0.0);
        assert_eq!(ks.xi_dot(0.0).unwrap(), 0.0);
        assert_eq!(ks.backreaction_g(0.0).unwrap(), 0.0);
        assert_eq!(ks.backreaction_f(0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_times_rejected() {
        let ks = ohmic(0.4, 1.3, 2.0);
        assert!(matches!(ks.xi(-1.0), Err(Error::Domain(_))));
        assert!(matches!(ks.backreaction_g(-1.0), Err(Error::Domain(_))));
        assert!(matches!(ks.g2_chi2(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_temperature_forms() {
        let ks = ohmic(0.7, 2.0, 0.0);
        let t: f64 = 1.9;
        let expected = 0.35 * (1.0 + 4.0 * t * t).ln();
        assert!((ks.xi(t).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn g_limits() {
        let ks = ohmic(0.8, 2.5, 1.0);
        assert!((ks.backreaction_g(1.0 / 2.5).unwrap() - 0.5 * 0.8 * 2.5).abs() < 1e-15);
        assert!((ks.backreaction_g(1e9).unwrap() - 2.0).abs() < 1e-12);
        let (g2, chi2) = ks.g2_chi2(0.0).unwrap();
        assert_eq!((g2, chi2), (2.0, 0.0));
        let (_, chi_inf) = ks.g2_chi2(1e12).unwrap();
        assert!((chi_inf + 0.8 * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn single_mode_g_vanishes_after_a_period() {
        let ks = KernelSet::new(
            SpectralDensity::discrete(vec![Mode { g: 0.3, omega: 1.7 }]).unwrap(),
            0.5,
        )
        .unwrap();
        assert!(ks.backreaction_g(2.0 * PI / 1.7).unwrap().abs() < 1e-15);
    }

    #[test]
    fn chi3_two_forms_agree() {
        let ks = ohmic(0.1, 1.0, 3.0);
        let tau = 0.7;
        let f = |t: f64| ks.backreaction_f(t).unwrap();
        let direct = 2.0 * f(tau) - f(2.0 * tau);
        let (_, chi3) = ks.g3_chi3(tau).unwrap();
        let arctan_form = 0.1 * ((2.0 * tau).atan() - 2.0 * tau.atan());
        assert!((chi3 - arctan_form).abs() < 1e-15);
        assert!((direct - arctan_form).abs() < 1e-15);
    }

    #[test]
    fn decay_report_values() {
        let low = ohmic(1.0, 1.0, 0.01).decay_regimes().unwrap();
        assert!((low.t2 - 1.0 / (0.01 * PI)).abs() < 1e-9);
        assert_eq!(low.short_time_regime, DecayRegime::PowerLaw);
        let high = ohmic(1.0, 1.0, 100.0).decay_regimes().unwrap();
        assert!((high.t2 - 1.0 / (100.0 * PI)).abs() < 1e-15);
        assert_eq!(high.short_time_regime, DecayRegime::Gaussian);
        assert!((high.short_time_scale.unwrap() - 0.1).abs() < 1e-15);
        let free = ohmic(0.0, 1.0, 1.0).decay_regimes().unwrap();
        assert!(free.capped && free.t2 == T2_CAP);
        let discrete = KernelSet::new(SpectralDensity::discrete(vec![Mode { g: 1.0, omega: 1.0 }]).unwrap(), 1.0)
            .unwrap();
        assert!(matches!(discrete.decay_regimes(), Err(Error::UnsupportedSpectrum(_))));
    }
}
