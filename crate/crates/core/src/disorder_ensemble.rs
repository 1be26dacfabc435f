//! Gaussian frequency disorder: ensemble moments, T₂*, and disorder-averaged work.
//!
//! Averages are taken in Ω = Ω₀ + √(2d)·x, doubling the resolution until two
//! successive rules agree.

use std::f64::consts::PI;

use crate::bath_kernels::{KernelSet, Preparation};
use crate::error::{invalid, Error, Result};
use crate::pulse_algebra::PulseCoefficients;
use crate::quadrature::{gauss_hermite, gauss_legendre};
use crate::work_engine::{initial_sz, EchoInputs, TwoPulseKernelSample};

const START_NODES: usize = 64;
const MAX_HERMITE_NODES: usize = 256;
const PANEL_NODES: usize = 16;
const PANEL_HALF_RANGE: f64 = 10.0;
const START_PANELS: usize = 32;
const MAX_PANELS: usize = 1 << 16;
const REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderModel {
    pub omega0: f64,
    /// Variance d of Ω.
    pub variance: f64,
    pub spin_temperature: f64,
}

impl DisorderModel {
    pub fn new(omega0: f64, variance: f64, spin_temperature: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(invalid(format!("mean frequency must be finite, got {omega0}")));
        }
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(invalid(format!("disorder variance must be finite and >= 0, got {variance}")));
        }
        if !(spin_temperature > 0.0) {
            return Err(invalid(format!("spin temperature must be > 0, got {spin_temperature}")));
        }
        Ok(DisorderModel { omega0, variance, spin_temperature })
    }

    /// ⟨σ_z⟩ of a spin with gap Ω.
    pub fn sz_at(&self, omega: f64) -> f64 {
        initial_sz(omega, self.spin_temperature)
    }

    /// ∫ dΩ P(Ω) f(Ω), converged to 1e-10 of ∫ |f| P.
    ///
    /// Smooth integrands settle under Gauss-Hermite. Oscillating ones (phases Ω·τ with
    /// τ√d large) fall back to composite Gauss-Legendre panels on |x| ≤ 10, where the
    /// neglected Gaussian tail is below e^{-100}.
    pub fn average(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        if self.variance == 0.0 {
            return Ok(f(self.omega0));
        }
        let width = (2.0 * self.variance).sqrt();
        let norm = 1.0 / PI.sqrt();
        let hermite = |n: usize| -> (f64, f64) {
            let rule = gauss_hermite(n);
            let (mut sum, mut abs) = (0.0, 0.0);
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let v = w * f(self.omega0 + width * x);
                sum += v;
                abs += v.abs();
            }
            (sum * norm, abs * norm)
        };
        let panels = |count: usize| -> (f64, f64) {
            let rule = gauss_legendre(PANEL_NODES);
            let h = 2.0 * PANEL_HALF_RANGE / count as f64;
            let (mut sum, mut abs) = (0.0, 0.0);
            for p in 0..count {
                let mid = -PANEL_HALF_RANGE + (p as f64 + 0.5) * h;
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let x = mid + 0.5 * h * u;
                    let v = 0.5 * h * w * (-x * x).exp() * f(self.omega0 + width * x);
                    sum += v;
                    abs += v.abs();
                }
            }
            (sum * norm, abs * norm)
        };
        let settled = |prev: f64, (next, abs): (f64, f64)| (next - prev).abs() <= REL_TOL * abs.max(f64::MIN_POSITIVE);

        let mut n = START_NODES;
        let (mut prev, _) = hermite(n);
        while n < MAX_HERMITE_NODES {
            n *= 2;
            let next = hermite(n);
            if settled(prev, next) {
                return Ok(next.0);
            }
            prev = next.0;
        }
        let mut count = START_PANELS;
        let (mut prev, _) = panels(count);
        while count < MAX_PANELS {
            count *= 2;
            let next = panels(count);
            if settled(prev, next) {
                return Ok(next.0);
            }
            prev = next.0;
        }
        Err(Error::QuadratureNotConverged(format!(
            "disorder average not settled with {MAX_PANELS} Gauss-Legendre panels"
        )))
    }

    /// (E, m): mean initial spin energy and mean magnetization.
    pub fn ensemble_moments(&self) -> Result<(f64, f64)> {
        let e = self.average(|om| 0.5 * om * self.sz_at(om))?;
        let m = self.average(|om| self.sz_at(om))?;
        Ok((e, m))
    }

    /// Echo inputs with Ω₀ multiplying the coherent phase.
    pub fn echo_inputs(&self) -> Result<EchoInputs> {
        let (energy, magnetization) = self.ensemble_moments()?;
        Ok(EchoInputs { energy, magnetization, omega0: self.omega0 })
    }

    /// T₂* = 1/√d.
    pub fn t2_star(&self) -> Result<f64> {
        if self.variance == 0.0 {
            return Err(Error::InfiniteForZeroDisorder);
        }
        Ok(1.0 / self.variance.sqrt())
    }

    /// Two-pulse total work averaged over Ω, each spin at its own ⟨σ_z⟩.
    pub fn averaged_two_pulse_work(
        &self,
        kernels: &KernelSet,
        p1: &PulseCoefficients,
        p2: &PulseCoefficients,
        tau: f64,
        prep: Preparation,
    ) -> Result<f64> {
        let sample = TwoPulseKernelSample::new(kernels, tau, prep)?;
        self.average(|om| sample.assemble(om, self.sz_at(om), p1, p2).total)
    }
}
