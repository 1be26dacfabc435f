//! Thermal correlators of Π-factors and the quantum noise η(t) on the free bath.
//!
//! Π±(t₁, t₂) = T exp(±i∫η). The commutator of η is a c-number, so the
//! second-order Magnus form is exact: Π± = exp(±iA)·e^{iΦ} with
//! A = Σ g(β a† + β* a), β = ∫e^{iωs}ds and Φ = Σ g²(τ/ω − sin ωτ/ω²).
//! Each mode contributes an independent factor to any product.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::{annihilation, FiniteBathModel, ModeSpace};
use crate::error::{invalid, Result};
use crate::linalg::expm;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelatorItem {
    /// Π_sign(start, end), sign = ±1.
    Pi { start: f64, end: f64, sign: i8 },
    /// η(time).
    Noise { time: f64 },
}

fn lift(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Magnus form of the single-mode Π factor.
pub fn pi_factor(space: &ModeSpace, start: f64, end: f64, sign: i8) -> DMatrix<Complex64> {
    let (g, w) = (space.mode.g, space.mode.omega);
    let a = lift(&annihilation(space.levels));
    let beta = (Complex64::from_polar(1.0, w * end) - Complex64::from_polar(1.0, w * start)) / (I * w);
    let gen = (a.adjoint() * beta + &a * beta.conj()) * Complex64::new(g, 0.0);
    let tau = end - start;
    let phi = g * g * (tau / w - (w * tau).sin() / (w * w));
    expm(&(gen * (I * f64::from(sign)))) * Complex64::from_polar(1.0, phi)
}

/// η_k(t) = g(a† e^{iωt} + a e^{−iωt}) for one mode.
pub fn noise_factor(space: &ModeSpace, time: f64) -> DMatrix<Complex64> {
    let a = lift(&annihilation(space.levels));
    let e = Complex64::from_polar(1.0, space.mode.omega * time);
    (a.adjoint() * e + &a * e.conj()) * Complex64::new(space.mode.g, 0.0)
}

/// Midpoint-product approximation of T exp(±i∫η) with `steps` slices, later times left.
pub fn pi_factor_trotter(space: &ModeSpace, start: f64, end: f64, sign: i8, steps: usize) -> DMatrix<Complex64> {
    let dt = (end - start) / steps as f64;
    let mut out = DMatrix::<Complex64>::identity(space.levels, space.levels);
    for j in 0..steps {
        let s = start + (j as f64 + 0.5) * dt;
        let slice = expm(&(noise_factor(space, s) * (I * f64::from(sign) * dt)));
        out = slice * out;
    }
    out
}

fn ordered_trace(rho: &DMatrix<Complex64>, ops: &[DMatrix<Complex64>]) -> Complex64 {
    let mut prod = rho.clone();
    for op in ops.iter().rev() {
        prod = op * prod;
    }
    prod.diagonal().iter().sum()
}

/// ⟨item₁ item₂ …⟩ on the free thermal bath, operators in the given left-to-right order.
/// At most one `Noise` item is supported.
pub fn pi_correlator(model: &FiniteBathModel, items: &[CorrelatorItem]) -> Result<Complex64> {
    let noise_slots = items.iter().filter(|i| matches!(i, CorrelatorItem::Noise { .. })).count();
    if noise_slots > 1 {
        return Err(invalid("at most one noise insertion is supported"));
    }
    for item in items {
        if let CorrelatorItem::Pi { start, end, sign } = *item {
            if !(end >= start) || !start.is_finite() || !end.is_finite() || !(sign == 1 || sign == -1) {
                return Err(invalid(format!("invalid Pi factor ({start}, {end}, sign {sign})")));
            }
        }
    }
    let per_mode = |space: &ModeSpace, with_noise: bool| -> Complex64 {
        let rho = lift(&space.free_gibbs(model.bath_temperature));
        let ops: Vec<DMatrix<Complex64>> = items
            .iter()
            .filter_map(|item| match *item {
                CorrelatorItem::Pi { start, end, sign } => Some(pi_factor(space, start, end, sign)),
                CorrelatorItem::Noise { time } => with_noise.then(|| noise_factor(space, time)),
            })
            .collect();
        ordered_trace(&rho, &ops)
    };
    let plain: Vec<Complex64> = model.modes.iter().map(|m| per_mode(m, false)).collect();
    if noise_slots == 0 {
        return Ok(plain.iter().product());
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (k, m) in model.modes.iter().enumerate() {
        let others: Complex64 = plain.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).product();
        total += per_mode(m, true) * others;
    }
    Ok(total)
}
