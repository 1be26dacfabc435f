//! Efficiency, Carnot bound and the two-temperature restrictions on extracted work.

use crate::error::{Error, Result};
use crate::work_engine::WorkBreakdown;

/// Relative gap below which the two temperatures count as equal.
pub const EQUAL_TEMPERATURE_TOL: f64 = 1e-9;
/// Rounding allowance for the restriction and Carnot checks.
pub const RESTRICTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemperatureRegime {
    SpinHotter,
    BathHotter,
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub eta: f64,
    pub carnot: f64,
    pub regime: TemperatureRegime,
    /// W − (1 − T/T_S)·ΔH_S.
    pub slack1: f64,
    /// W − (1 − T_S/T)·(ΔH_I + ΔH_B).
    pub slack2: f64,
    /// False when W ≥ 0; eta is then 0.
    pub extraction: bool,
}

pub fn regime(bath_temperature: f64, spin_temperature: f64) -> TemperatureRegime {
    let (t, ts) = (bath_temperature, spin_temperature);
    let top = t.max(ts);
    if top == 0.0 || (top.is_finite() && (t - ts).abs() / top < EQUAL_TEMPERATURE_TOL) || t == ts {
        TemperatureRegime::Equal
    } else if ts > t {
        TemperatureRegime::SpinHotter
    } else {
        TemperatureRegime::BathHotter
    }
}

/// 1 − min/max; 0 for equal temperatures.
pub fn carnot(bath_temperature: f64, spin_temperature: f64) -> f64 {
    if regime(bath_temperature, spin_temperature) == TemperatureRegime::Equal {
        return 0.0;
    }
    let lo = bath_temperature.min(spin_temperature);
    let hi = bath_temperature.max(spin_temperature);
    if hi.is_infinite() {
        1.0
    } else {
        1.0 - lo / hi
    }
}

// 1 − num/den with 0/0 = 1 and finite/∞ = 0.
fn one_minus_ratio(num: f64, den: f64) -> f64 {
    if num == den {
        0.0
    } else if den == 0.0 {
        f64::NEG_INFINITY
    } else {
        1.0 - num / den
    }
}

// coefficient × energy, with 0 × ∞ read as 0.
fn scaled(coef: f64, energy: f64) -> f64 {
    if energy == 0.0 {
        0.0
    } else {
        coef * energy
    }
}

/// Slacks of the two restrictions; both are nonnegative for any physical run.
pub fn check_restrictions(b: &WorkBreakdown, bath_temperature: f64, spin_temperature: f64) -> (f64, f64) {
    let (t, ts) = (bath_temperature, spin_temperature);
    let slack1 = b.total - scaled(one_minus_ratio(t, ts), b.spin_part);
    let slack2 = b.total - scaled(one_minus_ratio(ts, t), b.bath_int_part);
    (slack1, slack2)
}

/// Efficiency of an extraction run, measured against the spin energy it consumes.
pub fn efficiency(b: &WorkBreakdown, bath_temperature: f64, spin_temperature: f64) -> Result<EfficiencyReport> {
    if regime(bath_temperature, spin_temperature) == TemperatureRegime::Equal && b.total < -RESTRICTION_TOL {
        return Err(Error::DegenerateTemperatures { work: b.total });
    }
    Ok(report(b, bath_temperature, spin_temperature))
}

/// Same numbers as `efficiency` without any enforcement. For runs that do not start
/// from the two-temperature state (finite preparation time), where the bounds need
/// not hold; eta is 0 for equal temperatures.
pub fn report(b: &WorkBreakdown, bath_temperature: f64, spin_temperature: f64) -> EfficiencyReport {
    let regime = regime(bath_temperature, spin_temperature);
    let (slack1, slack2) = check_restrictions(b, bath_temperature, spin_temperature);
    let carnot = carnot(bath_temperature, spin_temperature);
    let extraction = b.total < 0.0;
    let work = b.total.abs();
    let spin = b.spin_part.abs();
    let eta = if !extraction || regime == TemperatureRegime::Equal {
        0.0
    } else {
        match regime {
            TemperatureRegime::SpinHotter => work / spin,
            _ => work / (work + spin),
        }
    };
    EfficiencyReport { eta, carnot, regime, slack1, slack2, extraction }
}

/// `efficiency` plus enforcement: a negative slack or η above Carnot is a bug upstream.
pub fn checked_efficiency(b: &WorkBreakdown, bath_temperature: f64, spin_temperature: f64) -> Result<EfficiencyReport> {
    let report = efficiency(b, bath_temperature, spin_temperature)?;
    if report.slack1 < -RESTRICTION_TOL || report.slack2 < -RESTRICTION_TOL {
        return Err(Error::RestrictionViolated(format!(
            "slacks ({:.6e}, {:.6e}) for W = {:.6e}",
            report.slack1, report.slack2, b.total
        )));
    }
    if report.eta > report.carnot + RESTRICTION_TOL {
        return Err(Error::RestrictionViolated(format!(
            "efficiency {:.12} above carnot {:.12}",
            report.eta, report.carnot
        )));
    }
    Ok(report)
}
