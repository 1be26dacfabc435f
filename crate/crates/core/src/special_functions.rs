//! Complex log-gamma, digamma and trigamma.
//!
//! All three use the same scheme: reflection for arguments left of the
//! imaginary axis, upward recurrence until `Re z >= 12`, then the asymptotic
//! Stirling-type series.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex number used at every public boundary of this module.
pub type ComplexValue = Complex64;

const RECURRENCE_THRESHOLD: f64 = 12.0;
const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// B_{2k} for k = 1..=10.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn check_argument(z: ComplexValue) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

fn finite(z: ComplexValue) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("result overflowed ({z})")))
    }
}

// zeta(k) for k = 2..=40, index k - 2.
fn zeta_table() -> &'static [f64; 39] {
    static TABLE: OnceLock<[f64; 39]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; 39];
        let n = 40.0_f64;
        for (i, slot) in out.iter_mut().enumerate() {
            let k = (i + 2) as f64;
            let mut sum = 0.0;
            for j in (1..40).rev() {
                sum += (j as f64).powf(-k);
            }
            // Euler-Maclaurin tail from n onwards.
            let tail = n.powf(1.0 - k) / (k - 1.0) + 0.5 * n.powf(-k) + k * n.powf(-k - 1.0) / 12.0
                - k * (k + 1.0) * (k + 2.0) * n.powf(-k - 3.0) / 720.0;
            *slot = sum + tail;
        }
        out
    })
}

// ln Gamma(1 + x) for |x| <= 0.2.
fn log_gamma_taylor_at_one(x: ComplexValue) -> ComplexValue {
    let zeta = zeta_table();
    let mut sum = x * (-EULER_GAMMA);
    // (-x)^k
    let mut power = -x;
    for k in 2..=40usize {
        power *= -x;
        let term = power * (zeta[k - 2] / k as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

// ln(1 + x) without cancellation for small x.
fn log1p_complex(x: ComplexValue) -> ComplexValue {
    let re = 0.5 * (2.0 * x.re + x.norm_sqr()).ln_1p();
    let im = x.im.atan2(1.0 + x.re);
    ComplexValue::new(re, im)
}

fn log_gamma_stirling(z: ComplexValue) -> ComplexValue {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = ComplexValue::new(0.0, 0.0);
    let mut power = inv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        series += power * (b / (m * (m - 1.0)));
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

// Principal log of sin(pi z), stable for large |Im z|.
fn log_sin_pi(z: ComplexValue) -> ComplexValue {
    if z.im < 0.0 {
        return log_sin_pi(z.conj()).conj();
    }
    let q = (ComplexValue::new(0.0, 2.0 * PI) * z).exp();
    let one_minus_q = ComplexValue::new(1.0, 0.0) - q;
    let re = PI * z.im + one_minus_q.norm().ln() - std::f64::consts::LN_2;
    // sin(pi z) = e^{-i pi z} (q - 1) / (2i)
    let mut arg = -PI * z.re + (-one_minus_q).arg() - 0.5 * PI;
    arg = arg.rem_euclid(2.0 * PI);
    if arg > PI {
        arg -= 2.0 * PI;
    }
    ComplexValue::new(re, arg)
}

// pi * cot(pi z), stable for large |Im z|.
fn pi_cot_pi(z: ComplexValue) -> ComplexValue {
    if z.im < 0.0 {
        return pi_cot_pi(z.conj()).conj();
    }
    if z.im < 1.0 {
        let w = z * PI;
        return w.cos() / w.sin() * PI;
    }
    let q = (ComplexValue::new(0.0, 2.0 * PI) * z).exp();
    let one = ComplexValue::new(1.0, 0.0);
    ComplexValue::new(0.0, -PI) * (one + q) / (one - q)
}

// pi^2 / sin^2(pi z), stable for large |Im z|.
fn pi2_csc2_pi(z: ComplexValue) -> ComplexValue {
    if z.im < 0.0 {
        return pi2_csc2_pi(z.conj()).conj();
    }
    if z.im < 1.0 {
        let s = (z * PI).sin();
        return (s * s).inv() * (PI * PI);
    }
    let q = (ComplexValue::new(0.0, 2.0 * PI) * z).exp();
    let one = ComplexValue::new(1.0, 0.0);
    let d = one - q;
    q * (-4.0 * PI * PI) / (d * d)
}

fn log_gamma_unchecked(z: ComplexValue) -> ComplexValue {
    let one = ComplexValue::new(1.0, 0.0);
    if (z - one).norm() < 0.2 {
        return log_gamma_taylor_at_one(z - one);
    }
    if (z - 2.0).norm() < 0.2 {
        let x = z - 2.0;
        return log_gamma_taylor_at_one(x) + log1p_complex(x);
    }
    if z.re < 0.1 && (z.im.abs() < 2.0 || z.re < -30.0) {
        let turns = (0.5 * z.re + 0.25).floor();
        let branch = (2.0 * PI).copysign(z.im) * turns;
        return ComplexValue::new(LN_PI, branch) - log_sin_pi(z) - log_gamma_unchecked(one - z);
    }
    let mut shift = ComplexValue::new(0.0, 0.0);
    let mut w = z;
    while w.re < RECURRENCE_THRESHOLD {
        shift += w.ln();
        w += 1.0;
    }
    log_gamma_stirling(w) - shift
}

/// Analytic continuation of ln Γ(z), continuous off the negative real axis.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    check_argument(z)?;
    finite(log_gamma_unchecked(z))
}

fn digamma_unchecked(z: ComplexValue) -> ComplexValue {
    let one = ComplexValue::new(1.0, 0.0);
    if z.re < 0.1 {
        return digamma_unchecked(one - z) - pi_cot_pi(z);
    }
    let mut shift = ComplexValue::new(0.0, 0.0);
    let mut w = z;
    while w.re < RECURRENCE_THRESHOLD {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = ComplexValue::new(0.0, 0.0);
    let mut power = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        series += power * (b / m);
        power *= inv2;
    }
    w.ln() - inv * 0.5 - series - shift
}

/// ψ(z) = Γ′(z)/Γ(z).
pub fn digamma(z: ComplexValue) -> Result<ComplexValue> {
    check_argument(z)?;
    finite(digamma_unchecked(z))
}

fn trigamma_unchecked(z: ComplexValue) -> ComplexValue {
    let one = ComplexValue::new(1.0, 0.0);
    if z.re < 0.1 {
        return pi2_csc2_pi(z) - trigamma_unchecked(one - z);
    }
    let mut shift = ComplexValue::new(0.0, 0.0);
    let mut w = z;
    while w.re < RECURRENCE_THRESHOLD {
        let r = w.inv();
        shift += r * r;
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = ComplexValue::new(0.0, 0.0);
    let mut power = inv2 * inv;
    for b in BERNOULLI.iter() {
        series += power * *b;
        power *= inv2;
    }
    inv + inv2 * 0.5 + series + shift
}

/// ψ′(z), the derivative of the digamma function.
pub fn trigamma(z: ComplexValue) -> Result<ComplexValue> {
    check_argument(z)?;
    finite(trigamma_unchecked(z))
}

/// `ln Γ(x) − Re ln Γ(x + iy)` for real `x > 0`, free of cancellation at small `y`.
///
/// Equals `½ Σ_{n≥0} ln(1 + y²/(x+n)²)`, so it is even in `y` and non-negative.
pub fn log_gamma_modulus_drop(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!(
            "log_gamma_modulus_drop needs finite x > 0 and finite y, got ({x}, {y})"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < RECURRENCE_THRESHOLD {
        let u = y / x;
        acc += 0.5 * (u * u).ln_1p();
        x += 1.0;
    }
    // Re ln Γ(x+iy) − ln Γ(x) from the difference of two Stirling series.
    let u = y / x;
    let l = (u * u).ln_1p();
    let theta = u.atan();
    let mut diff = (x - 0.5) * 0.5 * l - y * theta;
    let mut xpow = 1.0 / x;
    let x2inv = xpow * xpow;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        let n = m - 1.0;
        let radial = (-0.5 * n * l).exp();
        let half = 0.5 * n * theta;
        // Re (1+iu)^{-n} − 1 without cancellation.
        let re_minus_one = (-0.5 * n * l).exp_m1() - radial * 2.0 * half.sin().powi(2);
        diff += b / (m * n) * xpow * re_minus_one;
        xpow *= x2inv;
    }
    Ok(acc - diff)
}
