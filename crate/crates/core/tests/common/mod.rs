//! Independent numerics for the integration tests: adaptive Gauss-Kronrod quadrature
//! and the defining frequency integrals of the ohmic kernels.

#![allow(dead_code)]

// 15-point Kronrod extension of the 7-point Gauss rule, nonnegative half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

// (Kronrod value, |Kronrod − Gauss|, Kronrod value of ∫|f|).
fn kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let (lo, hi) = (f(c - h * XGK[i]), f(c + h * XGK[i]));
        k += WGK[i] * (lo + hi);
        abs += WGK[i] * (lo.abs() + hi.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (lo + hi);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

/// ∫_a^b f by recursive bisection until each panel's Kronrod-Gauss gap is below its
/// share of `tol` or at roundoff level relative to ∫|f| on the panel.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err, abs) = kronrod(f, a, b);
        if err <= tol.max(1e-13 * abs) || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
    }
    recurse(f, a, b, tol, 16)
}

/// ∫_0^∞ f for integrands carrying an e^{-ω/Γ} cutoff, split into unit-width blocks
/// so oscillations are resolved locally.
pub fn integrate_cutoff(f: &dyn Fn(f64) -> f64, cutoff: f64, tol: f64) -> f64 {
    let top = 40.0 * cutoff;
    let blocks = 200;
    let h = top / blocks as f64;
    (0..blocks).map(|i| integrate(f, i as f64 * h, (i + 1) as f64 * h, tol / blocks as f64)).sum()
}

fn coth_half(w: f64, temp: f64) -> f64 {
    if temp == 0.0 {
        1.0
    } else {
        1.0 / (0.5 * w / temp).tanh()
    }
}

/// J(ω) = γω e^{-ω/Γ}.
pub fn ohmic_j(gamma: f64, cutoff: f64, w: f64) -> f64 {
    gamma * w * (-w / cutoff).exp()
}

/// K(0) = ∫ J(ω) coth(ω/2T) dω.
pub fn ohmic_k0_by_quadrature(gamma: f64, cutoff: f64, temp: f64) -> f64 {
    integrate_cutoff(
        &|w: f64| if w == 0.0 { 2.0 * gamma * temp } else { ohmic_j(gamma, cutoff, w) * coth_half(w, temp) },
        cutoff,
        1e-20,
    )
}

/// Kernel values from their frequency integrals: (ξ, ξ̇, G, F) at time t.
pub fn ohmic_kernels_by_quadrature(gamma: f64, cutoff: f64, temp: f64, t: f64) -> [f64; 4] {
    let tol = 1e-20;
    // J·coth/ω² and J/ω³ are finite at ω → 0 once combined with the time factors below.
    let xi = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        let s = (0.5 * w * t).sin();
        ohmic_j(gamma, cutoff, w) * coth_half(w, temp) * 2.0 * s * s / (w * w)
    };
    let xi_dot = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        ohmic_j(gamma, cutoff, w) * coth_half(w, temp) * (w * t).sin() / w
    };
    let g = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        let s = (0.5 * w * t).sin();
        ohmic_j(gamma, cutoff, w) * 2.0 * s * s / w
    };
    let f = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        let u = w * t;
        // u − sin u; the Taylor sum avoids cancellation below |u| = 1.
        let d = if u.abs() < 1.0 {
            let (mut term, mut sum, mut k): (f64, f64, u32) = (u * u * u / 6.0, 0.0, 0);
            while term.abs() > 1e-18 * sum.abs() || k == 0 {
                sum += term;
                term *= -u * u / ((2 * k + 4) * (2 * k + 5)) as f64;
                k += 1;
            }
            sum
        } else {
            u - u.sin()
        };
        ohmic_j(gamma, cutoff, w) * d / (w * w)
    };
    [
        integrate_cutoff(&xi, cutoff, tol),
        integrate_cutoff(&xi_dot, cutoff, tol),
        integrate_cutoff(&g, cutoff, tol),
        integrate_cutoff(&f, cutoff, tol),
    ]
}

/// |a − b| / max(|b|, floor).
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}
