//! Instantaneous pulses as SU(2) unitaries and their conjugation coefficients.
//!
//! A pulse maps operators as `P A = U† A U` and states as `ρ → U ρ U†`.
//! Coefficients are expanded in the basis (σ₊, σ₋, σ_z), σ± = σ_x ± iσ_y.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

/// Basis index of σ₊.
pub const PLUS: usize = 0;
/// Basis index of σ₋.
pub const MINUS: usize = 1;
/// Basis index of σ_z.
pub const Z: usize = 2;

const UNITARITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn trace(a: &Mat2) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn sigma_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn sigma_y() -> Mat2 {
    [[ZERO, -I], [I, ZERO]]
}

pub fn sigma_z() -> Mat2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

/// Basis operator with the given index: σ₊ = 2|↑⟩⟨↓|, σ₋ = 2|↓⟩⟨↑|, σ_z.
pub fn basis_operator(index: usize) -> Mat2 {
    let two = Complex64::new(2.0, 0.0);
    match index {
        PLUS => [[ZERO, two], [ZERO, ZERO]],
        MINUS => [[ZERO, ZERO], [two, ZERO]],
        Z => sigma_z(),
        _ => panic!("basis index {index} out of range"),
    }
}

fn unitarity_residual(u: &Mat2) -> f64 {
    let p = mat_mul(&dagger(u), u);
    let mut r: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            r = r.max((p[i][j] - id).norm());
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// 2×2 unitary of an ideal pulse. The global phase is irrelevant for coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseUnitary {
    u: Mat2,
}

impl PulseUnitary {
    pub fn identity() -> Self {
        PulseUnitary { u: [[ONE, ZERO], [ZERO, ONE]] }
    }

    /// Validates unitarity to 1e-10.
    pub fn from_matrix(u: Mat2) -> Result<Self> {
        let residual = unitarity_residual(&u);
        if !(residual <= UNITARITY_TOL) {
            return Err(Error::NotUnitary { residual });
        }
        Ok(PulseUnitary { u })
    }

    /// Euler form: U† = [[e^{−iφ}cos θ, −e^{−iψ}sin θ], [e^{iψ}sin θ, e^{iφ}cos θ]].
    pub fn from_euler(phi: f64, psi: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let ud = [
            [Complex64::from_polar(c, -phi), -Complex64::from_polar(s, -psi)],
            [Complex64::from_polar(s, psi), Complex64::from_polar(c, phi)],
        ];
        PulseUnitary { u: dagger(&ud) }
    }

    /// (φ, ψ, θ) with θ ∈ [0, π/2], reproducing the coefficients of this pulse.
    pub fn euler_angles(&self) -> (f64, f64, f64) {
        let ud = dagger(&self.u);
        // remove the global phase so that det U† = 1
        let det = ud[0][0] * ud[1][1] - ud[0][1] * ud[1][0];
        let half = Complex64::from_polar(1.0, -0.5 * det.arg());
        let a = ud[0][0] * half;
        let b = ud[1][0] * half;
        let theta = b.norm().atan2(a.norm());
        let phi = if a.norm() > 0.0 { -a.arg() } else { 0.0 };
        let psi = if b.norm() > 0.0 { b.arg() } else { 0.0 };
        (phi, psi, theta)
    }

    pub fn matrix(&self) -> Mat2 {
        self.u
    }

    /// U† A U.
    pub fn conjugate(&self, a: &Mat2) -> Mat2 {
        mat_mul(&mat_mul(&dagger(&self.u), a), &self.u)
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.u)
    }
}

/// U = exp(−iφσ_axis/2), so that P σ_z = e^{iφσ/2} σ_z e^{−iφσ/2}.
pub fn rotation_pulse(angle: f64, axis: Axis) -> PulseUnitary {
    let (s, c) = (0.5 * angle).sin_cos();
    let sigma = match axis {
        Axis::X => sigma_x(),
        Axis::Y => sigma_y(),
    };
    let mut u = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { c } else { 0.0 };
            u[i][j] = Complex64::new(id, 0.0) - I * s * sigma[i][j];
        }
    }
    PulseUnitary { u }
}

/// U = −iσ_x: σ_z → −σ_z, σ_y → −σ_y, σ_x → σ_x.
pub fn pi_pulse() -> PulseUnitary {
    PulseUnitary { u: [[ZERO, -I], [-I, ZERO]] }
}

/// `first` applied, then `second`: U = U_second · U_first.
pub fn compose(first: &PulseUnitary, second: &PulseUnitary) -> PulseUnitary {
    PulseUnitary { u: mat_mul(&second.u, &first.u) }
}

/// c[a][b] with P σ_a = Σ_b c[a][b] σ_b, indices `PLUS`, `MINUS`, `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseCoefficients {
    pub c: [[Complex64; 3]; 3],
}

impl PulseCoefficients {
    pub fn identity() -> Self {
        let mut c = [[ZERO; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = ONE;
        }
        PulseCoefficients { c }
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.c[a][b]
    }

    /// c_{z,z}; real for any unitary.
    pub fn zz(&self) -> f64 {
        self.c[Z][Z].re
    }

    /// Coefficients of the pulse `self` followed by `then`: C_then · C_self.
    pub fn followed_by(&self, then: &PulseCoefficients) -> PulseCoefficients {
        let mut c = [[ZERO; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                c[a][b] = (0..3).map(|k| then.c[a][k] * self.c[k][b]).sum();
            }
        }
        PulseCoefficients { c }
    }

    /// Σ_b c[a][b] σ_b as a 2×2 matrix.
    pub fn image(&self, a: usize) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for b in 0..3 {
            let s = basis_operator(b);
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += self.c[a][b] * s[i][j];
                }
            }
        }
        out
    }
}

/// Conjugation coefficients of a pulse; fails if U drifted from unitarity.
pub fn coefficients(pulse: &PulseUnitary) -> Result<PulseCoefficients> {
    let residual = pulse.unitarity_residual();
    if !(residual <= UNITARITY_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let minus = basis_operator(MINUS);
    let plus = basis_operator(PLUS);
    let z = sigma_z();
    let mut c = [[ZERO; 3]; 3];
    for (a, row) in c.iter_mut().enumerate() {
        let img = pulse.conjugate(&basis_operator(a));
        row[PLUS] = trace(&mat_mul(&img, &minus)) / 4.0;
        row[MINUS] = trace(&mat_mul(&img, &plus)) / 4.0;
        row[Z] = trace(&mat_mul(&img, &z)) / 2.0;
    }
    Ok(PulseCoefficients { c })
}
