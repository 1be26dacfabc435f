use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::bath_kernels::Mode;
use crate::error::{invalid, Error, Result};
use crate::linalg::kron_all;
use crate::work_engine::initial_sz;

/// Gibbs weight allowed beyond the last kept Fock level.
pub const TAIL_MASS: f64 = 1e-10;
/// Default cap on the full Hilbert-space dimension 2·∏ levels.
pub const DEFAULT_DIMENSION_CAP: usize = 20_000;
/// Levels kept above the thermal tail rule, room for the spin-dependent displacement.
pub const DISPLACEMENT_MARGIN: usize = 6;

/// σ_z eigenvalue of spin index 0 (up) and 1 (down).
pub const SPIN_SIGN: [f64; 2] = [1.0, -1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub modes: Vec<Mode>,
    /// Levels per mode; `None` applies the tail rule.
    pub fock_cutoffs: Option<Vec<usize>>,
    pub spin_gap: f64,
    pub bath_temperature: f64,
    pub spin_temperature: f64,
    pub dimension_cap: usize,
}

impl ModelSpec {
    pub fn new(modes: Vec<Mode>, spin_gap: f64, bath_temperature: f64, spin_temperature: f64) -> Self {
        ModelSpec {
            modes,
            fock_cutoffs: None,
            spin_gap,
            bath_temperature,
            spin_temperature,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

/// Tail-rule level count: Gibbs mass beyond the cutoff below `TAIL_MASS`, plus margin.
pub fn tail_rule_levels(mode: &Mode, temperature: f64) -> usize {
    let thermal = if temperature == 0.0 {
        1
    } else {
        ((1.0 / TAIL_MASS).ln() * temperature / mode.omega).floor() as usize + 1
    };
    let shift = mode.g / mode.omega;
    thermal + DISPLACEMENT_MARGIN + (4.0 * shift * shift).ceil() as usize
}

fn tail_mass(mode: &Mode, levels: usize, temperature: f64) -> f64 {
    if temperature == 0.0 {
        0.0
    } else {
        (-(levels as f64) * mode.omega / temperature).exp()
    }
}

/// One truncated oscillator with its spin-conditioned Hamiltonians
/// h_s = ω n + s·(g/2)(a + a†), diagonalized once.
#[derive(Debug, Clone)]
pub struct ModeSpace {
    pub mode: Mode,
    pub levels: usize,
    /// Indexed by spin index.
    pub h: [DMatrix<f64>; 2],
    pub eigenvalues: [DVector<f64>; 2],
    pub eigenvectors: [DMatrix<f64>; 2],
}

/// Annihilation operator on `levels` Fock states.
pub fn annihilation(levels: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(levels, levels);
    for n in 1..levels {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

pub fn number(levels: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_fn(levels, |n, _| n as f64))
}

impl ModeSpace {
    fn new(mode: Mode, levels: usize) -> Self {
        let a = annihilation(levels);
        let x = &a + a.transpose();
        let n = number(levels);
        let h = [0, 1].map(|i| &n * mode.omega + &x * (0.5 * SPIN_SIGN[i] * mode.g));
        let eig = h.clone().map(SymmetricEigen::new);
        let [e0, e1] = eig;
        ModeSpace {
            mode,
            levels,
            h,
            eigenvalues: [e0.eigenvalues.clone(), e1.eigenvalues.clone()],
            eigenvectors: [e0.eigenvectors, e1.eigenvectors],
        }
    }

    /// e^{−i h_s t}.
    pub fn propagator(&self, spin: usize, t: f64) -> DMatrix<Complex64> {
        let q = &self.eigenvectors[spin];
        let phases = self.eigenvalues[spin].map(|l| Complex64::from_polar(1.0, -l * t));
        let qc = q.map(|x| Complex64::new(x, 0.0));
        let scaled = DMatrix::from_fn(self.levels, self.levels, |i, j| qc[(i, j)] * phases[j]);
        scaled * qc.transpose()
    }

    /// Normalized e^{−h_s/T}; ground-state projector at T = 0.
    pub fn gibbs(&self, spin: usize, temperature: f64) -> DMatrix<f64> {
        let q = &self.eigenvectors[spin];
        let l = &self.eigenvalues[spin];
        let lmin = l.min();
        let w = if temperature == 0.0 {
            DVector::from_fn(self.levels, |i, _| if l[i] == lmin { 1.0 } else { 0.0 })
        } else {
            l.map(|x| (-(x - lmin) / temperature).exp())
        };
        let z = w.sum();
        let scaled = DMatrix::from_fn(self.levels, self.levels, |i, j| q[(i, j)] * w[j] / z);
        scaled * q.transpose()
    }

    /// Gibbs state of the free oscillator ω a†a, diagonal in the Fock basis.
    pub fn free_gibbs(&self, temperature: f64) -> DMatrix<f64> {
        let w = DVector::from_fn(self.levels, |n, _| {
            if temperature == 0.0 {
                if n == 0 { 1.0 } else { 0.0 }
            } else {
                (-(n as f64) * self.mode.omega / temperature).exp()
            }
        });
        let z = w.sum();
        DMatrix::from_diagonal(&(w / z))
    }
}

/// Spin plus truncated modes: H = (ε/2)σ_z + Σ ω a†a + (1/2)σ_z Σ g(a + a†).
#[derive(Debug, Clone)]
pub struct FiniteBathModel {
    pub modes: Vec<ModeSpace>,
    pub spin_gap: f64,
    pub bath_temperature: f64,
    pub spin_temperature: f64,
}

/// Validates the model description and diagonalizes each mode.
pub fn build_model(spec: &ModelSpec) -> Result<FiniteBathModel> {
    if spec.modes.is_empty() {
        return Err(invalid("oracle needs at least one mode"));
    }
    for m in &spec.modes {
        if !(m.omega > 0.0) || !m.omega.is_finite() || !m.g.is_finite() {
            return Err(invalid(format!("mode needs finite g and omega > 0, got {m:?}")));
        }
    }
    if !(spec.spin_gap.is_finite()) {
        return Err(invalid("spin gap must be finite"));
    }
    if !(spec.bath_temperature >= 0.0) || !spec.bath_temperature.is_finite() {
        return Err(invalid(format!("bath temperature must be finite and >= 0, got {}", spec.bath_temperature)));
    }
    if !(spec.spin_temperature >= 0.0) {
        return Err(invalid(format!("spin temperature must be >= 0, got {}", spec.spin_temperature)));
    }
    let levels: Vec<usize> = match &spec.fock_cutoffs {
        Some(c) => {
            if c.len() != spec.modes.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} cutoffs for {} modes",
                    c.len(),
                    spec.modes.len()
                )));
            }
            c.clone()
        }
        None => spec.modes.iter().map(|m| tail_rule_levels(m, spec.bath_temperature)).collect(),
    };
    for (m, &n) in spec.modes.iter().zip(&levels) {
        if n == 0 {
            return Err(Error::CutoffTooSmall("a mode needs at least one level".into()));
        }
        let tail = tail_mass(m, n, spec.bath_temperature);
        if !(tail < TAIL_MASS) {
            return Err(Error::CutoffTooSmall(format!(
                "mode (g = {}, omega = {}) with {n} levels leaves Gibbs tail {tail:.3e}",
                m.g, m.omega
            )));
        }
    }
    let dim = levels.iter().try_fold(2usize, |acc, &n| acc.checked_mul(n));
    match dim {
        Some(d) if d <= spec.dimension_cap => {}
        _ => {
            return Err(invalid(format!(
                "dimension 2 x {levels:?} exceeds the cap {}",
                spec.dimension_cap
            )))
        }
    }
    Ok(FiniteBathModel {
        modes: spec.modes.iter().zip(&levels).map(|(&m, &n)| ModeSpace::new(m, n)).collect(),
        spin_gap: spec.spin_gap,
        bath_temperature: spec.bath_temperature,
        spin_temperature: spec.spin_temperature,
    })
}

impl FiniteBathModel {
    pub fn levels(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.levels).collect()
    }

    pub fn bath_dimension(&self) -> usize {
        self.modes.iter().map(|m| m.levels).product()
    }

    pub fn dimension(&self) -> usize {
        2 * self.bath_dimension()
    }

    pub fn sz0(&self) -> f64 {
        initial_sz(self.spin_gap, self.spin_temperature)
    }

    /// Spin-up population of the initial spin state.
    pub(crate) fn spin_populations(&self) -> [f64; 2] {
        let s = self.sz0();
        [0.5 * (1.0 + s), 0.5 * (1.0 - s)]
    }

    /// All eigenvalues of the σ_z = s block, ascending.
    pub fn block_spectrum(&self, spin: usize) -> Vec<f64> {
        let mut levels = vec![0.5 * SPIN_SIGN[spin] * self.spin_gap];
        for m in &self.modes {
            let mut next = Vec::with_capacity(levels.len() * m.levels);
            for &e in &levels {
                for &l in m.eigenvalues[spin].iter() {
                    next.push(e + l);
                }
            }
            levels = next;
        }
        levels.sort_by(f64::total_cmp);
        levels
    }

    /// Full Hamiltonian, spin index most significant. Only for small models.
    pub fn dense_hamiltonian(&self) -> DMatrix<f64> {
        let nb = self.bath_dimension();
        let mut h = DMatrix::zeros(2 * nb, 2 * nb);
        for spin in 0..2 {
            let mut block = DMatrix::identity(nb, nb) * (0.5 * SPIN_SIGN[spin] * self.spin_gap);
            for k in 0..self.modes.len() {
                let factors: Vec<DMatrix<f64>> = self
                    .modes
                    .iter()
                    .enumerate()
                    .map(|(j, m)| if j == k { m.h[spin].clone() } else { DMatrix::identity(m.levels, m.levels) })
                    .collect();
                block += kron_all(&factors);
            }
            h.view_mut((spin * nb, spin * nb), (nb, nb)).copy_from(&block);
        }
        h
    }
}
