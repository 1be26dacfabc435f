//! Density operator of spin plus truncated bath, evolved exactly.
//!
//! Within each σ_z block the Hamiltonian is a Kronecker sum over modes, so free
//! evolution maps a mode-factorized operator to a mode-factorized operator. The
//! state is kept as a short sum of such products, each attached to one spin block
//! (a, b). Pulses mix blocks and multiply the number of terms by at most four.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::{FiniteBathModel, SPIN_SIGN};
use crate::error::{Error, Result};
use crate::linalg::kron_all;
use crate::pulse_algebra::PulseUnitary;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// Gibbs spin ⊗ Gibbs free bath.
    Factorized,
    /// ∝ exp[−β_S H_S − β(H_B + H_I)].
    Correlated,
}

#[derive(Debug, Clone)]
struct Term {
    a: usize,
    b: usize,
    coef: Complex64,
    factors: Arc<Vec<DMatrix<Complex64>>>,
}

/// ρ = Σ_terms coef · |a⟩⟨b| ⊗ (⊗_k factor_k).
#[derive(Debug, Clone)]
pub struct DenseState {
    terms: Vec<Term>,
    levels: Vec<usize>,
}

/// One schedule entry: free evolution for `wait`, then an instantaneous pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub wait: f64,
    pub pulse: PulseUnitary,
}

#[derive(Debug, Clone)]
pub struct SequenceOutcome {
    /// Energy change across each pulse.
    pub works: Vec<f64>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub state: DenseState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateInvariants {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().iter().sum()
}

// Tr(A B) without forming the product.
fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<f64>) -> Complex64 {
    let mut s = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Initial state of the model.
pub fn initial_state(model: &FiniteBathModel, kind: InitialCondition) -> Result<DenseState> {
    let p = model.spin_populations();
    let levels = model.levels();
    let temp = model.bath_temperature;
    let terms = match kind {
        InitialCondition::Factorized => {
            let bath: Arc<Vec<_>> = Arc::new(model.modes.iter().map(|m| to_complex(&m.free_gibbs(temp))).collect());
            (0..2)
                .map(|s| Term { a: s, b: s, coef: Complex64::new(p[s], 0.0), factors: Arc::clone(&bath) })
                .collect()
        }
        InitialCondition::Correlated => {
            // The partition function of H_B + sX/2 does not depend on s (parity maps one
            // block onto the other), so the spin weights are the bare Gibbs ones.
            (0..2)
                .map(|s| Term {
                    a: s,
                    b: s,
                    coef: Complex64::new(p[s], 0.0),
                    factors: Arc::new(model.modes.iter().map(|m| to_complex(&m.gibbs(s, temp))).collect()),
                })
                .collect()
        }
    };
    let state = DenseState { terms, levels };
    state.check_trace()?;
    Ok(state)
}

impl DenseState {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.a == t.b)
            .map(|t| t.coef * t.factors.iter().map(trace).product::<Complex64>())
            .sum()
    }

    fn check_trace(&self) -> Result<()> {
        let err = (self.trace() - 1.0).norm();
        if err > 1e-10 {
            return Err(Error::InvalidParameter(format!("state trace drifted by {err:.3e}")));
        }
        Ok(())
    }

    pub fn sigma_z(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.a == t.b)
            .map(|t| t.coef * SPIN_SIGN[t.a] * t.factors.iter().map(trace).product::<Complex64>())
            .sum::<Complex64>()
            .re
    }

    /// (ε/2)⟨σ_z⟩.
    pub fn spin_energy(&self, model: &FiniteBathModel) -> f64 {
        0.5 * model.spin_gap * self.sigma_z()
    }

    /// tr[ρ H].
    pub fn energy(&self, model: &FiniteBathModel) -> f64 {
        let mut e = ZERO;
        for t in self.terms.iter().filter(|t| t.a == t.b) {
            let traces: Vec<Complex64> = t.factors.iter().map(trace).collect();
            let all: Complex64 = traces.iter().product();
            let mut sum = all * (0.5 * SPIN_SIGN[t.a] * model.spin_gap);
            for (k, m) in model.modes.iter().enumerate() {
                let others: Complex64 = traces.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| *v).product();
                sum += trace_product(&t.factors[k], &m.h[t.a]) * others;
            }
            e += t.coef * sum;
        }
        e.re
    }

    fn check_model(&self, model: &FiniteBathModel) -> Result<()> {
        if self.levels != model.levels() {
            return Err(Error::DimensionMismatch(format!(
                "state levels {:?} vs model levels {:?}",
                self.levels,
                model.levels()
            )));
        }
        Ok(())
    }

    /// Free evolution e^{−iHt} ρ e^{iHt}.
    pub fn evolve(&self, model: &FiniteBathModel, t: f64) -> Result<DenseState> {
        self.check_model(model)?;
        let props: Vec<[DMatrix<Complex64>; 2]> =
            model.modes.iter().map(|m| [m.propagator(0, t), m.propagator(1, t)]).collect();
        Ok(self.evolve_with(model, t, &props))
    }

    fn evolve_with(&self, model: &FiniteBathModel, t: f64, props: &[[DMatrix<Complex64>; 2]]) -> DenseState {
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let factors = term
                    .factors
                    .iter()
                    .zip(props)
                    .map(|(f, p)| &p[term.a] * f * p[term.b].adjoint())
                    .collect();
                let phase = -0.5 * (SPIN_SIGN[term.a] - SPIN_SIGN[term.b]) * model.spin_gap * t;
                Term {
                    a: term.a,
                    b: term.b,
                    coef: term.coef * Complex64::from_polar(1.0, phase),
                    factors: Arc::new(factors),
                }
            })
            .collect();
        DenseState { terms, levels: self.levels.clone() }
    }

    /// ρ → (U ⊗ 1) ρ (U† ⊗ 1).
    pub fn apply_pulse(&self, pulse: &PulseUnitary) -> Result<DenseState> {
        let residual = pulse.unitarity_residual();
        if !(residual <= 1e-10) {
            return Err(Error::NotUnitary { residual });
        }
        let u = pulse.matrix();
        let mut merged: Vec<Term> = Vec::new();
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for term in &self.terms {
            for a in 0..2 {
                for b in 0..2 {
                    let coef = u[a][term.a] * u[b][term.b].conj() * term.coef;
                    if coef == ZERO {
                        continue;
                    }
                    let key = (a, b, Arc::as_ptr(&term.factors) as usize);
                    match index.get(&key) {
                        Some(&i) => merged[i].coef += coef,
                        None => {
                            index.insert(key, merged.len());
                            merged.push(Term { a, b, coef, factors: Arc::clone(&term.factors) });
                        }
                    }
                }
            }
        }
        Ok(DenseState { terms: merged, levels: self.levels.clone() })
    }

    /// Full density matrix, spin index most significant. Only for small models.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let nb: usize = self.levels.iter().product();
        let mut rho = DMatrix::from_element(2 * nb, 2 * nb, ZERO);
        for t in &self.terms {
            let block = kron_all(&t.factors) * t.coef;
            let mut view = rho.view_mut((t.a * nb, t.b * nb), (nb, nb));
            view += block;
        }
        rho
    }

    /// Trace, hermiticity and positivity of the materialized density matrix.
    pub fn invariants(&self) -> StateInvariants {
        let rho = self.to_dense();
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sym = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(sym);
        StateInvariants {
            trace_error: (trace(&rho) - 1.0).norm(),
            hermiticity_error: herm,
            min_eigenvalue: eig.eigenvalues.min(),
        }
    }
}

/// Runs `schedule` from `state`; each pulse's work is the energy change across it.
pub fn run_sequence(model: &FiniteBathModel, state: &DenseState, schedule: &[Step]) -> Result<SequenceOutcome> {
    state.check_model(model)?;
    let mut cache: HashMap<u64, Vec<[DMatrix<Complex64>; 2]>> = HashMap::new();
    let initial_energy = state.energy(model);
    let mut current = state.clone();
    let mut works = Vec::with_capacity(schedule.len());
    for step in schedule {
        if !(step.wait >= 0.0) || !step.wait.is_finite() {
            return Err(Error::Domain(format!("wait must be finite and >= 0, got {}", step.wait)));
        }
        if step.wait > 0.0 {
            let props = cache.entry(step.wait.to_bits()).or_insert_with(|| {
                model.modes.iter().map(|m| [m.propagator(0, step.wait), m.propagator(1, step.wait)]).collect()
            });
            current = current.evolve_with(model, step.wait, props);
        }
        let before = current.energy(model);
        current = current.apply_pulse(&step.pulse)?;
        current.check_trace()?;
        works.push(current.energy(model) - before);
    }
    let final_energy = current.energy(model);
    Ok(SequenceOutcome { works, initial_energy, final_energy, state: current })
}
