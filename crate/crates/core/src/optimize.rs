//! Derivative-free minimization of the work: golden-section search in τ and a
//! restarted Nelder-Mead simplex over both pulses' Euler angles plus ln τ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::pulse_algebra::PulseUnitary;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl Default for TauGrid {
    /// τ ∈ (0, 20], 2000 linear points.
    fn default() -> Self {
        TauGrid { start: 0.01, stop: 20.0, count: 2000, scale: GridScale::Linear }
    }
}

impl TauGrid {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(invalid("tau grid needs at least one point"));
        }
        if !(self.start > 0.0) || !(self.stop >= self.start) || !self.stop.is_finite() {
            return Err(invalid(format!("tau grid needs 0 < start <= stop, got [{}, {}]", self.start, self.stop)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                match self.scale {
                    GridScale::Linear => self.start + (self.stop - self.start) * f,
                    GridScale::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}

/// Minimizes a unimodal `f` on [a, b] to absolute width `tol`.
pub fn golden_section(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Grid scan followed by golden-section refinement around the best grid point.
/// Never returns a value above the grid minimum.
pub fn minimize_over_tau(mut f: impl FnMut(f64) -> Result<f64>, grid: &[f64]) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(invalid("empty tau grid"));
    }
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let (i, &best) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is not empty");
    if grid.len() < 3 {
        return Ok((grid[i], best));
    }
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, fx) = golden_section(&mut f, lo, hi, 1e-10 * hi.abs().max(1.0))?;
    Ok(if fx < best { (x, fx) } else { (grid[i], best) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexSettings {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SimplexSettings {
    fn default() -> Self {
        SimplexSettings { max_iterations: 2000, tolerance: 1e-12, restarts: 3, seed: 0 }
    }
}

fn nelder_mead(f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64], step: f64, settings: &SimplexSettings) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..settings.max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if (values[n] - values[0]).abs() <= settings.tolerance * (1.0 + values[0].abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|j| centroid[j] + t * (simplex[n][j] - centroid[j])).collect() };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { along(-0.5) } else { along(0.5) };
            let fc = f(&contracted);
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<f64> = (0..n).map(|j| simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j])).collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("simplex is not empty");
    (simplex[best].clone(), values[best])
}

/// Restarted simplex; each restart perturbs the incumbent with the seeded generator.
/// The result is never worse than `f(x0)`.
pub fn minimize_simplex(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, settings: &SimplexSettings) -> (Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut start = x0.to_vec();
    for round in 0..=settings.restarts {
        let (x, fx) = nelder_mead(&mut f, &start, step, settings);
        let improved = fx < best_f - settings.tolerance * (1.0 + best_f.abs());
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
        if round > 0 && !improved {
            break;
        }
        start = best_x.iter().map(|v| v + rng.random_range(-0.5..0.5) * step).collect();
    }
    (best_x, best_f)
}

/// One evaluated protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub tau: f64,
    pub p1: PulseUnitary,
    pub p2: PulseUnitary,
    pub work: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    /// Fixed pulses, τ refined.
    pub baseline: Candidate,
    /// Best found, ≤ baseline in work.
    pub best: Candidate,
    /// Minimum work is nonnegative: nothing to extract.
    pub no_extraction: bool,
}

/// Minimizes `objective(p1, p2, τ)`: first over τ with the given pulses, then
/// optionally over all pulse angles and τ jointly, τ kept inside the grid range.
pub fn optimize_protocol(
    objective: &(dyn Fn(&PulseUnitary, &PulseUnitary, f64) -> Result<f64> + Sync),
    p1: &PulseUnitary,
    p2: &PulseUnitary,
    grid: &TauGrid,
    full: bool,
    settings: &SimplexSettings,
) -> Result<OptimizeOutcome> {
    grid.validate()?;
    let points = grid.points();
    let (tau, work) = minimize_over_tau(|t| objective(p1, p2, t), &points)?;
    let baseline = Candidate { tau, p1: *p1, p2: *p2, work };
    let mut best = baseline;
    if full {
        let (a1, b1, c1) = p1.euler_angles();
        let (a2, b2, c2) = p2.euler_angles();
        let x0 = [a1, b1, c1, a2, b2, c2, tau.ln()];
        let (lo, hi) = (grid.start.ln(), grid.stop.ln());
        let decode = |x: &[f64]| {
            (PulseUnitary::from_euler(x[0], x[1], x[2]), PulseUnitary::from_euler(x[3], x[4], x[5]), x[6].exp())
        };
        let f = |x: &[f64]| -> f64 {
            if x[6] < lo || x[6] > hi {
                return f64::INFINITY;
            }
            let (q1, q2, t) = decode(x);
            objective(&q1, &q2, t).unwrap_or(f64::INFINITY)
        };
        let (x, fx) = minimize_simplex(f, &x0, 0.3, settings);
        if fx < best.work {
            let (q1, q2, t) = decode(&x);
            best = Candidate { tau: t, p1: q1, p2: q2, work: fx };
        }
    }
    Ok(OptimizeOutcome { baseline, best, no_extraction: best.work >= 0.0 })
}
