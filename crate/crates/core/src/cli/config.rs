//! Run configuration: defaults, `key = value` files, `--set` pairs and explicit flags,
//! applied in that order.

use std::collections::BTreeSet;
use std::path::Path;

use crate::bath_kernels::{KernelSet, Mode, Preparation, SpectralDensity};
use crate::error::{Error, Result};
use crate::optimize::{GridScale, SimplexSettings, TauGrid};
use crate::pulse_algebra::{pi_pulse, rotation_pulse, Axis, PulseUnitary};
use crate::work_engine::{initial_sz, spin_temperature_from_sz, SystemConfig};

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Work2,
    Echo3,
}

/// How the initial spin state was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinState {
    Sz0(f64),
    Temperature(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub temperature: f64,
    pub spin: SpinState,
    pub eps: f64,
    pub omega0: Option<f64>,
    pub disorder_var: f64,
    pub gamma: f64,
    pub cutoff: f64,
    pub p1: String,
    pub p2: String,
    pub grid: TauGrid,
    pub prep: Preparation,
    pub modes: Option<Vec<Mode>>,
    pub cutoffs: Option<Vec<usize>>,
    pub discretize: Option<usize>,
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub simplex_tol: f64,
    pub restarts: usize,
    pub full: bool,
    pub objective: Objective,
    /// Keys set by the user rather than defaulted.
    pub explicit: BTreeSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            temperature: 10.0,
            spin: SpinState::Sz0(-0.8),
            eps: 0.01,
            omega0: None,
            disorder_var: 0.0,
            gamma: 1.0,
            cutoff: 1.0,
            p1: "rot:90:y".into(),
            p2: "rot:90:x".into(),
            grid: TauGrid::default(),
            prep: Preparation::Ergodic,
            modes: None,
            cutoffs: None,
            discretize: None,
            tol: 1e-8,
            seed: 0,
            max_iter: 2000,
            simplex_tol: 1e-12,
            restarts: 3,
            full: false,
            objective: Objective::Work2,
            explicit: BTreeSet::new(),
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| config_err(format!("{key}: expected a number, got '{value}'")))?;
    if v.is_nan() {
        return Err(config_err(format!("{key}: NaN is not allowed")));
    }
    Ok(v)
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| config_err(format!("{key}: expected a nonnegative integer, got '{value}'")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(config_err(format!("{key}: expected true or false, got '{other}'"))),
    }
}

/// "g:omega,g:omega,...".
pub fn parse_modes(value: &str) -> Result<Vec<Mode>> {
    value
        .split(',')
        .map(|item| {
            let (g, w) = item
                .split_once(':')
                .ok_or_else(|| config_err(format!("modes: expected g:omega, got '{item}'")))?;
            Ok(Mode { g: number("modes", g)?, omega: number("modes", w)? })
        })
        .collect()
}

/// "rot:<deg>:<x|y>", "euler:<phi>:<psi>:<theta>" (radians), "pi" or "id".
pub fn parse_pulse(spec: &str) -> Result<PulseUnitary> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    match parts.as_slice() {
        ["pi"] => Ok(pi_pulse()),
        ["id"] => Ok(PulseUnitary::identity()),
        ["rot", deg, axis] => {
            let axis = match *axis {
                "x" => Axis::X,
                "y" => Axis::Y,
                other => return Err(config_err(format!("pulse axis must be x or y, got '{other}'"))),
            };
            Ok(rotation_pulse(number("pulse", deg)?.to_radians(), axis))
        }
        ["euler", phi, psi, theta] => Ok(PulseUnitary::from_euler(
            number("pulse", phi)?,
            number("pulse", psi)?,
            number("pulse", theta)?,
        )),
        _ => Err(config_err(format!("unrecognized pulse '{spec}'"))),
    }
}

/// Canonical Euler string, accepted back by `parse_pulse`.
pub fn format_pulse(p: &PulseUnitary) -> String {
    let (phi, psi, theta) = p.euler_angles();
    format!("euler:{phi:.16e}:{psi:.16e}:{theta:.16e}")
}

impl RunConfig {
    /// Applies one setting; keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "temperature" | "t" => self.temperature = number(&key, v)?,
            "ts" | "spin_temperature" => self.spin = SpinState::Temperature(number(&key, v)?),
            "sz0" => self.spin = SpinState::Sz0(number(&key, v)?),
            "eps" => self.eps = number(&key, v)?,
            "omega0" => self.omega0 = Some(number(&key, v)?),
            "disorder_var" | "d" => self.disorder_var = number(&key, v)?,
            "gamma" => self.gamma = number(&key, v)?,
            "cutoff" => self.cutoff = number(&key, v)?,
            "p1" => {
                parse_pulse(v)?;
                self.p1 = v.to_string();
            }
            "p2" => {
                parse_pulse(v)?;
                self.p2 = v.to_string();
            }
            "tau_start" => self.grid.start = number(&key, v)?,
            "tau_stop" => self.grid.stop = number(&key, v)?,
            "tau_count" => self.grid.count = integer(&key, v)?,
            "tau_scale" => {
                self.grid.scale = match v {
                    "linear" => GridScale::Linear,
                    "log" => GridScale::Log,
                    other => return Err(config_err(format!("tau_scale must be linear or log, got '{other}'"))),
                }
            }
            "prep" => {
                self.prep = if v == "ergodic" { Preparation::Ergodic } else { Preparation::Finite(number(&key, v)?) }
            }
            "modes" => self.modes = Some(parse_modes(v)?),
            "cutoffs" => {
                self.cutoffs = Some(v.split(',').map(|c| integer("cutoffs", c)).collect::<Result<_>>()?)
            }
            "discretize" => self.discretize = Some(integer(&key, v)?),
            "tol" => self.tol = number(&key, v)?,
            "seed" => self.seed = integer(&key, v)?,
            "max_iter" => self.max_iter = integer(&key, v)?,
            "simplex_tol" => self.simplex_tol = number(&key, v)?,
            "restarts" => self.restarts = integer(&key, v)?,
            "full" => self.full = boolean(&key, v)?,
            "objective" => {
                self.objective = match v {
                    "work2" => Objective::Work2,
                    "echo3" => Objective::Echo3,
                    other => return Err(config_err(format!("objective must be work2 or echo3, got '{other}'"))),
                }
            }
            other => return Err(config_err(format!("unknown key '{other}'"))),
        }
        let canonical = match key.as_str() {
            "t" => "temperature",
            "spin_temperature" => "ts",
            "d" => "disorder_var",
            k => k,
        };
        self.explicit.insert(canonical.to_string());
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v).map_err(|e| config_err(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(key)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.simplex_tol > 0.0) {
            return Err(config_err("tolerances must be > 0"));
        }
        if let SpinState::Sz0(s) = self.spin {
            if !(-1.0..=0.0).contains(&s) {
                return Err(config_err(format!("sz0 must lie in [-1, 0], got {s}")));
            }
        }
        if let SpinState::Temperature(ts) = self.spin {
            if !(ts >= 0.0) {
                return Err(config_err(format!("ts must be >= 0, got {ts}")));
            }
        }
        if let (Some(m), Some(c)) = (&self.modes, &self.cutoffs) {
            if m.len() != c.len() {
                return Err(config_err(format!("{} cutoffs for {} modes", c.len(), m.len())));
            }
        }
        Ok(())
    }

    pub fn spectral(&self) -> Result<SpectralDensity> {
        match (&self.modes, self.discretize) {
            (Some(m), _) => SpectralDensity::discrete(m.clone()),
            (None, Some(n)) => SpectralDensity::discretize_ohmic(self.gamma, self.cutoff, n),
            (None, None) => SpectralDensity::ohmic(self.gamma, self.cutoff),
        }
    }

    pub fn kernels(&self) -> Result<KernelSet> {
        KernelSet::new(self.spectral()?, self.temperature)
    }

    /// ⟨σ_z⟩ of a spin with gap `gap`.
    pub fn sz0_for(&self, gap: f64) -> f64 {
        match self.spin {
            SpinState::Sz0(s) => s,
            SpinState::Temperature(ts) => initial_sz(gap, ts),
        }
    }

    /// Spin temperature for a spin with gap `gap`.
    pub fn spin_temperature_for(&self, gap: f64) -> f64 {
        match self.spin {
            SpinState::Sz0(s) => spin_temperature_from_sz(gap, s),
            SpinState::Temperature(ts) => ts,
        }
    }

    pub fn system(&self) -> Result<SystemConfig> {
        SystemConfig::new(self.kernels()?, self.eps, self.sz0_for(self.eps))
    }

    pub fn omega0(&self) -> f64 {
        self.omega0.unwrap_or(self.eps)
    }

    pub fn pulses(&self) -> Result<(PulseUnitary, PulseUnitary)> {
        Ok((parse_pulse(&self.p1)?, parse_pulse(&self.p2)?))
    }

    pub fn simplex(&self) -> SimplexSettings {
        SimplexSettings {
            max_iterations: self.max_iter,
            tolerance: self.simplex_tol,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}
