//! The subcommands as pure functions from a configuration to a table or report.

use rayon::prelude::*;

use super::config::{format_pulse, Objective, RunConfig, SpinState};
use super::csv::{Cell, Table};
use super::presets::Preset;
use crate::bath_kernels::{KernelSet, Preparation};
use crate::disorder_ensemble::DisorderModel;
use crate::error::{invalid, Result};
use crate::optimize::{optimize_protocol, GridScale, OptimizeOutcome};
use crate::oracle::{verify, ClosedForm, VerifyConfig, VerifyReport};
use crate::pulse_algebra::{coefficients, PulseUnitary};
use crate::thermodynamics::{checked_efficiency, report, EfficiencyReport};
use crate::work_engine::{work_echo, work_echo_finite_t, work_two_pulse, WorkBreakdown};

pub const KERNEL_COLUMNS: [&str; 6] = ["t", "K", "xi", "xi_dot", "G", "F"];
pub const WORK2_COLUMNS: [&str; 12] =
    ["tau_gamma", "w", "W", "W1", "W2", "dH_S", "dH_IB", "eta", "carnot", "slack1", "slack2", "power"];
pub const ECHO3_COLUMNS: [&str; 14] = [
    "tau_gamma",
    "w",
    "W",
    "W1",
    "Wpi",
    "W2",
    "dH_S",
    "dH_IB",
    "eta",
    "carnot",
    "slack1",
    "slack2",
    "power",
    "w_two_pulse_avg",
];
pub const OPTIMIZE_COLUMNS: [&str; 9] = ["kind", "tau_gamma", "W", "w", "eta", "carnot", "p1", "p2", "no_extraction"];

// Sample times for the kernel table; t = 0 allowed.
fn kernel_times(cfg: &RunConfig) -> Result<Vec<f64>> {
    let g = cfg.grid;
    if g.count == 0 {
        return Err(invalid("grid needs at least one point"));
    }
    if !(g.start >= 0.0) || !(g.stop >= g.start) || !g.stop.is_finite() {
        return Err(invalid(format!("kernel times need 0 <= start <= stop, got [{}, {}]", g.start, g.stop)));
    }
    if g.scale == GridScale::Log && g.start == 0.0 {
        return Err(invalid("a log grid needs start > 0"));
    }
    if g.count == 1 {
        return Ok(vec![g.start]);
    }
    let n = (g.count - 1) as f64;
    Ok((0..g.count)
        .map(|i| match g.scale {
            GridScale::Linear => g.start + (g.stop - g.start) * i as f64 / n,
            GridScale::Log => g.start * (g.stop / g.start).powf(i as f64 / n),
        })
        .collect())
}

pub fn kernels(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let k = cfg.kernels()?;
    let times = kernel_times(cfg)?;
    let rows: Vec<Vec<Cell>> = times
        .par_iter()
        .map(|&t| {
            Ok(vec![
                t.into(),
                k.noise_kernel(t).into(),
                k.xi(t)?.into(),
                k.xi_dot(t)?.into(),
                k.backreaction_g(t)?.into(),
                k.backreaction_f(t)?.into(),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: KERNEL_COLUMNS.iter().map(|s| s.to_string()).collect(), rows })
}

// Bounds are theorems only for the two-temperature initial state, i.e. ergodic runs.
fn thermo(cfg: &RunConfig, b: &WorkBreakdown, spin_temperature: f64) -> Result<EfficiencyReport> {
    match cfg.prep {
        Preparation::Ergodic => checked_efficiency(b, cfg.temperature, spin_temperature),
        Preparation::Finite(_) => Ok(report(b, cfg.temperature, spin_temperature)),
    }
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

pub fn work2(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    cfg.grid.validate()?;
    cfg.prep.validate()?;
    let sys = cfg.system()?;
    let ts = cfg.spin_temperature_for(cfg.eps);
    let (p1, p2) = cfg.pulses()?;
    let (c1, c2) = (coefficients(&p1)?, coefficients(&p2)?);
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&tau| {
            let b = work_two_pulse(&sys, &c1, &c2, tau, cfg.prep)?;
            let e = thermo(cfg, &b, ts)?;
            Ok(vec![
                (tau * cfg.cutoff).into(),
                opt(b.w).into(),
                b.total.into(),
                b.per_pulse[0].into(),
                b.per_pulse[1].into(),
                b.spin_part.into(),
                b.bath_int_part.into(),
                e.eta.into(),
                e.carnot.into(),
                e.slack1.into(),
                e.slack2.into(),
                (b.total.abs() / tau).into(),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: WORK2_COLUMNS.iter().map(|s| s.to_string()).collect(), rows })
}

fn disorder(cfg: &RunConfig) -> Result<DisorderModel> {
    let omega0 = cfg.omega0();
    DisorderModel::new(omega0, cfg.disorder_var, cfg.spin_temperature_for(omega0))
}

fn echo_breakdown(cfg: &RunConfig, k: &KernelSet, dm: &DisorderModel, p1: &PulseUnitary, p2: &PulseUnitary, tau: f64) -> Result<WorkBreakdown> {
    let inputs = dm.echo_inputs()?;
    let (c1, c2) = (coefficients(p1)?, coefficients(p2)?);
    match cfg.prep {
        Preparation::Ergodic => work_echo(k, &inputs, &c1, &c2, tau),
        Preparation::Finite(t) => work_echo_finite_t(k, &inputs, &c1, &c2, tau, t),
    }
}

pub fn echo3(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    cfg.grid.validate()?;
    cfg.prep.validate()?;
    let k = cfg.kernels()?;
    let dm = disorder(cfg)?;
    let (p1, p2) = cfg.pulses()?;
    let (c1, c2) = (coefficients(&p1)?, coefficients(&p2)?);
    let g_inf = k.g_inf();
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&tau| {
            let b = echo_breakdown(cfg, &k, &dm, &p1, &p2, tau)?;
            let e = thermo(cfg, &b, dm.spin_temperature)?;
            let plain = dm.averaged_two_pulse_work(&k, &c1, &c2, tau, cfg.prep)?;
            let plain_w = if g_inf > 0.0 { 2.0 * plain / g_inf } else { f64::NAN };
            Ok(vec![
                (tau * cfg.cutoff).into(),
                opt(b.w).into(),
                b.total.into(),
                b.per_pulse[0].into(),
                b.per_pulse[1].into(),
                b.per_pulse[2].into(),
                b.spin_part.into(),
                b.bath_int_part.into(),
                e.eta.into(),
                e.carnot.into(),
                e.slack1.into(),
                e.slack2.into(),
                (b.total.abs() / tau).into(),
                plain_w.into(),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: ECHO3_COLUMNS.iter().map(|s| s.to_string()).collect(), rows })
}

/// Work objective selected by `cfg.objective`, as a function of both pulses and τ.
pub fn objective(cfg: &RunConfig) -> Result<Box<dyn Fn(&PulseUnitary, &PulseUnitary, f64) -> Result<WorkBreakdown> + Sync>> {
    cfg.validate()?;
    cfg.prep.validate()?;
    match cfg.objective {
        Objective::Work2 => {
            let sys = cfg.system()?;
            let prep = cfg.prep;
            Ok(Box::new(move |p1, p2, tau| work_two_pulse(&sys, &coefficients(p1)?, &coefficients(p2)?, tau, prep)))
        }
        Objective::Echo3 => {
            let k = cfg.kernels()?;
            let dm = disorder(cfg)?;
            let cfg = cfg.clone();
            Ok(Box::new(move |p1, p2, tau| echo_breakdown(&cfg, &k, &dm, p1, p2, tau)))
        }
    }
}

fn objective_spin_temperature(cfg: &RunConfig) -> f64 {
    match cfg.objective {
        Objective::Work2 => cfg.spin_temperature_for(cfg.eps),
        Objective::Echo3 => cfg.spin_temperature_for(cfg.omega0()),
    }
}

pub fn optimize_outcome(cfg: &RunConfig) -> Result<OptimizeOutcome> {
    let f = objective(cfg)?;
    let (p1, p2) = cfg.pulses()?;
    let total = |a: &PulseUnitary, b: &PulseUnitary, t: f64| f(a, b, t).map(|b| b.total);
    optimize_protocol(&total, &p1, &p2, &cfg.grid, cfg.full, &cfg.simplex())
}

pub fn optimize(cfg: &RunConfig) -> Result<Table> {
    let outcome = optimize_outcome(cfg)?;
    let f = objective(cfg)?;
    let ts = objective_spin_temperature(cfg);
    let mut table = Table::new(&OPTIMIZE_COLUMNS);
    for (kind, c) in [("baseline", outcome.baseline), ("best", outcome.best)] {
        let b = f(&c.p1, &c.p2, c.tau)?;
        let e = thermo(cfg, &b, ts)?;
        table.push(vec![
            kind.into(),
            (c.tau * cfg.cutoff).into(),
            b.total.into(),
            opt(b.w).into(),
            e.eta.into(),
            e.carnot.into(),
            format_pulse(&c.p1).as_str().into(),
            format_pulse(&c.p2).as_str().into(),
            if outcome.no_extraction { "true" } else { "false" }.into(),
        ]);
    }
    Ok(table)
}

/// Default oracle configuration, overridden only by keys the user actually set.
pub fn verify_config(cfg: &RunConfig) -> VerifyConfig {
    let mut v = VerifyConfig::default();
    if let Some(m) = &cfg.modes {
        v.modes = m.clone();
    }
    if cfg.cutoffs.is_some() {
        v.fock_cutoffs = cfg.cutoffs.clone();
    }
    if cfg.is_explicit("temperature") {
        v.bath_temperature = cfg.temperature;
    }
    if cfg.is_explicit("eps") {
        v.spin_gap = cfg.eps;
    }
    if cfg.is_explicit("ts") || cfg.is_explicit("sz0") {
        v.spin_temperature = match cfg.spin {
            SpinState::Temperature(ts) => ts,
            SpinState::Sz0(_) => cfg.spin_temperature_for(v.spin_gap),
        };
    }
    if cfg.is_explicit("tol") {
        v.tol = cfg.tol;
    }
    if cfg.is_explicit("seed") {
        v.seed = cfg.seed;
    }
    v
}

pub fn oracle_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    verify(&verify_config(cfg), &ClosedForm)
}

/// Runs every series of a preset on top of `base` and stacks the tables under a
/// leading `series` column. `overrides` is re-applied after each series.
pub fn preset(preset: &Preset, overrides: &dyn Fn(&mut RunConfig) -> Result<()>) -> Result<Table> {
    let mut out: Option<Table> = None;
    for s in &preset.series {
        let mut cfg = RunConfig::default();
        for (k, v) in &s.settings {
            cfg.set(k, v)?;
        }
        overrides(&mut cfg)?;
        let table = match preset.command {
            Objective::Work2 => work2(&cfg)?,
            Objective::Echo3 => echo3(&cfg)?,
        }
        .with_leading("series", &s.label);
        match &mut out {
            Some(t) => t.extend(table),
            None => out = Some(table),
        }
    }
    out.ok_or_else(|| invalid("preset has no series"))
}
