//! Command-line front end: parameter sweeps, protocol optimization, figure presets and
//! the oracle check, all written as CSV (or a text report for the oracle).

pub mod commands;
pub mod config;
pub mod csv;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "spinwork", version, about = "Work extraction from a pulsed spin coupled to a bosonic bath")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bath kernels K, ξ, ξ̇, G, F on the time grid.
    Kernels,
    /// Two-pulse work sweep over τ.
    Work2,
    /// Spin-echo work sweep over τ, disorder averaged.
    Echo3,
    /// Minimize the work over τ and, with --full, over both pulses.
    Optimize,
    /// Compare the closed forms with the finite-bath simulation.
    OracleVerify,
    /// Reproduce one of the figure settings fig1..fig6.
    Preset { name: String },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// KEY=VALUE, repeatable; applied after --config.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bath temperature T.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub temperature: Option<f64>,
    /// Spin temperature T_S (alternative to --sz0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ts: Option<f64>,
    /// Initial ⟨σ_z⟩.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sz0: Option<f64>,
    /// Spin gap ε.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Mean gap Ω₀ of the disordered ensemble (defaults to ε).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    /// Gap variance d of the ensemble.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub disorder_var: Option<f64>,
    /// Ohmic coupling γ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Ohmic cutoff Γ_c.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub cutoff: Option<f64>,
    /// First pulse: rot:<deg>:<x|y>, euler:<phi>:<psi>:<theta>, pi or id.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p1: Option<String>,
    /// Last pulse, same syntax as --p1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau_start: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau_stop: Option<f64>,
    #[arg(long, global = true)]
    pub tau_count: Option<usize>,
    /// linear or log.
    #[arg(long, global = true)]
    pub tau_scale: Option<String>,
    /// Preparation: "ergodic" or a finite time t.
    #[arg(long, global = true)]
    pub prep: Option<String>,
    /// Discrete bath "g:omega,g:omega,..." instead of the ohmic density.
    #[arg(long, global = true)]
    pub modes: Option<String>,
    /// Fock cutoffs per mode for the oracle, comma separated.
    #[arg(long, global = true)]
    pub cutoffs: Option<String>,
    /// Oracle tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Optimize over pulse angles as well as τ.
    #[arg(long, global = true)]
    pub full: bool,
    /// Objective for `optimize`: work2 or echo3.
    #[arg(long, global = true)]
    pub objective: Option<String>,
}

impl Overrides {
    /// Config file, then `--set` pairs, then individual flags.
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for pair in &self.set {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{pair}'")))?;
            cfg.set(k, v)?;
        }
        let numbers = [
            ("temperature", self.temperature),
            ("ts", self.ts),
            ("sz0", self.sz0),
            ("eps", self.eps),
            ("omega0", self.omega0),
            ("disorder_var", self.disorder_var),
            ("gamma", self.gamma),
            ("cutoff", self.cutoff),
            ("tau_start", self.tau_start),
            ("tau_stop", self.tau_stop),
            ("tol", self.tol),
        ];
        for (k, v) in numbers {
            if let Some(v) = v {
                cfg.set(k, &v.to_string())?;
            }
        }
        let texts = [
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("tau_scale", &self.tau_scale),
            ("prep", &self.prep),
            ("modes", &self.modes),
            ("cutoffs", &self.cutoffs),
            ("objective", &self.objective),
        ];
        for (k, v) in texts {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        if let Some(n) = self.tau_count {
            cfg.set("tau_count", &n.to_string())?;
        }
        if let Some(s) = self.seed {
            cfg.set("seed", &s.to_string())?;
        }
        if self.full {
            cfg.set("full", "true")?;
        }
        Ok(())
    }
}

/// What a successful invocation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    /// False when the oracle reports a strict failure.
    pub passed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let build = || -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        cli.overrides.apply(&mut cfg)?;
        Ok(cfg)
    };
    let table = match &cli.command {
        Command::Kernels => commands::kernels(&build()?)?,
        Command::Work2 => commands::work2(&build()?)?,
        Command::Echo3 => commands::echo3(&build()?)?,
        Command::Optimize => commands::optimize(&build()?)?,
        Command::OracleVerify => {
            let report = commands::oracle_verify(&build()?)?;
            return Ok(Outcome { text: report.render(), passed: report.strict_passed() });
        }
        Command::Preset { name } => {
            let preset = presets::lookup(name).ok_or_else(|| {
                Error::Config(format!("unknown preset '{name}', expected one of {}", presets::NAMES.join(", ")))
            })?;
            commands::preset(&preset, &|cfg| cli.overrides.apply(cfg))?
        }
    };
    Ok(Outcome { text: table.render(), passed: true })
}

/// 2 for bad input, 1 for a failed computation or a violated bound.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::Domain(_)
        | Error::DimensionMismatch(_)
        | Error::CutoffTooSmall(_)
        | Error::UnsupportedSpectrum(_)
        | Error::NotUnitary { .. } => 2,
        _ => 1,
    }
}

/// Parses `args`, runs, writes the output and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    match &cli.overrides.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{}", outcome.text),
    }
    if outcome.passed {
        0
    } else {
        1
    }
}
