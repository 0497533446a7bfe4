//! Run configuration: command-line flags layered over an optional flat JSON
//! file whose keys mirror the flag names.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use aho_core::{OscillatorParams, K_MAX};

#[derive(Debug, Parser)]
#[command(name = "aho", version, about = "Anharmonic oscillator ground state by optimized delta expansion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Energy,
    ScanOmega,
    ScanMu,
    Alpha0,
    Wavefunction,
    Validate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PMS energy at one coupling next to the reference eigenvalue
    #[command(allow_negative_numbers = true)]
    Energy(Flags),
    /// Energy versus artificial frequency, one curve per order
    #[command(allow_negative_numbers = true)]
    ScanOmega(Flags),
    /// PMS and reference energies over a coupling grid
    #[command(allow_negative_numbers = true)]
    ScanMu(Flags),
    /// Strong-coupling coefficient per order
    #[command(allow_negative_numbers = true)]
    Alpha0(Flags),
    /// Reference and third/fourth-order ground-state profiles
    #[command(allow_negative_numbers = true)]
    Wavefunction(Flags),
    /// Run the invariant self-check
    #[command(allow_negative_numbers = true)]
    Validate(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Energy(f) => (CommandKind::Energy, f),
            Command::ScanOmega(f) => (CommandKind::ScanOmega, f),
            Command::ScanMu(f) => (CommandKind::ScanMu, f),
            Command::Alpha0(f) => (CommandKind::Alpha0, f),
            Command::Wavefunction(f) => (CommandKind::Wavefunction, f),
            Command::Validate(f) => (CommandKind::Validate, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Quartic coupling mu
    #[arg(long)]
    pub mu: Option<f64>,
    /// Harmonic frequency omega
    #[arg(long)]
    pub omega_phys: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Expansion order K
    #[arg(long)]
    pub order: Option<usize>,
    /// Order range `A..B` (or a single order)
    #[arg(long)]
    pub orders: Option<String>,
    /// Coupling grid `start:stop:count`
    #[arg(long)]
    pub mu_grid: Option<String>,
    /// Upper end of the artificial-frequency range
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Reference-solver tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat JSON file with the same keys as the flags; flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Flags {
    /// Fills every unset flag from `file`.
    pub fn layered_over(self, file: Flags) -> Flags {
        Flags {
            mu: self.mu.or(file.mu),
            omega_phys: self.omega_phys.or(file.omega_phys),
            hbar: self.hbar.or(file.hbar),
            mass: self.mass.or(file.mass),
            order: self.order.or(file.order),
            orders: self.orders.or(file.orders),
            mu_grid: self.mu_grid.or(file.mu_grid),
            omega_max: self.omega_max.or(file.omega_max),
            tol: self.tol.or(file.tol),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            config: self.config,
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<Flags, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: OscillatorParams,
    pub order: usize,
    pub orders: RangeInclusive<usize>,
    pub mus: Vec<f64>,
    pub omega_max: Option<f64>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn parse_orders(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("bad order range {s:?}, expected A..B or A");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn parse_mu_grid(s: &str) -> Result<Vec<f64>, String> {
    let bad = || format!("bad mu grid {s:?}, expected start:stop:count");
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() || (count == 1 && start != stop) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

impl RunConfig {
    pub fn resolve(command: CommandKind, flags: Flags) -> Result<Self, String> {
        let flags = match &flags.config {
            Some(path) => {
                let file = read_config_file(path)?;
                flags.layered_over(file)
            }
            None => flags,
        };
        let default_mu = match command {
            CommandKind::Wavefunction => 200.0,
            _ => 5.0,
        };
        let default_order = match command {
            CommandKind::Alpha0 => 8,
            CommandKind::ScanOmega | CommandKind::ScanMu => 5,
            _ => 3,
        };
        let order = flags.order.unwrap_or(default_order);
        let orders = match &flags.orders {
            Some(s) => parse_orders(s)?,
            None => match command {
                CommandKind::ScanOmega => 2.min(order)..=order,
                _ => 1.min(order)..=order,
            },
        };
        for k in [order, *orders.end()] {
            if k > K_MAX {
                return Err(format!("order {k} exceeds the maximum {K_MAX}"));
            }
        }
        if command == CommandKind::Alpha0 && *orders.start() == 0 {
            return Err("alpha0 needs orders >= 1".into());
        }
        let mus = match (flags.mu, &flags.mu_grid) {
            (Some(mu), _) if command == CommandKind::ScanMu => vec![mu],
            (_, Some(grid)) => parse_mu_grid(grid)?,
            _ => parse_mu_grid("0.1:20:40")?,
        };
        let params = OscillatorParams::new(
            flags.hbar.unwrap_or(1.0),
            flags.mass.unwrap_or(1.0),
            flags.omega_phys.unwrap_or(1.0),
            flags.mu.unwrap_or(default_mu),
        )
        .map_err(|e| e.to_string())?;
        if command == CommandKind::ScanMu {
            for &mu in &mus {
                OscillatorParams { mu, ..params }.validate().map_err(|e| e.to_string())?;
            }
        }
        let tol = flags.tol.unwrap_or(1e-8);
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(format!("tolerance must be > 0, got {tol}"));
        }
        if let Some(m) = flags.omega_max {
            if !(m > 0.0) || !m.is_finite() {
                return Err(format!("omega-max must be > 0, got {m}"));
            }
        }
        Ok(Self {
            command,
            params,
            order,
            orders,
            mus,
            omega_max: flags.omega_max,
            tol,
            out: flags.out,
            format: flags.format.unwrap_or_default(),
        })
    }
}
