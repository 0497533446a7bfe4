mod config;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use aho_core::report::{alpha0_table, energy_table, scan_mu_table, scan_omega_table, wavefunction_table, Table};
use aho_core::validate::{checks_table, run_checks};
use aho_core::Error;

use config::{Cli, CommandKind, Format, RunConfig};

const SCAN_POINTS: usize = 201;
const WAVEFUNCTION_ROWS: usize = 401;

enum Failure {
    Config(String),
    Numerical(Error),
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Validation(_) => 4,
            Failure::Io(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Config(_) => "config",
            Failure::Numerical(_) => "numerical",
            Failure::Validation(_) => "validation",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(m) | Failure::Validation(m) | Failure::Io(m) => m.clone(),
            Failure::Numerical(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::NotReduced { .. } | Error::Frequency { .. } | Error::OrderOutOfRange { .. } => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Numerical(e),
        }
    }
}

/// The table to emit plus the names of any failed self-checks.
fn build(cfg: &RunConfig) -> Result<(Table, Vec<&'static str>), Failure> {
    let table = match cfg.command {
        CommandKind::Energy => energy_table(&cfg.params, cfg.order, cfg.tol)?,
        CommandKind::ScanOmega => scan_omega_table(&cfg.params, cfg.orders.clone(), cfg.omega_max, SCAN_POINTS)?,
        CommandKind::ScanMu => scan_mu_table(&cfg.params, &cfg.mus, cfg.orders.clone(), cfg.tol)?,
        CommandKind::Alpha0 => alpha0_table(cfg.orders.clone(), cfg.tol)?,
        CommandKind::Wavefunction => wavefunction_table(&cfg.params, cfg.tol, WAVEFUNCTION_ROWS)?,
        CommandKind::Validate => {
            let checks = run_checks(cfg.tol);
            let failed = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            return Ok((checks_table(&checks), failed));
        }
    };
    Ok((table, Vec::new()))
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (kind, flags) = cli.command.split();
    let cfg = RunConfig::resolve(kind, flags).map_err(Failure::Config)?;
    let (table, failed) = build(&cfg)?;
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &cfg.out {
        Some(path) => write_atomic(path, &text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write stdout: {e}")))?,
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let record = json!({ "error": "config", "message": e.to_string().trim_end() });
            eprintln!("{record}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind(), "message": f.message() }));
            ExitCode::from(f.code())
        }
    }
}
