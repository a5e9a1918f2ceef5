//! Batch runner for the auction simulator: resolves an experiment config,
//! runs seeded trials and renders a table of estimates beside their exact
//! predictions.

pub mod commands;
pub mod config;
pub mod report;
pub mod reproduce;

use std::path::Path;

pub use config::{ExperimentConfig, Format, Kind, Overrides};
pub use report::{Report, ReportRow, COLUMNS};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad flags, config or names. Exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qsba_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Core(qsba_core::Error::InvalidConfig(_)) => 2,
            _ => 1,
        }
    }
}

/// Caps the rayon pool at `QSBA_WORKERS` threads when that variable is set.
pub fn configure_workers() -> Result<(), HarnessError> {
    let Ok(v) = std::env::var("QSBA_WORKERS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| HarnessError::Usage(format!("QSBA_WORKERS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HarnessError::Io(e.to_string()))
}

/// Runs the experiment described by `c`.
pub fn run(c: &ExperimentConfig) -> Result<Report, HarnessError> {
    match c.kind {
        Some(Kind::Attack) => commands::run_attack(c),
        Some(Kind::Protocol) => commands::run_protocol(c),
        Some(Kind::Bounds) => commands::run_bounds(c),
        Some(Kind::Reproduce) => reproduce::reproduce(c.seed),
        None => Err(HarnessError::Usage("no command given".into())),
    }
}

/// Writes the rendered report to `out`, or to stdout when absent.
pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<(), HarnessError> {
    let text = report.render(format)?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| HarnessError::Io(e.to_string()))
        }
    }
}
