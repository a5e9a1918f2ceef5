use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsba_harness::{configure_workers, emit, run, ExperimentConfig, HarnessError, Kind, Overrides};

#[derive(Parser)]
#[command(name = "qsba", version, about = "Seeded experiments on quantum and semi-quantum sealed-bid auctions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one attack and compare it with its exact predictions.
    Attack {
        /// Attack name, e.g. `majority`, `usd`, `cnot`, `swap`.
        name: Option<String>,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Run honest sessions of a protocol: liu, zhang1, zhang2, sqsba or all.
    Protocol {
        variant: Option<String>,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Tail bounds on majority-vote success.
    Bounds {
        #[command(flatten)]
        flags: Overrides,
    },
    /// Run every acceptance check and print one consolidated table.
    Reproduce {
        #[command(flatten)]
        flags: Overrides,
    },
}

fn execute(cli: Cli) -> Result<bool, HarnessError> {
    let (kind, target, flags) = match cli.command {
        Command::Attack { name, flags } => (Kind::Attack, name, flags),
        Command::Protocol { variant, flags } => (Kind::Protocol, variant, flags),
        Command::Bounds { flags } => (Kind::Bounds, None, flags),
        Command::Reproduce { flags } => (Kind::Reproduce, None, flags),
    };
    let config = ExperimentConfig::resolve(kind, target, &flags)?;
    configure_workers()?;
    let report = run(&config)?;
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    emit(&report, config.format, config.out.as_deref())?;
    let failed: Vec<&str> = report.rows.iter().filter(|r| !r.pass).map(|r| r.metric.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("failed: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
