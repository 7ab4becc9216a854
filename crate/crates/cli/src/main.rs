//! `quditstab`: reproducible experiments on qudit stabiliser states.

mod commands;
mod config;
mod output;
mod selftest;
mod states;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{LearnMode, Source, Which};
use config::{CommonArgs, ExperimentConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(quditstab::Error),
    Io(String),
}

impl From<quditstab::Error> for CliError {
    fn from(e: quditstab::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use quditstab::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::SizeGuard { .. }) => 3,
            CliError::Core(
                E::InvalidModulus(_)
                | E::InvalidParameter(_)
                | E::ResidueOutOfRange { .. }
                | E::DimensionMismatch { .. }
                | E::DependentGenerators { .. }
                | E::NonCommuting { .. }
                | E::WrongGeneratorCount { .. }
                | E::NotLagrangian,
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid config: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "quditstab", version, about = "Learning and testing qudit stabiliser states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in invariant suite
    Selftest {
        /// Inject a deliberate fault
        #[arg(long, value_enum, hide = true)]
        fault_hook: Option<selftest::Fault>,
    },
    /// Learn random hidden stabiliser states
    Learn {
        #[arg(long, value_enum, default_value = "bell")]
        mode: LearnMode,
    },
    /// Run the stabiliser-vs-Haar distinguisher
    Distinguish {
        /// Comma-separated state sources; doped is added when t > 0
        #[arg(long, value_enum, value_delimiter = ',')]
        sources: Vec<Source>,
    },
    /// Dump characteristic, involuted and Weyl distributions with Fourier images
    Distributions {
        #[arg(long)]
        state: String,
        /// Distribution written in CSV mode
        #[arg(long, value_enum, default_value = "b")]
        which: Which,
    },
    /// Brute-force stabiliser fidelity with its bounds
    Fidelity {
        #[arg(long)]
        state: String,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Command::Selftest { fault_hook } = cli.command {
        let checks = selftest::run(fault_hook);
        let width = checks.iter().map(|c| c.module.len() + c.name.len() + 2).max().unwrap_or(0);
        for c in &checks {
            let label = format!("{}: {}", c.module, c.name);
            println!("{} {label:<width$}  {}", if c.passed { "PASS" } else { "FAIL" }, c.detail);
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        println!("{} passed, {failed} failed", checks.len() - failed);
        return Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(4) });
    }
    let cfg = ExperimentConfig::resolve(&cli.common)?;
    match cli.command {
        Command::Selftest { .. } => unreachable!(),
        Command::Learn { mode } => commands::learn(&cfg, mode)?,
        Command::Distinguish { mut sources } => {
            if sources.is_empty() {
                sources = vec![Source::Stab, Source::Haar];
                if cfg.t > 0 {
                    sources.push(Source::Doped);
                }
            }
            commands::distinguish(&cfg, &sources)?
        }
        Command::Distributions { state, which } => commands::distributions(&cfg, &state, which)?,
        Command::Fidelity { state } => commands::fidelity(&cfg, &state)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
