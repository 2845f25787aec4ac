//! Command-line front end: overlap sweeps, circuit verification, T-count
//! tables and cost ratios, written as CSV or JSON.

mod commands;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use settings::Settings;
use warmstart::Error;

#[derive(Parser)]
#[command(name = "warmstart", version, about = "Warm-start state preparation for the Holstein polaron")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state overlaps of Lang-Firsov trial states along a lambda grid.
    Overlap(Settings),
    /// Simulate the preparation circuit and compare with the analytic grid state.
    CircuitVerify(Settings),
    /// T-counts of the vacuum and Lang-Firsov preparation circuits.
    Tcount(Settings),
    /// Warm-start cost ratio along a lambda grid.
    Ratio(Settings),
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) | Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_numerical(&e) {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn is_numerical(e: &Error) -> bool {
    match e {
        Error::AtLambda { source, .. } => is_numerical(source),
        Error::NotConverged { .. }
        | Error::TruncationLoss { .. }
        | Error::NoBracket
        | Error::PhaseSolver { .. }
        | Error::NonFinite { .. }
        | Error::DegeneratePolynomial
        | Error::ZeroOverlap { .. }
        | Error::LambdaUndefined => true,
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Overlap(s) => s.resolve().and_then(|s| commands::overlap(&s)),
        Command::CircuitVerify(s) => s.resolve().and_then(|s| commands::circuit_verify(&s)),
        Command::Tcount(s) => s.resolve().and_then(|s| commands::tcount(&s)),
        Command::Ratio(s) => s.resolve().and_then(|s| commands::ratio(&s)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message().replace('\n', " "));
            ExitCode::from(f.code())
        }
    }
}
