use std::process::ExitCode;

use clap::Parser;

mod args;
mod bounds;
mod crosscheck;
mod query;

use args::{Cli, Command};

/// Exit status for a failed `--expect` or a cross-check disagreement.
const EXIT_MISMATCH: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Query(cfg) => query::run(&cfg),
        Command::Crosscheck(cfg) => crosscheck::run(&cfg),
        Command::Bounds(cfg) => bounds::run(&cfg),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
