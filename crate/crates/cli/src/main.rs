//! Command-line driver: mesh inspection, element checks, single solves and
//! convergence studies.

mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Options;

#[derive(Debug, Parser)]
#[command(
    name = "nccurl",
    version,
    about = "Nonconforming tetrahedral solver for a fourth-order curl problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Print mesh statistics as JSON
    #[command(alias = "inspect")]
    Mesh,
    /// Run the element self-checks on random tets
    CheckElement,
    /// Solve on one mesh and report errors against the manufactured solution
    Solve,
    /// Solve on a sequence of meshes and tabulate errors and rates
    Convergence,
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    let config = cli.options.resolve()?;
    match cli.command {
        Command::Mesh => commands::mesh(&config),
        Command::CheckElement => commands::check(&config).map(drop),
        Command::Solve => commands::solve(&config),
        Command::Convergence => commands::convergence(&config).map(drop),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
