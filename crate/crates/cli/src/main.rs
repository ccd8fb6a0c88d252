mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;

/// WENO reconstruction tables, accuracy studies and a 1D conservation-law solver.
#[derive(Parser)]
#[command(name = "oweno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the exact coefficient tables for one r and data mode.
    Tables(RunConfig),
    /// Reconstruction error at a critical point of order k, per variant.
    OrderStudy(RunConfig),
    /// Reconstruction error next to a jump.
    DiscStudy(RunConfig),
    /// Run the solver on one problem and dump the solution.
    Solve(RunConfig),
    /// Grid-refinement errors and rates against the exact solution.
    Convergence(RunConfig),
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Tables(c) => commands::tables(&c.resolve()?),
        Command::OrderStudy(c) => commands::smooth_study(&c.resolve()?),
        Command::DiscStudy(c) => commands::disc_study(&c.resolve()?),
        Command::Solve(c) => commands::solve_cmd(&c.resolve()?),
        Command::Convergence(c) => commands::convergence(&c.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
