use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fif_cli::commands;
use fif_cli::CliError;

#[derive(Parser)]
#[command(name = "fif", version, about = "Hidden-variable fractal interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the IFS hypotheses
    Verify(Args),
    /// Compute the interpolant by fixed-point iteration
    Solve(Args),
    /// Sample the attractor by Hutchinson iteration and the chaos game
    Attractor(Args),
    /// Estimate box dimension and Holder exponent from samples.csv
    Analyze(Args),
    /// Run every stage
    All(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML run configuration
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides output.dir
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for all randomized steps; overrides seed
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

type Stage = fn(&commands::Run) -> Result<(), CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, f): (Args, Stage) = match cli.command {
        Command::Verify(a) => (a, commands::cmd_verify),
        Command::Solve(a) => (a, commands::cmd_solve),
        Command::Attractor(a) => (a, commands::cmd_attractor),
        Command::Analyze(a) => (a, commands::cmd_analyze),
        Command::All(a) => (a, commands::cmd_all),
    };
    let run = commands::load_run(&args.config, args.out, args.seed)?;
    f(&run)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
