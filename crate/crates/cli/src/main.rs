use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gravphase_cli::{commands, output, verify, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "gravphase", version, about = "Falling and inertial matter-wave simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file (CSV for evolve/interfere, JSON summary for verify).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the configured seed for randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Moments against time from the analytic and split-step backends.
    Evolve(Common),
    /// Interference records for the configured time list.
    Interfere(Common),
    /// Runs every oracle and property check; exits 1 on any failure.
    Verify(Common),
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Evolve(common) => {
            let cfg = load(&common)?;
            output::write_file(&common.out, &commands::evolve(&cfg)?)?;
        }
        Command::Interfere(common) => {
            let cfg = load(&common)?;
            output::write_file(&common.out, &commands::interfere(&cfg)?)?;
        }
        Command::Verify(common) => {
            let cfg = load(&common)?;
            let report = verify::run(&cfg);
            print!("{}", report.text());
            output::write_file(&common.out, report.json().as_bytes())?;
            if !report.all_passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
