use std::path::PathBuf;
use std::process::ExitCode;

use alchemq_cli::{cmd_integrals, cmd_report, cmd_run, cmd_scan, Overrides, Result, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alchemq", version, about = "Alchemical composition search by joint variational optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the optimizer seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the shot count (0 = exact expectations).
    #[arg(long)]
    shots: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "alchemq-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the integral archive.
    Integrals(Common),
    /// Run the joint optimization and write a run directory.
    Run(Common),
    /// Exact binding energies of every composition.
    Scan(Common),
    /// Summarize a run directory.
    Report {
        /// Run directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(c: &Common) -> Result<RunConfig> {
    RunConfig::load(
        &c.config,
        Overrides {
            seed: c.seed,
            shots: c.shots,
        },
    )
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Integrals(c) => {
            let summary = cmd_integrals(&load(&c)?, &c.out)?;
            println!("basis functions: {}", summary.basis_size);
            println!("rank(S): {}", summary.rank);
            println!("archive: {}", summary.path.display());
        }
        Command::Run(c) => {
            let config = load(&c)?;
            let report = cmd_run(&config, &c.out)?;
            if !report.converged {
                eprintln!("warning: optimization did not converge");
            }
            print!("{}", cmd_report(&c.out)?.text);
        }
        Command::Scan(c) => {
            let table = cmd_scan(&load(&c)?, &c.out)?;
            print!("{}", table.to_csv());
        }
        Command::Report { out } => print!("{}", cmd_report(&out)?.text),
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
