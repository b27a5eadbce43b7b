use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "olt", version, about = "Bell tests through operationally local transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario at its explicit settings and report the verdict.
    Run { file: PathBuf },
    /// Search for the measurement angles maximizing the functional.
    Optimize {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Defaults to the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate the two-party correlator over an angle grid as CSV.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare full simulation with the factorized correlator on random inputs.
    Verify {
        #[arg(long)]
        parties: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn execute(cmd: Command) -> Result<(String, bool)> {
    match cmd {
        Command::Run { file } => Ok((olt_cli::run_report(&olt_cli::load_scenario(&file)?)?, true)),
        Command::Optimize { file, restarts, seed } => {
            let sc = olt_cli::load_scenario(&file)?;
            let seed = seed.unwrap_or(sc.seed);
            Ok((olt_cli::optimize_report(&sc, restarts, seed)?, true))
        }
        Command::Sweep { file, grid, out } => {
            let csv = olt_cli::sweep_csv(&olt_cli::load_scenario(&file)?, grid)?;
            std::fs::write(&out, &csv).with_context(|| format!("cannot write {}", out.display()))?;
            let rows = csv.lines().count() - 1;
            Ok((format!("wrote {rows} rows to {}\n", out.display()), true))
        }
        Command::Verify { parties, trials, seed } => olt_cli::verify_report(parties, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((text, ok)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            let _ = stdout.flush();
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
