//! Command-line front end for cover-metric array LRCs.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "cover-lrc",
    version,
    about = "Locally repairable array codes in the cover metric"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block and cover Singleton-like bounds, and whether the construction meets them
    Bound(ExperimentConfig),
    /// Encode a random message, corrupt whole lines, decode
    Roundtrip(RoundtripArgs),
    /// Exact probability that t random lines are locally decodable
    Plocal(ExperimentConfig),
    /// Monte Carlo estimate of the same probability
    Simulate(SimulateArgs),
    /// Cross-check fast routines against brute-force oracles
    Verify(ExperimentConfig),
}

#[derive(Args)]
struct RoundtripArgs {
    #[command(flatten)]
    cfg: ExperimentConfig,
    /// Rows to corrupt, 1-based, comma separated
    #[arg(long, value_delimiter = ',')]
    rows: Vec<usize>,
    /// Columns to corrupt, 1-based, comma separated
    #[arg(long, value_delimiter = ',')]
    cols: Vec<usize>,
    /// Corrupt this many uniformly chosen lines instead
    #[arg(long, conflicts_with_all = ["rows", "cols"])]
    random_lines: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    cfg: ExperimentConfig,
    /// Also run local repair on every erasure trial
    #[arg(long)]
    decode: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(cfg) => cfg.load().and_then(|c| commands::bound(&c)),
        Command::Roundtrip(a) => a
            .cfg
            .load()
            .and_then(|c| commands::roundtrip(&c, &a.rows, &a.cols, a.random_lines)),
        Command::Plocal(cfg) => cfg.load().and_then(|c| commands::plocal(&c)),
        Command::Simulate(a) => a.cfg.load().and_then(|c| commands::simulate(&c, a.decode)),
        Command::Verify(cfg) => cfg.load().and_then(|c| commands::verify(&c)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
