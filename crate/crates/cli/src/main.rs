//! Command-line front door: `run` plays one game from a config file,
//! `attack` runs the attack/defense pair experiment, `bench` prints
//! cost-counter tables for the sparsified pipelines, and `separation` runs
//! the oracle-cost separation simulations. Outputs are line-delimited JSON
//! records plus a human-readable summary; every command is a pure function
//! of (config, seed).

mod commands;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "robustdyn", version, about = "Adversary-game harness for robust dynamic estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one two-player game described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON Lines output path (per-step records).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV mirror of the per-step records.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Attack/defense pair experiment on the min-cut stand-in.
    Attack {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cost-counter tables: refresh speed and pipeline refresh work.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Oracle-cost separation simulations.
    Separation {
        /// Which problem: `lob` or `boxes`.
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Suffix-list exponent for lob (list size n^c).
        #[arg(long, default_value_t = 1)]
        c: u32,
        /// Chain length T for boxes.
        #[arg(long, default_value_t = 64)]
        chain_len: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, out, csv } => commands::run(&config, seed, out, csv),
        Command::Attack { config, seed, trials, out } => {
            commands::attack(config.as_deref(), seed, trials, out)
        }
        Command::Bench { config, seed, out } => commands::bench(config.as_deref(), seed, out),
        Command::Separation { problem, n, c, chain_len, trials, seed, out } => {
            commands::separation(&problem, n, c, chain_len, trials, seed, out)
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
