//! `serrin`: shape-optimization runs, closed-form verification and the
//! disk baseline.

mod baseline;
mod config;
mod optimize;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "serrin", version, about = "Counterexamples to Serrin-type symmetry: optimize, verify, baseline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command.
#[derive(Args, Clone, Debug, Default)]
pub struct Shared {
    /// Cells per axis of the level-set grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Target area of the domain.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration cap of the optimizer.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Steiner-symmetrize every k iterations (0 = never).
    #[arg(long)]
    pub symmetrize_every: Option<usize>,
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize the Dirichlet energy at fixed area inside the box and report on the free boundary.
    Optimize(optimize::OptimizeArgs),
    /// Check the closed-form radial solutions in the given dimensions.
    Verify(verify::VerifyArgs),
    /// Compare finite elements with the exact disk solution over several grids.
    Baseline(baseline::BaselineArgs),
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Passed,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Optimize(a) => optimize::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Baseline(a) => baseline::run(a),
    };
    match result {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
