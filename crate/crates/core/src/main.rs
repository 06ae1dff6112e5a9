use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ligodunov::cli::{self, CheckOptions, Overrides};

#[derive(Parser, Debug)]
#[command(name = "ligodunov", version, about = "Locally inertial Godunov solver and weak-residual verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write its snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: config, then $LIGODUNOV_OUT_DIR, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Drop the metric-gradient correction from the ODE step.
        #[arg(long)]
        no_correction: bool,
    },
    /// Run a mesh-refinement study and fit convergence orders.
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_correction: bool,
        /// Minimum accepted slope (default: config, then 0.8).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Randomized lemma checks and model oracles.
    Check {
        #[arg(long, default_value_t = cli::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = cli::DEFAULT_CHECK_COUNT)]
        count: usize,
        #[arg(long, hide = true)]
        corrupt_average: bool,
    },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = match args.command {
        Command::Run { config, out, no_correction } => cli::cmd_run(&config, &Overrides { out, no_correction }),
        Command::Study { config, out, no_correction, threshold } => {
            cli::cmd_study(&config, &Overrides { out, no_correction }, threshold)
        }
        Command::Check { seed, count, corrupt_average } => {
            cli::cmd_check(&CheckOptions { seed, count, corrupt_average })
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    for line in &outcome.lines {
        // a closed pipe is not worth a panic
        let _ = if line.starts_with("error") { writeln!(err, "{line}") } else { writeln!(out, "{line}") };
    }
    ExitCode::from(outcome.code as u8)
}
