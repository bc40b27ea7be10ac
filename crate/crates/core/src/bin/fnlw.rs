use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fnlw_core::cli;

/// Pseudo-spectral simulator for the 1D fractional cubic defocusing wave
/// equation on the torus.
#[derive(Parser)]
#[command(name = "fnlw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run from a JSON config file.
    Run {
        /// Path to the run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Also write the per-snapshot spectral states as a binary file.
        #[arg(long)]
        store_snapshots: bool,
    },
    /// Execute an N-sweep from a preset name or a JSON config file.
    Sweep {
        /// Preset name: pwp, norm_inflation, deterministic_wp, energy_check.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Path to a sweep configuration (JSON with `preset` plus overrides).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Use the refined discretization (τ/2, 2M) for every run.
        #[arg(long)]
        refined: bool,
        /// Also write per-run snapshot binaries.
        #[arg(long)]
        store_snapshots: bool,
    },
    /// Recompute power-law fits from a previously written summary CSV.
    Rates {
        /// Path to a summary.csv produced by `fnlw sweep`.
        #[arg(long)]
        summary: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            store_snapshots,
        } => cli::cmd_run(&config, &out, store_snapshots),
        Command::Sweep {
            preset,
            config,
            out,
            refined,
            store_snapshots,
        } => cli::cmd_sweep(
            preset.as_deref(),
            config.as_deref(),
            &out,
            refined,
            store_snapshots,
        ),
        Command::Rates { summary } => cli::cmd_rates(&summary).map(|_| ()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
