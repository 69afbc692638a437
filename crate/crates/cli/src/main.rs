//! `qgames`: experiment runner for the quantized-game engine.
//!
//! Subcommands: pennyflip | mg-sweep-n | mg-decoherence | mg-entanglement |
//! mg-classical | rps | certify. Every run is fully determined by the
//! resolved configuration and the seed; sweep points run concurrently up to
//! `--jobs` but rows are emitted in grid order, so outputs are
//! byte-reproducible.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure in the core,
//! 3 certification failure from `certify`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use output::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "qgames", version, about = "Quantized-game experiment runner")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Table output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Worker threads for sweep points.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// JSON config file mirroring the flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Penny flip across a grid of P's flip probabilities
    Pennyflip {
        /// Grid points for the flip probability a in [0, 1]
        #[arg(long)]
        a_points: Option<usize>,
        /// Q's repeated move: hadamard | identity
        #[arg(long)]
        q_strategy: Option<String>,
    },
    /// Quantum NE vs classical Minority payoffs across even player counts
    MgSweepN {
        /// Comma-separated even player counts
        #[arg(long, value_delimiter = ',')]
        players: Option<Vec<usize>>,
    },
    /// Four-player NE payoff as a function of decoherence probability
    MgDecoherence {
        #[arg(long)]
        players: Option<usize>,
        /// bit_flip | phase_flip | bit_phase_flip | depolarizing |
        /// phase_damping | amplitude_damping
        #[arg(long)]
        channel: Option<String>,
        /// Grid points for p in [0, 1]
        #[arg(long)]
        p_points: Option<usize>,
    },
    /// Four-player NE payoff as a function of the entangling parameter
    MgEntanglement {
        #[arg(long)]
        players: Option<usize>,
        /// Grid points for gamma in [0, pi/2]
        #[arg(long)]
        gamma_points: Option<usize>,
    },
    /// Classical agent-based Minority game sweep over memory lengths
    MgClassical {
        /// Number of agents (odd)
        #[arg(long)]
        agents: Option<usize>,
        /// Comma-separated memory lengths
        #[arg(long, value_delimiter = ',')]
        memory: Option<Vec<usize>>,
        /// Strategies per agent
        #[arg(long)]
        strategies: Option<usize>,
        /// Measured steps after burn-in
        #[arg(long)]
        steps: Option<usize>,
        /// Burn-in steps; default scales with memory
        #[arg(long)]
        burn_in: Option<usize>,
        /// Number of seeds per memory value
        #[arg(long)]
        seeds: Option<usize>,
        /// History symbol: popular | winning
        #[arg(long)]
        history_mode: Option<String>,
        /// Emit the per-step series (t, attendance, winning_side) instead
        /// of the sweep table; needs exactly one memory value
        #[arg(long)]
        series: bool,
    },
    /// Coordinated rock-paper-scissors Monte Carlo
    Rps {
        /// entangled | independent
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Nash certification of a Minority-game profile
    Certify {
        #[arg(long)]
        players: Option<usize>,
        /// Entangling parameter in radians
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        channel: Option<String>,
        /// Decoherence probability applied at both noise slots
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// ne | identity | custom
        #[arg(long)]
        profile: Option<String>,
        /// NE family member index (profile = ne)
        #[arg(long)]
        member: Option<usize>,
        /// Custom symmetric strategy angles (profile = custom)
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
}

/// Error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qgames::Error> for CliError {
    fn from(err: qgames::Error) -> Self {
        match err {
            // Bad arguments reaching the core come back as usage errors;
            // the rest indicate a numerical invariant violation.
            qgames::Error::InvalidParameter(_) | qgames::Error::QubitOutOfRange { .. } => {
                CliError::usage(err.to_string())
            }
            _ => CliError::numerical(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {err}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::usage(format!("csv error: {err}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::usage(format!("json error: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
