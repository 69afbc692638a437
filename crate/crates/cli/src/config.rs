//! Config-file support: a JSON document whose fields mirror the CLI flags.
//! Explicit flags always win over file values; defaults apply last.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::output::OutputFormat;
use crate::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional experiment name; when present it must match the invoked
    /// subcommand.
    pub experiment: Option<String>,

    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,

    // pennyflip
    pub a_points: Option<usize>,
    pub q_strategy: Option<String>,

    // quantum Minority sweeps
    pub players: Option<usize>,
    pub player_list: Option<Vec<usize>>,
    pub gamma: Option<f64>,
    pub channel: Option<String>,
    pub p: Option<f64>,
    pub p_points: Option<usize>,
    pub gamma_points: Option<usize>,

    // classical Minority game
    pub agents: Option<usize>,
    pub memory: Option<Vec<usize>>,
    pub strategies: Option<usize>,
    pub steps: Option<usize>,
    pub burn_in: Option<usize>,
    pub seeds: Option<usize>,
    pub history_mode: Option<String>,
    pub series: Option<bool>,

    // rps
    pub mode: Option<String>,
    pub rounds: Option<usize>,

    // certify
    pub epsilon: Option<f64>,
    pub profile: Option<String>,
    pub member: Option<usize>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn check_experiment(&self, invoked: &str) -> Result<(), CliError> {
        if let Some(name) = &self.experiment {
            if name != invoked {
                return Err(CliError::usage(format!(
                    "config is for experiment '{name}' but '{invoked}' was invoked"
                )));
            }
        }
        Ok(())
    }
}

/// flag value, else config value, else default.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// flag value, else config value.
pub fn pick_opt<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
