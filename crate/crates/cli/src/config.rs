//! Command-line and config-file settings, resolved into one
//! [`ExperimentConfig`]. Precedence: flag, then `PHOTON_WALK_OUTPUT_DIR`
//! (output directory only), then the JSON config file, then defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::initial::{parse_initial, InitialState};

pub const OUTPUT_DIR_ENV: &str = "PHOTON_WALK_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "photon-walk-out";
pub const DEFAULT_STEPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum TableSelection {
    #[value(name = "I")]
    #[serde(rename = "I")]
    One,
    #[value(name = "II")]
    #[serde(rename = "II")]
    Two,
    #[value(name = "III")]
    #[serde(rename = "III")]
    Three,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Single,
    TwoPhoton,
    Coherent,
    AsymptoticCompare,
    Tables,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Single => "single",
            Experiment::TwoPhoton => "two-photon",
            Experiment::Coherent => "coherent",
            Experiment::AsymptoticCompare => "asymptotic-compare",
            Experiment::Tables => "tables",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "photon-walk",
    version,
    about = "Quantum random walks of photons on a line"
)]
pub struct Cli {
    /// JSON file with default settings; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position distribution of one photon
    Single(RunArgs),
    /// Joint and marginal detection of two photons
    TwoPhoton(RunArgs),
    /// Normalized detection for a product coherent input
    Coherent(RunArgs),
    /// Exact against stationary-phase distributions
    AsymptoticCompare(RunArgs),
    /// Five-step reference tables with a pass/fail diff
    Tables(TableArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Directory for artifacts
    #[arg(long)]
    pub output_dir: Option<PathBuf>,

    /// Comma-separated subset of csv,json,svg
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Number of walk steps
    #[arg(long)]
    pub steps: Option<usize>,

    /// Initial state descriptor, e.g. hx+vy, psi-, coh:0.1,-0.1
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct TableArgs {
    /// Which table to reproduce
    #[arg(long, value_enum)]
    pub which: Option<TableSelection>,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Settings read from `--config`. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<Experiment>,
    pub steps: Option<usize>,
    pub initial: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub which: Option<TableSelection>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: invalid config: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub steps: usize,
    pub initial: Option<InitialState>,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
    pub which: TableSelection,
}

impl ExperimentConfig {
    /// Merges flags over the file config. `env_output_dir` is the value of
    /// [`OUTPUT_DIR_ENV`], if set.
    pub fn resolve(
        command: &Command,
        file: Option<&FileConfig>,
        env_output_dir: Option<PathBuf>,
    ) -> Result<Self> {
        let file = file.cloned().unwrap_or_default();
        let (experiment, run, table, common) = match command {
            Command::Single(a) => (Experiment::Single, Some(a), None, &a.common),
            Command::TwoPhoton(a) => (Experiment::TwoPhoton, Some(a), None, &a.common),
            Command::Coherent(a) => (Experiment::Coherent, Some(a), None, &a.common),
            Command::AsymptoticCompare(a) => {
                (Experiment::AsymptoticCompare, Some(a), None, &a.common)
            }
            Command::Tables(a) => (Experiment::Tables, None, Some(a), &a.common),
        };

        let steps = run
            .and_then(|a| a.steps)
            .or(file.steps)
            .unwrap_or(DEFAULT_STEPS);
        let descriptor = run.and_then(|a| a.initial.clone()).or(file.initial.clone());
        let which = table
            .and_then(|a| a.which)
            .or(file.which)
            .unwrap_or(TableSelection::All);
        let output_dir = common
            .output_dir
            .clone()
            .or(env_output_dir)
            .or(file.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let mut formats = common
            .format
            .clone()
            .or(file.formats.clone())
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
        formats.sort();
        formats.dedup();
        if formats.is_empty() {
            return Err(CliError::Usage(
                "at least one output format is required".into(),
            ));
        }

        let initial = match experiment {
            Experiment::Tables => {
                if file
                    .steps
                    .is_some_and(|s| s != photon_walk::golden::TABLE_STEPS)
                {
                    return Err(CliError::Usage(
                        "the reference tables are fixed at 5 steps".into(),
                    ));
                }
                None
            }
            _ => {
                let Some(d) = descriptor else {
                    return Err(CliError::Usage(format!("{experiment} needs --initial")));
                };
                let state = parse_initial(&d)?;
                let ok = matches!(
                    (experiment, &state),
                    (Experiment::Single, InitialState::Single { .. })
                        | (Experiment::TwoPhoton, InitialState::Pair(_))
                        | (Experiment::Coherent, InitialState::Coherent { .. })
                        | (Experiment::AsymptoticCompare, InitialState::Single { .. })
                        | (Experiment::AsymptoticCompare, InitialState::Pair(_))
                );
                if !ok {
                    return Err(CliError::Usage(format!(
                        "{experiment} does not accept a {} ({d})",
                        state.kind()
                    )));
                }
                Some(state)
            }
        };
        if experiment == Experiment::AsymptoticCompare && steps == 0 {
            return Err(CliError::Usage(
                "asymptotic-compare needs --steps >= 1".into(),
            ));
        }
        let steps = if experiment == Experiment::Tables {
            photon_walk::golden::TABLE_STEPS
        } else {
            steps
        };

        Ok(ExperimentConfig {
            experiment,
            steps,
            initial,
            output_dir,
            formats,
            which,
        })
    }
}
