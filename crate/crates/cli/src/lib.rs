//! Command-line experiments for the photon-walk simulator: single-photon,
//! two-photon and coherent walks, exact against stationary-phase
//! comparisons, and the five-step reference tables, written as CSV, JSON
//! and SVG artifacts.

pub mod config;
pub mod error;
pub mod initial;
pub mod run;
pub mod svg;

pub use config::{Cli, Command, ExperimentConfig, FileConfig, Format, OUTPUT_DIR_ENV};
pub use error::{CliError, Result};
pub use initial::{parse_initial, InitialState};
pub use run::{run, Manifest};

/// Parses arguments, runs the experiment and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;

    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(manifest) => {
            for line in &manifest.summary {
                println!("{line}");
            }
            for path in &manifest.artifacts {
                println!("wrote {}", path.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Manifest> {
    let file = cli.config.as_deref().map(FileConfig::load).transpose()?;
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(Into::into);
    let config = ExperimentConfig::resolve(&cli.command, file.as_ref(), env_dir)?;
    run(&config)
}
