//! Experiment-runner library behind the `loopnorm` binary: configuration,
//! deterministic worker pool, output/manifest plumbing, and one module per
//! subcommand.

pub mod commands;
pub mod config;
pub mod errors;
pub mod formats;
pub mod manifest;
pub mod output;
pub mod runner;

use std::path::Path;

use config::{ExperimentConfig, Overrides};
use errors::CliError;
use output::RunWriter;

/// Load config, run one subcommand, close the manifest. Returns verdict
/// failures (scan expectations), which map to exit code 4.
pub fn execute(
    subcommand: &str,
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<Vec<String>, CliError> {
    let config = config::load(config_path, overrides)?;
    run_with_config(subcommand, &config)
}

pub fn run_with_config(
    subcommand: &str,
    config: &ExperimentConfig,
) -> Result<Vec<String>, CliError> {
    let pool = runner::build_pool(config.workers)?;
    let mut writer = RunWriter::create(&config.out, config.format)?;
    let failures = commands::dispatch(subcommand, config, &pool, &mut writer)?;
    writer.finish(subcommand, &config::config_hash(config))?;
    Ok(failures)
}
