//! One module per subcommand. Every command receives the effective config,
//! a thread pool, and a [`RunWriter`]; it returns the verdict failures
//! (empty for everything except `scan` expectations).
//!
//! [`RunWriter`]: crate::output::RunWriter

pub mod bridge;
pub mod chaos;
pub mod levy;
pub mod norm;
pub mod probe;
pub mod sample;
pub mod scan;
pub mod tail;
pub mod wick;

use crate::config::ExperimentConfig;
use crate::errors::CliError;
use crate::output::RunWriter;

pub type CommandResult = Result<Vec<String>, CliError>;

pub fn dispatch(
    name: &str,
    config: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    writer: &mut RunWriter,
) -> CommandResult {
    match name {
        "sample" => sample::run(config, writer),
        "norm" => norm::run(config, pool, writer),
        "scan" => scan::run(config, pool, writer),
        "tail" => tail::run(config, pool, writer),
        "chaos" => chaos::run(config, pool, writer),
        "wick" => wick::run(config, writer),
        "probe" => probe::run(config, pool, writer),
        "bridge" => bridge::run(config, pool, writer),
        "levy" => levy::run(config, pool, writer),
        other => Err(CliError::config(format!("unknown subcommand {other}"))),
    }
}
