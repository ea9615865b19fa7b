use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loopnorm::config::{Overrides, TableFormat};

/// Deterministic experiment runner for Brownian-loop spectral statistics.
///
/// Every run writes tables (CSV by default), a JSON summary, and a
/// `manifest.json` with content digests into `--out`. Identical
/// configurations produce byte-identical table bodies for any worker count.
#[derive(Parser)]
#[command(name = "loopnorm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; flags and environment override its fields
    /// (precedence: flag > env > file > default).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed.
    #[arg(long, global = true, env = "LOOPNORM_SEED")]
    seed: Option<u64>,

    /// Worker threads (0 = one per CPU); outputs do not depend on it.
    #[arg(long, global = true, env = "LOOPNORM_WORKERS")]
    workers: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, env = "LOOPNORM_OUT")]
    out: Option<PathBuf>,

    /// Table format.
    #[arg(long, global = true, env = "LOOPNORM_FORMAT", value_enum)]
    format: Option<TableFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one sampled spectral path.
    Sample,
    /// Evaluate norm specs on replica paths.
    Norm,
    /// Regularity grid over (s, N) with convergence verdicts.
    Scan,
    /// Monte Carlo tail exceedance curve with Gaussian-exponent fit.
    Tail,
    /// Resonance decompositions and hypercontractivity ratios.
    Chaos,
    /// Hermite and Wick-ordering tables.
    Wick,
    /// Measurable-seminorm probe over projection cutoffs.
    Probe,
    /// Bridge sampling and spectral cross-validation.
    Bridge,
    /// Modulus-of-continuity ratio experiment.
    Levy,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Norm => "norm",
            Command::Scan => "scan",
            Command::Tail => "tail",
            Command::Chaos => "chaos",
            Command::Wick => "wick",
            Command::Probe => "probe",
            Command::Bridge => "bridge",
            Command::Levy => "levy",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        workers: cli.workers,
        out: cli.out.clone(),
        format: cli.format,
    };
    match loopnorm::execute(cli.command.name(), cli.config.as_deref(), &overrides) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            let err = loopnorm::errors::CliError::Verdict(failures.join("; "));
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
