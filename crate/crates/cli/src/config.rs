//! Experiment configuration: JSON config files, environment variables, and
//! command-line flags merged with precedence flag > env > file > default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::errors::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed; every replica derives from it deterministically.
    pub seed: u64,
    /// Worker threads (0 = one per CPU). A performance knob only: outputs
    /// are byte-identical for any value.
    pub workers: usize,
    pub out: PathBuf,
    pub format: TableFormat,
    pub sample: SampleConfig,
    pub norm: NormCommandConfig,
    pub scan: ScanConfig,
    pub tail: TailCommandConfig,
    pub chaos: ChaosConfig,
    pub wick: WickConfig,
    pub probe: ProbeConfig,
    pub bridge: BridgeConfig,
    pub levy: LevyConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: 0,
            out: PathBuf::from("runs"),
            format: TableFormat::Csv,
            sample: SampleConfig::default(),
            norm: NormCommandConfig::default(),
            scan: ScanConfig::default(),
            tail: TailCommandConfig::default(),
            chaos: ChaosConfig::default(),
            wick: WickConfig::default(),
            probe: ProbeConfig::default(),
            bridge: BridgeConfig::default(),
            levy: LevyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub dim: usize,
    pub truncation: u32,
    pub alpha: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            truncation: 256,
            alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormCommandConfig {
    pub specs: Vec<String>,
    pub alpha: f64,
    pub truncation: u32,
    pub replicas: u64,
    /// Evaluate on these stored paths (the `sample` command's JSON schema)
    /// instead of sampling replicas.
    pub path_files: Vec<PathBuf>,
}

impl Default for NormCommandConfig {
    fn default() -> Self {
        Self {
            specs: vec!["fl:0.5:.:2".into(), "fbesov:0.5:2:inf".into()],
            alpha: 1.0,
            truncation: 1024,
            replicas: 64,
            path_files: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    /// Space token (`fl` or `fbesov`).
    pub space: String,
    pub s_list: Vec<f64>,
    /// Exponent fields in the norm-spec syntax (`"2"`, `"inf"`, `"."`).
    pub p: String,
    pub q: String,
    pub alpha: f64,
    pub truncations: Vec<u32>,
    pub replicas: u64,
    /// Median growth below this over the whole range reads as converged.
    pub converge_tol: f64,
    /// Median growth at or above this reads as divergent.
    pub diverge_ratio: f64,
    /// Expected verdict per `s` (aligned with `s_list`); mismatches exit 4.
    pub expected: Option<Vec<String>>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            space: "fl".into(),
            s_list: vec![0.3, 0.5, 0.7],
            p: ".".into(),
            q: "2".into(),
            alpha: 1.0,
            truncations: vec![1 << 8, 1 << 10, 1 << 12, 1 << 14, 1 << 16],
            replicas: 200,
            converge_tol: 0.05,
            diverge_ratio: 1.7,
            expected: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailCommandConfig {
    pub spec: String,
    pub alpha: f64,
    pub truncation: u32,
    pub samples: usize,
    pub quantile_lo: f64,
    pub quantile_hi: f64,
    pub bins: usize,
    /// Also emit a gnuplot script for the exceedance curve.
    pub gnuplot: bool,
}

impl Default for TailCommandConfig {
    fn default() -> Self {
        Self {
            spec: "fl:0.3:.:2".into(),
            alpha: 1.0,
            truncation: 1 << 10,
            samples: 100_000,
            quantile_lo: 0.90,
            quantile_hi: 0.999,
            bins: 12,
            gnuplot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChaosConfig {
    pub shells: Vec<u32>,
    /// Half-orders k (p = 2k) to decompose; 2 uses the p = 4 display form,
    /// 3 the exhaustive classifier.
    pub half_orders: Vec<u32>,
    pub replicas: u64,
    pub hyper_samples: usize,
    pub hyper_shell: u32,
}

impl Default for ChaosConfig {
    fn default() -> Self {
        Self {
            shells: vec![2, 4, 6],
            half_orders: vec![2, 3],
            replicas: 4,
            hyper_samples: 20_000,
            hyper_shell: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WickConfig {
    pub hermite_max: u32,
    pub x_grid: Vec<f64>,
}

impl Default for WickConfig {
    fn default() -> Self {
        Self {
            hermite_max: 8,
            x_grid: vec![-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub spec: String,
    pub alpha: f64,
    pub cutoffs: Vec<u32>,
    /// Stored tail reaches to `tail_factor · cutoff`.
    pub tail_factor: u32,
    pub eps: f64,
    pub samples: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            spec: "fbesov:0.25:2:inf".into(),
            alpha: 1.0,
            cutoffs: vec![1 << 8, 1 << 10, 1 << 12],
            tail_factor: 8,
            eps: 0.5,
            samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BridgeConfig {
    pub grid: usize,
    pub truncation: u32,
    pub replicas: u64,
    pub frequencies: Vec<i64>,
    /// Norm used for the bridge-vs-direct median agreement check.
    pub norm_spec: String,
    pub norm_replicas: u64,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        Self {
            grid: 1 << 12,
            truncation: 16,
            replicas: 4000,
            frequencies: vec![1, 2, 5, 10],
            norm_spec: "fl:0.3:.:2".into(),
            norm_replicas: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevyConfig {
    pub grid: usize,
    pub eps_list: Vec<f64>,
    pub replicas: u64,
}

impl Default for LevyConfig {
    fn default() -> Self {
        Self {
            grid: 1 << 16,
            eps_list: vec![1.0 / 1024.0, 1.0 / 2048.0],
            replicas: 100,
        }
    }
}

/// Command-line overrides (already merged with the environment by clap).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<TableFormat>,
}

pub fn load(
    config_path: Option<&Path>,
    overrides: &Overrides,
) -> Result<ExperimentConfig, CliError> {
    let mut config = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(workers) = overrides.workers {
        config.workers = workers;
    }
    if let Some(out) = &overrides.out {
        config.out = out.clone();
    }
    if let Some(format) = overrides.format {
        config.format = format;
    }
    Ok(config)
}

pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::config(format!("config parse: {e}")))
}

pub fn serialize(config: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serializes")
}

/// SHA-256 of the effective config's canonical serialization.
pub fn config_hash(config: &ExperimentConfig) -> String {
    use sha2::{Digest, Sha256};
    let canonical = serde_json::to_string(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
