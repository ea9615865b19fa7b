//! Run output directory: tables (CSV or JSON per `--format`), JSON
//! summaries, and the closing manifest with content digests.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::TableFormat;
use crate::errors::CliError;
use crate::manifest::{OutputDigest, RunManifest};

pub struct RunWriter {
    dir: PathBuf,
    format: TableFormat,
    outputs: Vec<OutputDigest>,
    started: String,
}

impl RunWriter {
    pub fn create(dir: &Path, format: TableFormat) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            outputs: Vec::new(),
            started: chrono::Utc::now().to_rfc3339(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn record(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), bytes)?;
        self.outputs.push(OutputDigest {
            file: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Write a table under `name` (extension added per format). Rows must
    /// arrive in their final deterministic order.
    pub fn write_table(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        match self.format {
            TableFormat::Csv => {
                let mut writer = csv::Writer::from_writer(Vec::new());
                writer.write_record(header)?;
                for row in rows {
                    writer.write_record(row)?;
                }
                let bytes = writer
                    .into_inner()
                    .map_err(|e| CliError::runtime(format!("csv flush: {e}")))?;
                self.record(&format!("{name}.csv"), &bytes)
            }
            TableFormat::Json => {
                let objects: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|row| {
                        header
                            .iter()
                            .zip(row)
                            .map(|(k, v)| ((*k).to_string(), serde_json::Value::String(v.clone())))
                            .collect::<serde_json::Map<_, _>>()
                            .into()
                    })
                    .collect();
                let bytes = serde_json::to_vec_pretty(&objects)?;
                self.record(&format!("{name}.json"), &bytes)
            }
        }
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let bytes = serde_json::to_vec_pretty(value)?;
        self.record(&format!("{name}.json"), &bytes)
    }

    /// Verbatim text file (gnuplot scripts and the like).
    pub fn write_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        self.record(name, text.as_bytes())
    }

    /// Close the run: write `manifest.json` covering everything emitted.
    pub fn finish(self, subcommand: &str, config_sha256: &str) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            format_version: 1,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            config_sha256: config_sha256.to_string(),
            started: self.started.clone(),
            finished: chrono::Utc::now().to_rfc3339(),
            outputs: self.outputs,
        };
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_vec_pretty(&manifest)?)?;
        Ok(path)
    }
}

/// Shortest-round-trip decimal form; deterministic for equal values.
pub fn fmt_f64(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{value}")
    }
}
