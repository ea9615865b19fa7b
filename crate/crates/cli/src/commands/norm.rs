//! `norm`: evaluate a list of norm specs on independently sampled paths.

use loopnorm_core::norms::{evaluate, NormSpec};
use loopnorm_core::rng::GaussianSource;
use loopnorm_core::spectral::{build_path, sample_family};
use loopnorm_core::stats::median;

use crate::config::ExperimentConfig;
use crate::errors::CliError;
use crate::output::{fmt_f64, RunWriter};
use crate::runner::parallel_map;

use super::CommandResult;

pub fn run(
    config: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    writer: &mut RunWriter,
) -> CommandResult {
    let section = &config.norm;
    if section.replicas == 0 && section.path_files.is_empty() {
        return Err(CliError::config("norm.replicas must be positive"));
    }
    let specs: Vec<NormSpec> = section
        .specs
        .iter()
        .map(|text| {
            NormSpec::parse(text).map_err(|e| CliError::config(format!("spec {text}: {e}")))
        })
        .collect::<Result<_, _>>()?;

    // (seed, alpha column, truncation, per-spec norms)
    let values: Vec<(u64, String, u32, Vec<f64>)> = if section.path_files.is_empty() {
        parallel_map(pool, section.replicas, |k| {
            let seed = GaussianSource::derive_seed(config.seed, k);
            let family = sample_family(seed, 1, section.truncation)?;
            let path = build_path(&family, section.alpha)?;
            let mut row = Vec::with_capacity(specs.len());
            for spec in &specs {
                row.push(evaluate(spec, &path)?);
            }
            Ok((seed, fmt_f64(section.alpha), section.truncation, row))
        })?
    } else {
        // stored paths: one pseudo-replica per file
        let mut rows = Vec::new();
        for file in &section.path_files {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", file.display())))?;
            let json: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", file.display())))?;
            let path = crate::formats::spectral_path_from_json(&json)?;
            let alpha = json["alpha"].as_f64().map(fmt_f64).unwrap_or_default();
            let mut row = Vec::with_capacity(specs.len());
            for spec in &specs {
                row.push(evaluate(spec, &path)?);
            }
            rows.push((
                json["seed"].as_u64().unwrap_or(0),
                alpha,
                path.truncation(),
                row,
            ));
        }
        rows
    };

    let mut rows = Vec::new();
    for (replica, (seed, alpha, truncation, norms)) in values.iter().enumerate() {
        for (spec, value) in section.specs.iter().zip(norms) {
            rows.push(vec![
                spec.clone(),
                replica.to_string(),
                seed.to_string(),
                alpha.clone(),
                truncation.to_string(),
                fmt_f64(*value),
            ]);
        }
    }
    writer.write_table(
        "norms",
        &["spec", "replica", "seed", "alpha", "truncation", "value"],
        &rows,
    )?;

    let per_spec: Vec<serde_json::Value> = section
        .specs
        .iter()
        .enumerate()
        .map(|(idx, spec)| {
            let column: Vec<f64> = values.iter().map(|(_, _, _, row)| row[idx]).collect();
            let summary = loopnorm_core::stats::summarize(&column);
            serde_json::json!({
                "spec": spec,
                "replicas": column.len(),
                "median": median(&column),
                "mean": summary.mean,
                "se": summary.se,
            })
        })
        .collect();
    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "alpha": section.alpha,
            "truncation": section.truncation,
            "specs": per_spec,
        }),
    )?;
    Ok(Vec::new())
}
