//! `levy`: modulus-of-continuity ratio of sampled bridge loops.

use loopnorm_core::bridge::sample_bridge;
use loopnorm_core::rng::GaussianSource;
use loopnorm_core::stats::{levy_ratio, median};

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
    let section = &config.levy;
    if section.replicas == 0 {
        return Err(CliError::config("levy.replicas must be positive"));
    }
    let dt = core::f64::consts::TAU / section.grid as f64;
    for &eps in &section.eps_list {
        if eps >= 1.0 || eps <= dt {
            return Err(CliError::config(
                "levy.eps_list entries must lie between the grid spacing and 1",
            ));
        }
    }

    let ratios = parallel_map(pool, section.replicas, |k| {
        let seed = GaussianSource::derive_seed(config.seed, k);
        let bridge = sample_bridge(seed, section.grid)?;
        let mut row = Vec::with_capacity(section.eps_list.len());
        for &eps in &section.eps_list {
            row.push(levy_ratio(bridge.loop_values(), dt, eps)?);
        }
        Ok((seed, row))
    })?;

    let mut rows = Vec::new();
    for (replica, (seed, values)) in ratios.iter().enumerate() {
        for (&eps, &ratio) in section.eps_list.iter().zip(values) {
            rows.push(vec![
                replica.to_string(),
                seed.to_string(),
                fmt_f64(eps),
                fmt_f64(ratio),
            ]);
        }
    }
    writer.write_table("levy", &["replica", "seed", "eps", "ratio"], &rows)?;

    let bands: Vec<serde_json::Value> = section
        .eps_list
        .iter()
        .enumerate()
        .map(|(idx, &eps)| {
            let column: Vec<f64> = ratios.iter().map(|(_, row)| row[idx]).collect();
            let in_band = column.iter().filter(|r| (0.6..=1.4).contains(*r)).count();
            serde_json::json!({
                "eps": eps,
                "median": median(&column),
                "in_band_0p6_1p4": in_band,
                "replicas": column.len(),
            })
        })
        .collect();
    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "grid": section.grid,
            "bands": bands,
        }),
    )?;
    Ok(Vec::new())
}
