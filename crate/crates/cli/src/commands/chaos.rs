//! `chaos`: resonance decompositions per shell plus hypercontractivity
//! ratio reports.

use loopnorm_core::chaos::{
    hypercontractivity_check, l2k_block_decomposition, l4_block_decomposition, wick_abs2n,
};
use loopnorm_core::rng::GaussianSource;
use loopnorm_core::spectral::sample_family;
use loopnorm_core::stats::{decay_ratio, x_statistic, z_statistic};

use crate::config::ExperimentConfig;
use crate::errors::CliError;
use crate::formats::decomposition_json;
use crate::output::{fmt_f64, RunWriter};
use crate::runner::parallel_map;

use super::CommandResult;

pub fn run(
    config: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    writer: &mut RunWriter,
) -> CommandResult {
    let section = &config.chaos;
    if section.replicas == 0 {
        return Err(CliError::config("chaos.replicas must be positive"));
    }
    for &k in &section.half_orders {
        if !(k == 2 || k == 3) {
            return Err(CliError::config("chaos.half_orders supports k in {2, 3}"));
        }
    }

    // decompositions plus shell statistics, deterministic ordering:
    // (replica, shell, k)
    let per_replica = parallel_map(pool, section.replicas, |replica| {
        let seed = GaussianSource::derive_seed(config.seed, replica);
        let mut decs = Vec::new();
        let mut stats = Vec::new();
        for &j in &section.shells {
            let family = sample_family(seed, 1, 1 << j)?;
            for &k in &section.half_orders {
                let dec = if k == 2 {
                    l4_block_decomposition(&family, j)?
                } else {
                    l2k_block_decomposition(&family, j, k)?
                };
                decs.push((replica, seed, dec));
            }
            for p in [2.0, 4.0] {
                stats.push(("x", j, p, seed, x_statistic(&family, j, p)?.value));
            }
            stats.push(("z", j, 1.0, seed, z_statistic(&family, j, 1.0)?));
            stats.push(("decay", j, 0.4, seed, decay_ratio(&family, j, 0.4)?));
        }
        Ok((decs, stats))
    })?;

    let flat: Vec<_> = per_replica
        .iter()
        .flat_map(|(decs, _)| decs.iter().cloned())
        .collect();
    let stat_rows: Vec<Vec<String>> = per_replica
        .iter()
        .flat_map(|(_, stats)| stats.iter())
        .map(|(name, j, order, seed, value)| {
            vec![
                (*name).to_string(),
                j.to_string(),
                fmt_f64(*order),
                seed.to_string(),
                fmt_f64(*value),
            ]
        })
        .collect();
    writer.write_table(
        "shell_statistics",
        &["statistic", "j", "p_or_q", "seed", "value"],
        &stat_rows,
    )?;
    let rows: Vec<Vec<String>> = flat
        .iter()
        .map(|(replica, seed, dec)| {
            vec![
                replica.to_string(),
                seed.to_string(),
                dec.shell.to_string(),
                dec.half_order.to_string(),
                fmt_f64(dec.lhs),
                fmt_f64(dec.paired),
                fmt_f64(dec.no_pair),
                fmt_f64(dec.four_of_a_kind),
                fmt_f64(dec.partial_pair),
                fmt_f64(dec.diagonal),
            ]
        })
        .collect();
    writer.write_table(
        "decompositions",
        &[
            "replica", "seed", "j", "k", "lhs", "I", "II", "error_i", "error_ii", "III",
        ],
        &rows,
    )?;
    writer.write_json(
        "decompositions_detail",
        &flat
            .iter()
            .map(|(_, _, dec)| decomposition_json(dec))
            .collect::<Vec<_>>(),
    )?;

    // hypercontractivity: order-2 Wick squares and the order-4 pair-free sum
    let hyper_shell = section.hyper_shell;
    let samples = section.hyper_samples;
    let wick_samples = parallel_map(pool, samples as u64, |k| {
        let source = GaussianSource::new(GaussianSource::derive_seed(config.seed ^ 0xa5a5, k));
        Ok(wick_abs2n(source.scalar_draw(0), 1)?)
    })?;
    let no_pair_samples = parallel_map(pool, samples as u64, |k| {
        let seed = GaussianSource::derive_seed(config.seed ^ 0x5a5a, k);
        let family = sample_family(seed, 1, 1 << hyper_shell)?;
        Ok(l4_block_decomposition(&family, hyper_shell)?.no_pair)
    })?;

    let checks = [
        ("wick_square", 2u32, &wick_samples),
        ("no_pair_sum", 4u32, &no_pair_samples),
    ];
    let mut hyper_rows = Vec::new();
    let mut hyper_json = Vec::new();
    for (name, order, data) in checks {
        let report = hypercontractivity_check(data, order, 4.0)?;
        hyper_rows.push(vec![
            name.to_string(),
            order.to_string(),
            "4".to_string(),
            fmt_f64(report.ratio),
            fmt_f64(report.bound),
            fmt_f64(report.se),
            report.pass.to_string(),
        ]);
        hyper_json.push(serde_json::json!({
            "functional": name,
            "order": order,
            "q": 4.0,
            "ratio": report.ratio,
            "bound": report.bound,
            "se": report.se,
            "pass": report.pass,
        }));
    }
    writer.write_table(
        "hypercontractivity",
        &["functional", "order", "q", "ratio", "bound", "se", "pass"],
        &hyper_rows,
    )?;

    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "shells": section.shells,
            "half_orders": section.half_orders,
            "replicas": section.replicas,
            "worst_identity_residual": flat
                .iter()
                .map(|(_, _, dec)| {
                    (dec.lhs - dec.class_total()).abs() / dec.lhs.abs().max(f64::MIN_POSITIVE)
                })
                .fold(0.0f64, f64::max),
            "hypercontractivity": hyper_json,
        }),
    )?;
    Ok(Vec::new())
}
