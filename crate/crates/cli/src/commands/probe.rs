//! `probe`: measurable-seminorm check — exceedance probability of the
//! high-frequency tail projection across cutoffs.

use loopnorm_core::deviations::{probe_sample_exceeds, wilson_interval};
use loopnorm_core::norms::NormSpec;

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
    let section = &config.probe;
    let spec = NormSpec::parse(&section.spec)
        .map_err(|e| CliError::config(format!("probe spec {}: {e}", section.spec)))?;
    if section.samples == 0 {
        return Err(CliError::config("probe.samples must be positive"));
    }
    if section.tail_factor < 2 {
        return Err(CliError::config("probe.tail_factor must be at least 2"));
    }

    let mut rows = Vec::new();
    let mut points = Vec::new();
    for &m0 in &section.cutoffs {
        let truncation = m0
            .checked_mul(section.tail_factor)
            .ok_or_else(|| CliError::config("probe cutoff overflow"))?;
        let exceed = parallel_map(pool, section.samples as u64, |k| {
            Ok(u64::from(probe_sample_exceeds(
                &spec,
                section.alpha,
                m0,
                truncation,
                section.eps,
                config.seed,
                k,
            )?))
        })?
        .into_iter()
        .sum::<u64>();
        let prob = exceed as f64 / section.samples as f64;
        let (lo, hi) = wilson_interval(exceed, section.samples as u64, 1.96);
        rows.push(vec![
            m0.to_string(),
            fmt_f64(section.eps),
            exceed.to_string(),
            section.samples.to_string(),
            fmt_f64(prob),
            fmt_f64(lo),
            fmt_f64(hi),
        ]);
        points.push(serde_json::json!({
            "m0": m0,
            "truncation": truncation,
            "prob": prob,
            "lo": lo,
            "hi": hi,
        }));
    }
    writer.write_table(
        "probe",
        &["m0", "eps", "exceed", "samples", "prob", "lo", "hi"],
        &rows,
    )?;
    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "spec": section.spec,
            "alpha": section.alpha,
            "eps": section.eps,
            "samples": section.samples,
            "points": points,
        }),
    )?;
    Ok(Vec::new())
}
