//! `tail`: Monte Carlo exceedance curve with Gaussian-exponent fit.

use loopnorm_core::deviations::{tail_estimate_from_values, tail_sample_value, TailConfig};
use loopnorm_core::norms::NormSpec;

use crate::config::ExperimentConfig;
use crate::errors::CliError;
use crate::formats::tail_summary_json;
use crate::output::{fmt_f64, RunWriter};
use crate::runner::parallel_map;

use super::CommandResult;

pub fn run(
    config: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    writer: &mut RunWriter,
) -> CommandResult {
    let section = &config.tail;
    let spec = NormSpec::parse(&section.spec)
        .map_err(|e| CliError::config(format!("tail spec {}: {e}", section.spec)))?;
    if section.samples == 0 {
        return Err(CliError::config("tail.samples must be positive"));
    }
    if !(0.0 < section.quantile_lo
        && section.quantile_lo < section.quantile_hi
        && section.quantile_hi < 1.0)
    {
        return Err(CliError::config(
            "tail quantile range must satisfy 0 < lo < hi < 1",
        ));
    }
    let mut cfg = TailConfig::new(spec, section.alpha, section.truncation, section.samples);
    cfg.quantile_range = (section.quantile_lo, section.quantile_hi);
    cfg.bins = section.bins;

    let values = parallel_map(pool, section.samples as u64, |k| {
        Ok(tail_sample_value(&cfg, config.seed, k)?)
    })?;
    let estimate = tail_estimate_from_values(&cfg, &values);

    let rows: Vec<Vec<String>> = estimate
        .thresholds
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            vec![
                fmt_f64(k),
                estimate.exceed_counts[i].to_string(),
                fmt_f64(estimate.exceed_prob[i]),
                fmt_f64(estimate.wilson_lo[i]),
                fmt_f64(estimate.wilson_hi[i]),
            ]
        })
        .collect();
    writer.write_table("tail", &["k", "count", "prob", "lo", "hi"], &rows)?;
    writer.write_json("summary", &tail_summary_json(&estimate, section.alpha))?;
    if section.gnuplot {
        writer.write_text("tail.gp", &gnuplot_script(&estimate))?;
    }
    Ok(Vec::new())
}

/// Plot `−ln P` against `K²` next to the fitted line.
fn gnuplot_script(estimate: &loopnorm_core::deviations::TailEstimate) -> String {
    let fit = match (estimate.fitted_c, estimate.intercept) {
        (Some(c), Some(b)) => format!("f(x) = {c} * x + {b}\n"),
        _ => String::from("f(x) = 0\n"),
    };
    format!(
        "set xlabel 'K^2'\n\
         set ylabel '-ln P(norm > K)'\n\
         set datafile separator ','\n\
         {fit}\
         plot 'tail.csv' skip 1 using ($1*$1):(-log($3)) with points title 'empirical', \\\n\
              f(x) with lines title 'fit'\n"
    )
}
