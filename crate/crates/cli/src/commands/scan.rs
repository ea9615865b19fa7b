//! `scan`: regularity grid over `(s, N)` with convergence verdicts.
//!
//! Each replica draws one family at the largest truncation and reuses its
//! coefficients for every smaller `N` (truncations of one seed are coupled),
//! so medians across `N` compare the same realizations. The per-`s` verdict
//! comes from the total median growth `med(N_max)/med(N_min)`:
//! below `1 + converge_tol` reads converged, at or above `diverge_ratio`
//! divergent, the window between is the endpoint's slow-growth signature.

use loopnorm_core::norms::{evaluate, NormSpec};
use loopnorm_core::rng::GaussianSource;
use loopnorm_core::spectral::{build_path, sample_family};
use loopnorm_core::stats::median;

use crate::config::ExperimentConfig;
use crate::errors::CliError;
use crate::output::{fmt_f64, RunWriter};
use crate::runner::parallel_map;

use super::CommandResult;

pub fn classify(growth: f64, converge_tol: f64, diverge_ratio: f64) -> &'static str {
    if growth < 1.0 + converge_tol {
        "converge"
    } else if growth >= diverge_ratio {
        "diverge"
    } else {
        "endpoint-growth"
    }
}

pub struct ScanCell {
    pub s: f64,
    pub truncation: u32,
    pub median: f64,
}

pub struct ScanVerdict {
    pub s: f64,
    pub growth: f64,
    pub verdict: &'static str,
}

/// One regularity grid: norms per `s`, medians over coupled truncation
/// refinements.
pub struct ScanGrid<'a> {
    pub master_seed: u64,
    pub specs: &'a [NormSpec],
    pub alpha: f64,
    /// Ascending truncation ladder.
    pub truncations: &'a [u32],
    pub replicas: u64,
    pub converge_tol: f64,
    pub diverge_ratio: f64,
}

/// Grid medians and per-`s` verdicts; shared by the CLI and the acceptance
/// suite.
pub fn run_grid(
    grid: &ScanGrid<'_>,
    pool: &rayon::ThreadPool,
) -> Result<(Vec<ScanCell>, Vec<ScanVerdict>), CliError> {
    let n_max = *grid
        .truncations
        .iter()
        .max()
        .ok_or_else(|| CliError::config("scan.truncations must not be empty"))?;
    if grid.replicas == 0 {
        return Err(CliError::config("scan.replicas must be positive"));
    }

    // values[replica][s_idx][n_idx]
    let values = parallel_map(pool, grid.replicas, |k| {
        let seed = GaussianSource::derive_seed(grid.master_seed, k);
        let family = sample_family(seed, 1, n_max)?;
        let full = build_path(&family, grid.alpha)?;
        let mut per_s = vec![Vec::with_capacity(grid.truncations.len()); grid.specs.len()];
        for &n in grid.truncations {
            let path = full.truncated(n)?;
            for (slot, spec) in per_s.iter_mut().zip(grid.specs) {
                slot.push(evaluate(spec, &path)?);
            }
        }
        Ok(per_s)
    })?;

    let mut cells = Vec::new();
    let mut verdicts = Vec::new();
    for (s_idx, spec) in grid.specs.iter().enumerate() {
        let mut medians = Vec::with_capacity(grid.truncations.len());
        for n_idx in 0..grid.truncations.len() {
            let column: Vec<f64> = values.iter().map(|rep| rep[s_idx][n_idx]).collect();
            let m = median(&column);
            medians.push(m);
            cells.push(ScanCell {
                s: spec.s,
                truncation: grid.truncations[n_idx],
                median: m,
            });
        }
        let growth = medians.last().unwrap() / medians.first().unwrap();
        verdicts.push(ScanVerdict {
            s: spec.s,
            growth,
            verdict: classify(growth, grid.converge_tol, grid.diverge_ratio),
        });
    }
    Ok((cells, verdicts))
}

pub fn run(
    config: &ExperimentConfig,
    pool: &rayon::ThreadPool,
    writer: &mut RunWriter,
) -> CommandResult {
    let section = &config.scan;
    let specs: Vec<NormSpec> = section
        .s_list
        .iter()
        .map(|s| {
            let text = format!("{}:{}:{}:{}", section.space, s, section.p, section.q);
            NormSpec::parse(&text).map_err(|e| CliError::config(format!("scan spec {text}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if let Some(expected) = &section.expected {
        if expected.len() != section.s_list.len() {
            return Err(CliError::config(
                "scan.expected must align with scan.s_list",
            ));
        }
    }
    let mut sorted = section.truncations.clone();
    sorted.sort_unstable();
    let (cells, verdicts) = run_grid(
        &ScanGrid {
            master_seed: config.seed,
            specs: &specs,
            alpha: section.alpha,
            truncations: &sorted,
            replicas: section.replicas,
            converge_tol: section.converge_tol,
            diverge_ratio: section.diverge_ratio,
        },
        pool,
    )?;

    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|cell| {
            vec![
                section.space.clone(),
                fmt_f64(cell.s),
                section.p.clone(),
                section.q.clone(),
                cell.truncation.to_string(),
                section.replicas.to_string(),
                fmt_f64(cell.median),
            ]
        })
        .collect();
    writer.write_table(
        "scan",
        &["space", "s", "p", "q", "truncation", "replicas", "median"],
        &rows,
    )?;

    let mut failures = Vec::new();
    let verdict_rows: Vec<Vec<String>> = verdicts
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let expected = section
                .expected
                .as_ref()
                .map(|list| list[idx].clone())
                .unwrap_or_default();
            if !expected.is_empty() && expected != v.verdict {
                failures.push(format!(
                    "s = {}: verdict {} but expected {expected}",
                    v.s, v.verdict
                ));
            }
            vec![
                section.space.clone(),
                fmt_f64(v.s),
                section.p.clone(),
                section.q.clone(),
                sorted.first().unwrap().to_string(),
                sorted.last().unwrap().to_string(),
                fmt_f64(v.growth),
                v.verdict.to_string(),
                expected,
            ]
        })
        .collect();
    writer.write_table(
        "verdicts",
        &[
            "space", "s", "p", "q", "n_min", "n_max", "growth", "verdict", "expected",
        ],
        &verdict_rows,
    )?;

    writer.write_json(
        "summary",
        &serde_json::json!({
            "seed": config.seed,
            "alpha": section.alpha,
            "space": section.space,
            "replicas": section.replicas,
            "verdicts": verdicts
                .iter()
                .map(|v| serde_json::json!({
                    "s": v.s,
                    "growth": v.growth,
                    "verdict": v.verdict,
                }))
                .collect::<Vec<_>>(),
            "failures": failures,
        }),
    )?;
    Ok(failures)
}
