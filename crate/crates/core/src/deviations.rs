//! Large-deviation machinery: the Cramér transform and Chernoff bound for
//! χ² shell sums, Monte Carlo tail estimation with Gaussian-exponent
//! fitting, tail checks for chaos components, and the measurable-seminorm
//! probe.
//!
//! The χ² moment generating function is the normalized `E e^{λ|g|²} =
//! 1/(1−2λ)` (a 1/(2π) prefactor sometimes quoted with the unnormalized
//! density would only shift `H` by `ln 2π`; the rate here carries no such
//! constant, and the Chernoff dominance tests hold for the normalized form).

use alloc::vec::Vec;

use crate::math;
use crate::norms::{evaluate, NormSpec};
use crate::rng::GaussianSource;
use crate::spectral::{build_path, sample_family, sample_family_annulus};
use crate::stats::quantile_sorted;
use crate::{Error, Result};

/// Cramér transform evaluation for the sample mean of `|g|²` (mean 2):
/// `H(a) = (a−2)/2 + ln(2/a)`, maximized at `λ* = (a−2)/(2a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CramerReport {
    pub threshold: f64,
    pub lambda_star: f64,
    pub rate: f64,
}

impl CramerReport {
    /// Chernoff bound `e^{−N·H(a)}` for the mean of `N` iid `|g|²` draws.
    pub fn sample_mean_bound(&self, count: usize) -> f64 {
        math::exp(-(count as f64) * self.rate)
    }
}

pub fn cramer_chi2(a: f64) -> Result<CramerReport> {
    if !(a > 2.0) {
        return Err(Error::BelowMean {
            threshold: a,
            mean: 2.0,
        });
    }
    Ok(CramerReport {
        threshold: a,
        lambda_star: (a - 2.0) / (2.0 * a),
        rate: (a - 2.0) / 2.0 + math::ln(2.0 / a),
    })
}

/// Exact Chernoff bound for `P(X_j^{(2)} > K²)`, i.e. the shell mean of
/// `|g|²` exceeding `2^j K² / #S_j`.
pub fn chernoff_shell_bound(shell: u32, k: f64) -> Result<f64> {
    let shell_size = crate::lattice::Lattice::line(1 << shell)?.shell_len(shell);
    let mean_threshold = math::pow(2.0, shell as f64) * k * k / shell_size as f64;
    if mean_threshold <= 2.0 {
        return Err(Error::BelowMean {
            threshold: mean_threshold,
            mean: 2.0,
        });
    }
    Ok(cramer_chi2(mean_threshold)?.sample_mean_bound(shell_size))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let spread = z * math::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    ((center - spread).max(0.0), (center + spread).min(1.0))
}

/// Inputs of a Monte Carlo tail run.
#[derive(Debug, Clone, PartialEq)]
pub struct TailConfig {
    pub spec: NormSpec,
    pub alpha: f64,
    pub truncation: u32,
    pub samples: usize,
    /// Quantile levels anchoring the K grid.
    pub quantile_range: (f64, f64),
    pub bins: usize,
}

impl TailConfig {
    pub fn new(spec: NormSpec, alpha: f64, truncation: u32, samples: usize) -> Self {
        Self {
            spec,
            alpha,
            truncation,
            samples,
            quantile_range: (0.90, 0.999),
            bins: 12,
        }
    }
}

/// Bins kept in a tail fit must hold at least this many exceedances.
pub const TAIL_MIN_EXCEEDANCES: u64 = 50;
/// Minimum number of retained bins before a slope is reported.
pub const TAIL_MIN_BINS: usize = 4;

/// Empirical exceedance curve with a fitted Gaussian-tail exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub spec: NormSpec,
    pub truncation: u32,
    pub sample_count: usize,
    pub thresholds: Vec<f64>,
    pub exceed_counts: Vec<u64>,
    pub exceed_prob: Vec<f64>,
    pub wilson_lo: Vec<f64>,
    pub wilson_hi: Vec<f64>,
    /// Slope of `−ln P` against `K²`, present when enough bins survive.
    pub fitted_c: Option<f64>,
    pub intercept: Option<f64>,
    pub fit_r2: Option<f64>,
}

/// Norm of the `index`-th replica path: pure in `(master_seed, index)`.
pub fn tail_sample_value(cfg: &TailConfig, master_seed: u64, index: u64) -> Result<f64> {
    let seed = GaussianSource::derive_seed(master_seed, index);
    let family = sample_family(seed, cfg.spec.dim, cfg.truncation)?;
    let path = build_path(&family, cfg.alpha)?;
    evaluate(&cfg.spec, &path)
}

/// Build the exceedance curve and exponent fit from per-sample norms.
pub fn tail_estimate_from_values(cfg: &TailConfig, values: &[f64]) -> TailEstimate {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("norms are not NaN"));
    let (lo_level, hi_level) = cfg.quantile_range;
    let bins = cfg.bins.max(2);
    let mut thresholds: Vec<f64> = (0..bins)
        .map(|i| {
            let level = lo_level + (hi_level - lo_level) * i as f64 / (bins - 1) as f64;
            quantile_sorted(&sorted, level)
        })
        .collect();
    thresholds.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * a.abs());

    let n = values.len() as u64;
    let mut exceed_counts = Vec::with_capacity(thresholds.len());
    for &k in &thresholds {
        // sorted order gives the count via partition point
        let first_above = sorted.partition_point(|&v| v <= k);
        exceed_counts.push((sorted.len() - first_above) as u64);
    }
    let exceed_prob: Vec<f64> = exceed_counts.iter().map(|&c| c as f64 / n as f64).collect();
    let (wilson_lo, wilson_hi): (Vec<f64>, Vec<f64>) = exceed_counts
        .iter()
        .map(|&c| wilson_interval(c, n, 1.96))
        .unzip();

    // weighted least squares of −ln p on K², weights = exceedance counts
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for ((&k, &c), &p) in thresholds.iter().zip(&exceed_counts).zip(&exceed_prob) {
        if c >= TAIL_MIN_EXCEEDANCES && p < 1.0 {
            xs.push(k * k);
            ys.push(-math::ln(p));
            ws.push(c as f64);
        }
    }
    let (fitted_c, intercept, fit_r2) = if xs.len() >= TAIL_MIN_BINS {
        let (slope, intercept, r2) = weighted_line_fit(&xs, &ys, &ws);
        (Some(slope), Some(intercept), Some(r2))
    } else {
        (None, None, None)
    };

    TailEstimate {
        spec: cfg.spec,
        truncation: cfg.truncation,
        sample_count: values.len(),
        thresholds,
        exceed_counts,
        exceed_prob,
        wilson_lo,
        wilson_hi,
        fitted_c,
        intercept,
        fit_r2,
    }
}

/// Serial tail run; the CLI distributes [`tail_sample_value`] over workers
/// and feeds the merged values through [`tail_estimate_from_values`].
pub fn tail_estimate(cfg: &TailConfig, master_seed: u64) -> Result<TailEstimate> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("tail runs need samples"));
    }
    let mut values = Vec::with_capacity(cfg.samples);
    for index in 0..cfg.samples as u64 {
        values.push(tail_sample_value(cfg, master_seed, index)?);
    }
    Ok(tail_estimate_from_values(cfg, &values))
}

fn weighted_line_fit(xs: &[f64], ys: &[f64], ws: &[f64]) -> (f64, f64, f64) {
    let wsum: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let ybar = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(ws) {
        sxx += w * (x - xbar) * (x - xbar);
        sxy += w * (x - xbar) * (y - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for ((&x, &y), &w) in xs.iter().zip(ys).zip(ws) {
        let fit = slope * x + intercept;
        ss_res += w * (y - fit) * (y - fit);
        ss_tot += w * (y - ybar) * (y - ybar);
    }
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        0.0
    };
    (slope, intercept, r2)
}

/// One check point of a chaos-component tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheckPoint {
    pub lambda: f64,
    pub empirical: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Fit of `P(|F| > λ) ≤ C' exp(−c · 2^{j/(2ℓ)} λ^{1/ℓ})` anchored at two
/// quantiles and tested beyond them.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosTailReport {
    pub shell: u32,
    pub order: u32,
    pub decay: f64,
    pub amplitude: f64,
    /// Fitted exponent of `λ` in `−ln P` (reported for the Gaussian-like
    /// `ℓ = 1` component, where it should sit near 2).
    pub fitted_exponent: Option<f64>,
    pub checks: Vec<TailCheckPoint>,
    pub pass: bool,
}

pub fn chaos_tail_check(samples: &[f64], order: u32, shell: u32) -> Result<ChaosTailReport> {
    const MIN_SAMPLES: usize = 100_000;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            required: MIN_SAMPLES,
            actual: samples.len(),
        });
    }
    if order == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let mut magnitudes: Vec<f64> = samples.iter().map(|&v| math::abs(v)).collect();
    magnitudes.sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n = magnitudes.len();
    let tail_prob = |lambda: f64| -> f64 {
        let first_above = magnitudes.partition_point(|&v| v <= lambda);
        (n - first_above) as f64 / n as f64
    };

    let weight = math::pow(2.0, shell as f64 / (2.0 * order as f64));
    let ell_inv = 1.0 / order as f64;
    if magnitudes[magnitudes.len() - 1] == 0.0 {
        // identically zero functional: every tail probability is zero and
        // any bound holds
        let checks = [0.5, 1.0]
            .iter()
            .map(|&lambda| TailCheckPoint {
                lambda,
                empirical: 0.0,
                bound: 0.0,
                slack: 0.0,
                pass: true,
            })
            .collect();
        return Ok(ChaosTailReport {
            shell,
            order,
            decay: f64::INFINITY,
            amplitude: 0.0,
            fitted_exponent: None,
            checks,
            pass: true,
        });
    }
    let anchor1 = quantile_sorted(&magnitudes, 0.50);
    let anchor2 = quantile_sorted(&magnitudes, 0.90);
    let p1 = tail_prob(anchor1);
    let p2 = tail_prob(anchor2);
    if !(anchor2 > anchor1 && p1 > p2 && p2 > 0.0) {
        return Err(Error::InvalidArgument(
            "degenerate sample distribution for tail anchoring",
        ));
    }
    let x1 = math::pow(anchor1, ell_inv);
    let x2 = math::pow(anchor2, ell_inv);
    let decay = (math::ln(p1) - math::ln(p2)) / (weight * (x2 - x1));
    let amplitude = p1 * math::exp(decay * weight * x1);

    let mut checks = Vec::new();
    for factor in [1.5, 2.0] {
        let lambda = anchor2 * factor;
        let empirical = tail_prob(lambda);
        let bound = amplitude * math::exp(-decay * weight * math::pow(lambda, ell_inv));
        // 3-SE binomial slack on the empirical side
        let slack = 3.0 * math::sqrt(empirical.max(1.0 / n as f64) / n as f64);
        checks.push(TailCheckPoint {
            lambda,
            empirical,
            bound,
            slack,
            pass: empirical <= bound + slack,
        });
    }

    let fitted_exponent = if order == 1 {
        // exponent β in P ≈ exp(−cλ^β) from the two anchors
        Some(math::ln(math::ln(1.0 / p2) / math::ln(1.0 / p1)) / math::ln(anchor2 / anchor1))
    } else {
        None
    };

    let pass = checks.iter().all(|c| c.pass);
    Ok(ChaosTailReport {
        shell,
        order,
        decay,
        amplitude,
        fitted_exponent,
        checks,
        pass,
    })
}

/// Monte Carlo estimate of the measurable-seminorm condition: the
/// probability that the high-frequency tail `P_{>M0} u` exceeds `eps` in the
/// given norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeEstimate {
    pub cutoff: u32,
    pub eps: f64,
    pub exceed: u64,
    pub samples: usize,
    pub prob: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Whether replica `index`'s tail projection exceeds `eps`. Only the
/// annulus `(m0, truncation]` is drawn; the draws coincide with the full
/// family of the same derived seed.
pub fn probe_sample_exceeds(
    spec: &NormSpec,
    alpha: f64,
    m0: u32,
    truncation: u32,
    eps: f64,
    master_seed: u64,
    index: u64,
) -> Result<bool> {
    if m0 < 2 {
        return Err(Error::InvalidArgument(
            "projection cutoff must be at least 2",
        ));
    }
    if matches!(spec.space, crate::norms::SpaceKind::Besov) {
        return Err(Error::InvalidArgument(
            "the probe addresses Fourier-side norms",
        ));
    }
    let seed = GaussianSource::derive_seed(master_seed, index);
    let family = sample_family_annulus(seed, m0, truncation)?;
    let path = build_path(&family, alpha)?;
    Ok(evaluate(spec, &path)? > eps)
}

pub fn measurability_probe(
    spec: &NormSpec,
    alpha: f64,
    m0: u32,
    truncation: u32,
    eps: f64,
    samples: usize,
    master_seed: u64,
) -> Result<ProbeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("probe needs samples"));
    }
    let mut exceed = 0u64;
    for index in 0..samples as u64 {
        if probe_sample_exceeds(spec, alpha, m0, truncation, eps, master_seed, index)? {
            exceed += 1;
        }
    }
    let (lo, hi) = wilson_interval(exceed, samples as u64, 1.96);
    Ok(ProbeEstimate {
        cutoff: m0,
        eps,
        exceed,
        samples,
        prob: exceed as f64 / samples as f64,
        lo,
        hi,
    })
}
