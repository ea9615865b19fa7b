//! Scalar shell statistics: the averages `X_j^{(p)}`, block trigonometric
//! sums and their `L^1` powers, the max/sum decay ratio, exact Gaussian
//! moments `c_p`, and the Lévy modulus-of-continuity ratio.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;
use crate::spectral::{synthesize, GaussianFamily, SpectralPath, TimeGrid, OVERSAMPLING};
use crate::{Error, Result};

/// Exact `E|g|^p = 2^{p/2} Γ(p/2 + 1)` for the standard complex Gaussian
/// with `Var(g) = 2` (`|g|^2` is χ² with two degrees of freedom).
pub fn c_p_exact(p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::InvalidArgument("moment order must be nonnegative"));
    }
    Ok(math::pow(2.0, p / 2.0) * math::gamma(p / 2.0 + 1.0))
}

/// One shell average `X_j^{(p)} = 2^{-j} Σ_{|n|∼2^j} |g_n|^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellStatistic {
    pub shell: u32,
    pub order: f64,
    pub value: f64,
}

fn abs_pow(g: Complex64, p: f64) -> f64 {
    math::pow(g.norm_sqr(), p / 2.0)
}

fn shell_covered(family: &GaussianFamily, j: u32) -> Result<()> {
    if !family.lattice().covers_shell(j) {
        return Err(Error::ShellCoverage {
            shell: j,
            truncation: family.truncation(),
        });
    }
    Ok(())
}

/// `X_j^{(p)}`; the `2^{-j}` normalizer is kept verbatim, so the
/// value tracks `c_p · #S_j / 2^j` (the factor is 1 for `j ≥ 1` in d = 1,
/// but 2 for the two-point shell `S_0`). Works in any lattice dimension.
pub fn x_statistic(family: &GaussianFamily, j: u32, p: f64) -> Result<ShellStatistic> {
    shell_covered(family, j)?;
    let mut sum = math::CompensatedSum::new();
    for i in family.lattice().shell_indices(j) {
        sum.add(abs_pow(family.draws()[i], p));
    }
    Ok(ShellStatistic {
        shell: j,
        order: p,
        value: sum.value() / math::pow(2.0, j as f64),
    })
}

/// Telescoping partner `Y_j^{(p)} = 2^{-j} Σ_{1 ≤ |n| ≤ 2^{j-1}} |g_n|^p`,
/// so that `X_j = 2 Y_{j+1} − Y_j` exactly.
pub fn y_statistic(family: &GaussianFamily, j: u32, p: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidArgument("Y statistic needs j >= 1"));
    }
    let mut sum = math::CompensatedSum::new();
    for inner in 0..j {
        shell_covered(family, inner)?;
        for i in family.lattice().shell_indices(inner) {
            sum.add(abs_pow(family.draws()[i], p));
        }
    }
    Ok(sum.value() / math::pow(2.0, j as f64))
}

/// Normalized block sum `X̃_j(t) = 2^{-j/2} Σ_{|n|∼2^j} g_n e^{int}` sampled
/// on an `m`-point grid.
pub fn block_sum(family: &GaussianFamily, j: u32, m: usize) -> Result<TimeGrid> {
    if family.dim() != 1 {
        return Err(Error::UnsupportedDimension(family.dim()));
    }
    if !family.lattice().covers_shell(j) {
        return Err(Error::ShellCoverage {
            shell: j,
            truncation: family.truncation(),
        });
    }
    let radius = 1u32 << j;
    let required = OVERSAMPLING * radius as usize;
    if m < required {
        return Err(Error::Undersampled {
            required,
            requested: m,
        });
    }
    let lattice = crate::lattice::Lattice::line(radius)?;
    let mut coeffs = vec![Complex64::default(); lattice.len()];
    let scale = math::pow(2.0, -(j as f64) / 2.0);
    for (f, g) in family.shell_line(j)? {
        coeffs[lattice.index_of_frequency(f).expect("shell inside radius")] = g * scale;
    }
    let path = SpectralPath::from_coeffs(lattice, coeffs)?;
    synthesize(&path, m)
}

/// `Z_j^{(q)} = ‖X̃_j‖_{L^1}^q` under the normalized measure `dt/(2π)`;
/// the grid is the oversampling contract applied to the shell's top
/// frequency, `M = 8 · 2^j`.
pub fn z_statistic(family: &GaussianFamily, j: u32, q: f64) -> Result<f64> {
    let grid = block_sum(family, j, OVERSAMPLING << j)?;
    Ok(math::pow(grid.mean_abs_pow(1.0), q))
}

/// `M^{2δ} · max_{|n|∼M} |g_n|^2 / Σ_{|n|∼M} |g_n|^2` with `M = 2^j`.
pub fn decay_ratio(family: &GaussianFamily, j: u32, delta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::InvalidArgument("delta must lie in [0, 1/2)"));
    }
    shell_covered(family, j)?;
    let mut max = 0.0f64;
    let mut sum = math::CompensatedSum::new();
    let mut seen = false;
    for i in family.lattice().shell_indices(j) {
        seen = true;
        let a = family.draws()[i].norm_sqr();
        sum.add(a);
        if a > max {
            max = a;
        }
    }
    if !seen {
        return Err(Error::ShellCoverage {
            shell: j,
            truncation: family.truncation(),
        });
    }
    Ok(math::pow(2.0, 2.0 * delta * j as f64) * max / sum.value())
}

/// Lévy modulus ratio on a uniformly sampled path: the supremum of
/// `|β(t) − β(t')| / √(−2 ε ln ε)` over grid pairs with `0 < t − t' ≤ ε`.
///
/// The grid supremum is a lower-bound proxy for the continuum modulus; the
/// loop seam is not wrapped.
pub fn levy_ratio(samples: &[Complex64], dt: f64, eps: f64) -> Result<f64> {
    if !(eps < 1.0) {
        return Err(Error::InvalidArgument("eps must be below 1"));
    }
    if !(dt > 0.0) || eps <= dt {
        return Err(Error::InvalidArgument("eps must exceed the grid spacing"));
    }
    let window = (eps / dt) as usize;
    let mut sup_sq = 0.0f64;
    for lag in 1..=window {
        for k in 0..samples.len().saturating_sub(lag) {
            let d = (samples[k + lag] - samples[k]).norm_sqr();
            if d > sup_sq {
                sup_sq = d;
            }
        }
    }
    Ok(math::sqrt(sup_sq) / math::sqrt(-2.0 * eps * math::ln(eps)))
}

/// Mean, variance, and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary {
            count,
            mean: 0.0,
            variance: 0.0,
            se: 0.0,
        };
    }
    let mut sum = math::CompensatedSum::new();
    for &v in values {
        sum.add(v);
    }
    let mean = sum.value() / count as f64;
    let mut sq = math::CompensatedSum::new();
    for &v in values {
        sq.add((v - mean) * (v - mean));
    }
    let variance = if count > 1 {
        sq.value() / (count - 1) as f64
    } else {
        0.0
    };
    Summary {
        count,
        mean,
        variance,
        se: math::sqrt(variance / count as f64),
    }
}

/// Quantile of a sorted slice by linear interpolation.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let clamped = level.clamp(0.0, 1.0);
    let position = clamped * (sorted.len() - 1) as f64;
    let low = position as usize;
    let high = (low + 1).min(sorted.len() - 1);
    let weight = position - low as f64;
    sorted[low] * (1.0 - weight) + sorted[high] * weight
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    quantile_sorted(&sorted, 0.5)
}
