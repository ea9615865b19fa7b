//! Time-domain Brownian loop construction and the spectral cross-validation:
//! DFT coefficients of the periodized, centered bridge must follow the
//! `g_n / (√(2π) i n)` law, so `E|ĉ_n|² = 1/(π n²)` under `Var(g) = 2`.
//!
//! The `√(2π)` and `Var = 2` bookkeeping is centralized in
//! [`FOURIER_WIENER_RESCALE`] and [`rescale_to_fourier_wiener`]; this is the
//! one place where the loop's `dt` increments meet the spectral convention
//! that drops `2π` factors.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::lattice::Lattice;
use crate::math;
use crate::rng::GaussianSource;
use crate::spectral::{Provenance, SpectralPath};
use crate::{fft, Error, Result};

/// Multiplying a bridge-derived spectrum by this factor puts it on the
/// Fourier–Wiener normalization `û_n = g_n/n` (up to the unimodular `i`).
pub const FOURIER_WIENER_RESCALE: f64 = 2.506_628_274_631_000_2; // √(2π)

/// Discrete Brownian loop on `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct BridgePath {
    seed: u64,
    increments: Vec<Complex64>,
    path: Vec<Complex64>,
    loop_values: Vec<Complex64>,
    centered: Vec<Complex64>,
    endpoint: Complex64,
    closure_residual: f64,
}

impl BridgePath {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn grid_size(&self) -> usize {
        self.increments.len()
    }

    pub fn dt(&self) -> f64 {
        math::TAU / self.grid_size() as f64
    }

    /// Raw increments `db_k`, complex Gaussian with `E|db|² = 2·dt`.
    pub fn increments(&self) -> &[Complex64] {
        &self.increments
    }

    /// Cumulative path `b(t_k)`, `k = 0..M` (so `path[M] = b(2π)`).
    pub fn path(&self) -> &[Complex64] {
        &self.path
    }

    /// Detrended loop `β(t_k) = b(t_k) − t_k b(2π)/2π`, `k = 0..M-1`.
    pub fn loop_values(&self) -> &[Complex64] {
        &self.loop_values
    }

    /// Mean-zero loop `u(t_k) = β(t_k) − mean(β)`.
    pub fn centered(&self) -> &[Complex64] {
        &self.centered
    }

    /// `b(2π)`; kept so the non-periodic decomposition (its `g_0 t` drift)
    /// could be reconstituted.
    pub fn endpoint(&self) -> Complex64 {
        self.endpoint
    }

    /// `|β(2π) − β(0)|` accumulated through the detrended increments.
    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }
}

/// Detrend cumulative increments into a loop: returns `(β values, b(2π),
/// |β(2π)|)`. Running the drift subtraction through the increments keeps the
/// closure error at accumulated rounding.
fn detrend(increments: &[Complex64]) -> (Vec<Complex64>, Complex64, f64) {
    let m = increments.len();
    let endpoint = increments.iter().sum::<Complex64>();
    let drift = endpoint / m as f64;
    let mut loop_values = Vec::with_capacity(m);
    let mut beta = Complex64::default();
    for &db in increments {
        loop_values.push(beta);
        beta += db - drift;
    }
    (loop_values, endpoint, math::sqrt(beta.norm_sqr()))
}

/// Sample a bridge on `m` grid steps. Increments carry per-component
/// variance `dt = 2π/m`, i.e. `db = √dt · g` with the standard complex `g`.
pub fn sample_bridge(seed: u64, m: usize) -> Result<BridgePath> {
    if m < 2 {
        return Err(Error::InvalidArgument("bridge grids need at least 2 steps"));
    }
    let source = GaussianSource::new(seed);
    let dt = math::TAU / m as f64;
    let scale = math::sqrt(dt);
    let mut increments = vec![Complex64::default(); m];
    source.fill_bridge(0, &mut increments);
    for db in increments.iter_mut() {
        *db *= scale;
    }

    let mut path = Vec::with_capacity(m + 1);
    let mut acc = Complex64::default();
    path.push(acc);
    for &db in &increments {
        acc += db;
        path.push(acc);
    }

    let (loop_values, endpoint, closure_residual) = detrend(&increments);
    let mean = loop_values.iter().sum::<Complex64>() / m as f64;
    let centered: Vec<Complex64> = loop_values.iter().map(|&b| b - mean).collect();

    Ok(BridgePath {
        seed,
        increments,
        path,
        loop_values,
        centered,
        endpoint,
        closure_residual,
    })
}

/// DFT coefficients `ĉ_n = (1/M) Σ_k u(t_k) e^{-i n t_k}` of the centered
/// loop for `0 < |n| ≤ truncation`; requires `truncation ≤ M/8` so aliasing
/// stays under the spectral decay.
pub fn bridge_to_spectrum(bridge: &BridgePath, truncation: u32) -> Result<SpectralPath> {
    let m = bridge.grid_size();
    if truncation as usize > m / 8 {
        return Err(Error::Undersampled {
            required: 8 * truncation as usize,
            requested: m,
        });
    }
    let lattice = Lattice::line(truncation)?;
    let spectrum = if m.is_power_of_two() {
        let mut buf = bridge.centered.to_vec();
        fft::fft(&mut buf, false);
        (0..lattice.len())
            .map(|i| {
                let f = lattice.frequency(i);
                buf[f.rem_euclid(m as i64) as usize] / m as f64
            })
            .collect()
    } else {
        // direct evaluation for awkward grid sizes
        let mut coeffs = vec![Complex64::default(); lattice.len()];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let f = lattice.frequency(i) as f64;
            let mut acc = Complex64::default();
            for (k, &u) in bridge.centered.iter().enumerate() {
                let angle = -f * math::TAU * k as f64 / m as f64;
                acc += u * Complex64::new(math::cos(angle), math::sin(angle));
            }
            *slot = acc / m as f64;
        }
        coeffs
    };
    Ok(SpectralPath::from_coeffs(lattice, spectrum)?
        .with_provenance(Provenance::BridgeDft { seed: bridge.seed }))
}

/// Rescale bridge DFT coefficients onto the Fourier–Wiener convention.
pub fn rescale_to_fourier_wiener(path: &SpectralPath) -> SpectralPath {
    let coeffs = path
        .coeffs()
        .iter()
        .map(|&c| c * FOURIER_WIENER_RESCALE)
        .collect();
    SpectralPath::from_coeffs(path.lattice().clone(), coeffs)
        .expect("same lattice")
        .with_provenance(path.provenance())
}

/// Empirical second moments `E[ĉ_m conj(ĉ_n)]` over replica spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub frequencies: Vec<i64>,
    /// Row-major `E[ĉ_m conj(ĉ_n)]`.
    pub second_moments: Vec<Complex64>,
    /// Standard error of each entry (complex components combined).
    pub se: Vec<f64>,
    pub sample_count: usize,
}

impl CovarianceReport {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.second_moments[row * self.frequencies.len() + col]
    }

    pub fn entry_se(&self, row: usize, col: usize) -> f64 {
        self.se[row * self.frequencies.len() + col]
    }
}

/// Cross-covariances of selected coefficients over ≥ 10³ replica samples.
/// Each inner slice holds the coefficients aligned with `frequencies`.
pub fn covariance_report(
    samples: &[Vec<Complex64>],
    frequencies: &[i64],
) -> Result<CovarianceReport> {
    const MIN_SAMPLES: usize = 1000;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            required: MIN_SAMPLES,
            actual: samples.len(),
        });
    }
    let d = frequencies.len();
    if samples.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidArgument(
            "sample rows must match the frequency list",
        ));
    }
    let n = samples.len() as f64;
    let mut moments = vec![Complex64::default(); d * d];
    let mut spread = vec![0.0f64; d * d];
    for row in 0..d {
        for col in 0..d {
            let mut sum = Complex64::default();
            for sample in samples {
                sum += sample[row] * sample[col].conj();
            }
            let mean = sum / n;
            let mut var = 0.0;
            for sample in samples {
                var += (sample[row] * sample[col].conj() - mean).norm_sqr();
            }
            moments[row * d + col] = mean;
            spread[row * d + col] = math::sqrt(var / (n - 1.0) / n);
        }
    }
    Ok(CovarianceReport {
        frequencies: frequencies.to_vec(),
        second_moments: moments,
        se: spread,
        sample_count: samples.len(),
    })
}

/// `E|z|⁴ / (E|z|²)²` of a complex sample; 2 for the complex Gaussian.
pub fn complex_kurtosis_ratio(samples: &[Complex64]) -> f64 {
    let n = samples.len() as f64;
    let m2 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
    let m4 = samples
        .iter()
        .map(|z| {
            let a = z.norm_sqr();
            a * a
        })
        .sum::<f64>()
        / n;
    m4 / (m2 * m2)
}
