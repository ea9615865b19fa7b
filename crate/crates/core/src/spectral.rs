//! Gaussian coefficient families and Fourier–Wiener synthesis.
//!
//! A [`GaussianFamily`] holds one independent standard complex Gaussian per
//! lattice point (`E|g_n|^2 = 2`, real and imaginary parts independent
//! standard normals). Weighting by `|n|^{-alpha}` gives the spectral path of
//! a fractional loop: `alpha = 1` is the Brownian loop, `alpha = 0` white
//! noise, `alpha = 1/2` the Benjamin–Ono Gaussian field.
//!
//! Time-side integrals always carry the normalized measure `dt/(2π)`, so
//! Plancherel reads `(1/M) Σ_k |u(t_k)|^2 = Σ_n |û_n|^2` with no stray `2π`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::lattice::Lattice;
use crate::math;
use crate::norms::Exp;
use crate::rng::{line_rank, GaussianSource};
use crate::{fft, Error, Result};

/// Oversampling factor required of synthesis grids.
pub const OVERSAMPLING: usize = 8;

/// Independent standard complex Gaussian draws, one per lattice point.
#[derive(Debug, Clone)]
pub struct GaussianFamily {
    seed: Option<u64>,
    lattice: Lattice,
    draws: Vec<Complex64>,
}

impl GaussianFamily {
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn truncation(&self) -> u32 {
        self.lattice.radius()
    }

    pub fn draws(&self) -> &[Complex64] {
        &self.draws
    }

    /// Draw at a 1-d frequency, if stored.
    pub fn draw_at(&self, frequency: i64) -> Option<Complex64> {
        self.lattice
            .index_of_frequency(frequency)
            .map(|i| self.draws[i])
    }

    /// Test-injection constructor: draw values supplied by the caller.
    pub fn from_draws(lattice: Lattice, draws: Vec<Complex64>) -> Result<Self> {
        if draws.len() != lattice.len() {
            return Err(Error::InvalidArgument(
                "draw count does not match lattice size",
            ));
        }
        Ok(Self {
            seed: None,
            lattice,
            draws,
        })
    }

    /// `(frequency, draw)` pairs of shell `j`; errors when the shell is not
    /// entirely inside the stored index set.
    pub fn shell_line(&self, j: u32) -> Result<impl Iterator<Item = (i64, Complex64)> + '_> {
        if self.dim() != 1 {
            return Err(Error::UnsupportedDimension(self.dim()));
        }
        if !self.lattice.covers_shell(j) {
            return Err(Error::ShellCoverage {
                shell: j,
                truncation: self.truncation(),
            });
        }
        Ok(self
            .lattice
            .shell_indices(j)
            .map(|i| (self.lattice.frequency(i), self.draws[i])))
    }
}

fn fill_line_family(source: &GaussianSource, lattice: &Lattice) -> Vec<Complex64> {
    let inner = lattice.inner();
    let count = lattice.len();
    let mut draws = vec![Complex64::default(); count];
    // ranks 2*inner .. 2*radius form one contiguous keystream segment
    let mut keystream = vec![Complex64::default(); count];
    source.fill_line(2 * u64::from(inner), &mut keystream);
    for (offset, value) in keystream.into_iter().enumerate() {
        let rank = 2 * u64::from(inner) + offset as u64;
        let magnitude = (rank / 2 + 1) as i64;
        let frequency = if rank & 1 == 0 { -magnitude } else { magnitude };
        let index = lattice
            .index_of_frequency(frequency)
            .expect("rank range matches lattice");
        draws[index] = value;
    }
    debug_assert_eq!(
        line_rank(-(i64::from(inner) + 1)),
        2 * u64::from(inner),
        "rank layout drifted from lattice layout"
    );
    draws
}

/// Sample the coefficient family for `0 < |n| <= truncation` in `Z^dim`.
pub fn sample_family(seed: u64, dim: usize, truncation: u32) -> Result<GaussianFamily> {
    let lattice = Lattice::ball(dim, truncation)?;
    Ok(sample_on(seed, lattice))
}

/// Sample only the high-frequency annulus `inner < |n| <= truncation`
/// (1-d). Draws agree with the full family of the same seed.
pub fn sample_family_annulus(seed: u64, inner: u32, truncation: u32) -> Result<GaussianFamily> {
    let lattice = Lattice::line_annulus(inner, truncation)?;
    Ok(sample_on(seed, lattice))
}

fn sample_on(seed: u64, lattice: Lattice) -> GaussianFamily {
    let source = GaussianSource::new(seed);
    let draws = match &lattice {
        Lattice::Line { .. } => fill_line_family(&source, &lattice),
        Lattice::Grid { .. } => (0..lattice.len())
            .map(|i| source.grid_draw(lattice.packed_point(i)))
            .collect(),
    };
    GaussianFamily {
        seed: Some(seed),
        lattice,
        draws,
    }
}

/// Where a spectral path's coefficients came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// `û_n = g_n |n|^{-alpha}` from the family of `seed`.
    Sampled { seed: u64, alpha: f64 },
    /// DFT coefficients of a time-domain bridge path.
    BridgeDft { seed: u64 },
    /// Coefficients supplied directly (tests, file input).
    Injected,
}

/// Truncated coefficient vector `û_n` on the punctured lattice.
#[derive(Debug, Clone)]
pub struct SpectralPath {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
    provenance: Provenance,
}

impl SpectralPath {
    pub fn from_coeffs(lattice: Lattice, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::InvalidArgument(
                "coefficient count does not match lattice size",
            ));
        }
        Ok(Self {
            lattice,
            coeffs,
            provenance: Provenance::Injected,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn truncation(&self) -> u32 {
        self.lattice.radius()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.provenance {
            Provenance::Sampled { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.provenance {
            Provenance::Sampled { seed, .. } | Provenance::BridgeDft { seed } => Some(seed),
            Provenance::Injected => None,
        }
    }

    pub fn coeff_at(&self, frequency: i64) -> Option<Complex64> {
        self.lattice
            .index_of_frequency(frequency)
            .map(|i| self.coeffs[i])
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Restriction to `0 < |n| <= truncation`; the kept coefficients are
    /// identical to the original's, so nested truncations of one seed form a
    /// coupled refinement family.
    pub fn truncated(&self, truncation: u32) -> Result<SpectralPath> {
        if truncation > self.truncation() {
            return Err(Error::InvalidArgument(
                "truncated() cannot extend a spectrum",
            ));
        }
        let lattice = match self.lattice() {
            Lattice::Line { inner, .. } => Lattice::line_annulus(*inner, truncation)?,
            Lattice::Grid { dim, .. } => Lattice::ball(*dim, truncation)?,
        };
        let bound = u64::from(truncation) * u64::from(truncation);
        let coeffs: Vec<Complex64> = (0..self.lattice.len())
            .filter(|&i| self.lattice.norm_sq(i) <= bound)
            .map(|i| self.coeffs[i])
            .collect();
        debug_assert_eq!(coeffs.len(), lattice.len());
        Ok(SpectralPath {
            lattice,
            coeffs,
            provenance: self.provenance,
        })
    }
}

/// Weight a family into the fractional path `û_n = g_n |n|^{-alpha}`.
pub fn build_path(family: &GaussianFamily, alpha: f64) -> Result<SpectralPath> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument("alpha must be nonnegative"));
    }
    let lattice = family.lattice().clone();
    let coeffs = if alpha == 0.0 {
        family.draws().to_vec()
    } else {
        (0..lattice.len())
            .map(|i| {
                let weight = math::pow(lattice.norm_sq(i) as f64, -alpha / 2.0);
                family.draws()[i] * weight
            })
            .collect()
    };
    let provenance = match family.seed() {
        Some(seed) => Provenance::Sampled { seed, alpha },
        None => Provenance::Injected,
    };
    Ok(SpectralPath {
        lattice,
        coeffs,
        provenance,
    })
}

/// Equispaced samples `t_k = 2πk/M` of a synthesized series.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    values: Vec<Complex64>,
}

impl TimeGrid {
    pub(crate) fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self, k: usize) -> f64 {
        math::TAU * k as f64 / self.values.len() as f64
    }

    /// `(1/M) Σ_k |v_k|^p` — the normalized p-th moment of the samples.
    pub fn mean_abs_pow(&self, p: f64) -> f64 {
        mean_abs_pow(&self.values, p)
    }

    /// `L^p` norm under `dt/(2π)`: `((1/M) Σ |v|^p)^{1/p}`, `max` at `p = ∞`.
    pub fn lp_norm(&self, p: Exp) -> f64 {
        lp_norm(&self.values, p)
    }
}

pub(crate) fn mean_abs_pow(values: &[Complex64], p: f64) -> f64 {
    let mut acc = math::CompensatedSum::new();
    for v in values {
        acc.add(math::pow(v.norm_sqr(), p / 2.0));
    }
    acc.value() / values.len() as f64
}

pub(crate) fn lp_norm(values: &[Complex64], p: Exp) -> f64 {
    match p {
        Exp::Infinity => {
            let mut best = 0.0f64;
            for v in values {
                let a = v.norm_sqr();
                if a > best {
                    best = a;
                }
            }
            math::sqrt(best)
        }
        Exp::Finite(p) => math::pow(mean_abs_pow(values, p), 1.0 / p),
    }
}

/// Evaluate the series on `M` points, `values[k] = Σ û_n e^{i n t_k}`.
///
/// `m` is rounded up to the next power of two; the actual grid size is read
/// back from the returned [`TimeGrid`].
pub fn synthesize(path: &SpectralPath, m: usize) -> Result<TimeGrid> {
    if path.dim() != 1 {
        return Err(Error::UnsupportedDimension(path.dim()));
    }
    let required = OVERSAMPLING * path.truncation() as usize;
    if m < required {
        return Err(Error::Undersampled {
            required,
            requested: m,
        });
    }
    let size = m.next_power_of_two();
    let mut buf = vec![Complex64::default(); size];
    for i in 0..path.lattice.len() {
        let f = path.lattice.frequency(i);
        buf[f.rem_euclid(size as i64) as usize] += path.coeffs[i];
    }
    fft::fft(&mut buf, true);
    Ok(TimeGrid::new(buf))
}
