//! Norm evaluation on spectral paths: Fourier–Lebesgue (= modulation =
//! Wiener-amalgam on the torus), Fourier–Besov over dyadic shells, and
//! classical Besov via Littlewood–Paley synthesis.
//!
//! Two partition modes exist side by side: `Sharp` indicator shells for the
//! sequence-side manipulations, and a `Smooth` C^∞ window family (built from
//! `exp(-1/x)` cutoffs) for the classical Besov norm. Shell weights likewise
//! come in both forms the analysis uses, exact `⟨n⟩^s` per coefficient and
//! dyadic `2^{js}` per shell; equivalence constants between the two depend
//! on `s`, so each identity test pins the form it needs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::shell_index;
use crate::math::{self, CompensatedSum};
use crate::spectral::{SpectralPath, OVERSAMPLING};
use crate::{fft, Error, Result};
use alloc::vec;
use num_complex::Complex64;

/// Extended exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exp {
    Finite(f64),
    Infinity,
}

impl Exp {
    pub fn parse(text: &str) -> Result<Self> {
        if text.eq_ignore_ascii_case("inf") || text == "∞" {
            return Ok(Exp::Infinity);
        }
        let value: f64 = text
            .parse()
            .map_err(|_| Error::InvalidArgument("exponent must be a number or \"inf\""))?;
        Exp::finite(value)
    }

    pub fn finite(value: f64) -> Result<Self> {
        if !(value >= 1.0) {
            return Err(Error::InvalidArgument("exponents live in [1, inf]"));
        }
        Ok(Exp::Finite(value))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exp::Infinity)
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exp::Finite(v) => write!(f, "{v}"),
            Exp::Infinity => write!(f, "inf"),
        }
    }
}

/// Which family of spaces a [`NormSpec`] addresses. `Modulation` and
/// `WienerAmalgam` evaluate identically to `FourierLebesgue`: on the torus
/// the three coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    FourierLebesgue,
    Modulation,
    WienerAmalgam,
    FourierBesov,
    Besov,
}

impl SpaceKind {
    fn token(self) -> &'static str {
        match self {
            SpaceKind::FourierLebesgue => "fl",
            SpaceKind::Modulation => "mod",
            SpaceKind::WienerAmalgam => "wa",
            SpaceKind::FourierBesov => "fbesov",
            SpaceKind::Besov => "besov",
        }
    }
}

/// `(space, s, p, q, dim)` identifying one norm. Parsed from the CLI form
/// `space:s:p:q` with `inf` for `∞` and `.`/`·` marking an unused exponent,
/// e.g. `fbesov:0.5:2:inf` or `fl:0.3:.:2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub space: SpaceKind,
    pub s: f64,
    pub p: Option<Exp>,
    pub q: Option<Exp>,
    pub dim: usize,
}

impl NormSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let space = match parts.next() {
            Some("fl") => SpaceKind::FourierLebesgue,
            Some("mod") => SpaceKind::Modulation,
            Some("wa") => SpaceKind::WienerAmalgam,
            Some("fbesov") => SpaceKind::FourierBesov,
            Some("besov") => SpaceKind::Besov,
            _ => {
                return Err(Error::InvalidArgument(
                    "space must be one of fl, mod, wa, fbesov, besov",
                ))
            }
        };
        let s: f64 = parts
            .next()
            .ok_or(Error::InvalidArgument("missing regularity s"))?
            .parse()
            .map_err(|_| Error::InvalidArgument("regularity s must be a number"))?;
        let mut exponent = || -> Result<Option<Exp>> {
            match parts.next() {
                None | Some(".") | Some("·") | Some("-") => Ok(None),
                Some(tok) => Exp::parse(tok).map(Some),
            }
        };
        let p = exponent()?;
        let q = exponent()?;
        if parts.next().is_some() {
            return Err(Error::InvalidArgument("norm spec has too many fields"));
        }
        let spec = NormSpec {
            space,
            s,
            p,
            q,
            dim: 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.space {
            SpaceKind::FourierLebesgue | SpaceKind::Modulation | SpaceKind::WienerAmalgam => {
                if self.q.is_none() {
                    return Err(Error::InvalidArgument("this space needs an exponent q"));
                }
            }
            SpaceKind::FourierBesov | SpaceKind::Besov => {
                if self.p.is_none() || self.q.is_none() {
                    return Err(Error::InvalidArgument("this space needs exponents p and q"));
                }
                if self.space == SpaceKind::Besov && self.dim != 1 {
                    return Err(Error::UnsupportedDimension(self.dim));
                }
            }
        }
        Ok(())
    }

    pub fn to_string_form(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = write!(out, "{}:{}", self.space.token(), self.s);
        match self.p {
            Some(p) => {
                let _ = write!(out, ":{p}");
            }
            None => out.push_str(":."),
        }
        match self.q {
            Some(q) => {
                let _ = write!(out, ":{q}");
            }
            None => out.push_str(":."),
        }
        out
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_form())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    /// Indicator shells `S_j`; integer-exact membership.
    Sharp,
    /// Smooth Littlewood–Paley windows with `supp φ_0 ⊂ {|ξ| ≤ 2}`,
    /// `supp φ ⊂ {1/2 ≤ |ξ| ≤ 2}`, summing to 1 on the covered lattice.
    Smooth,
}

/// Shell weight form: exact `⟨n⟩^s` per coefficient or `2^{js}` per shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightForm {
    Bracket,
    Dyadic,
}

/// Dyadic decomposition covering shells `0..=jmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    mode: PartitionMode,
    jmax: u32,
}

/// Smooth step: 1 for `t <= 1`, 0 for `t >= 2`, strictly decreasing between,
/// built from `f(x) = exp(-1/x)`.
fn smooth_step(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let rise = math::exp(-1.0 / (2.0 - t));
        let fall = math::exp(-1.0 / (t - 1.0));
        rise / (rise + fall)
    }
}

impl DyadicPartition {
    pub fn new(mode: PartitionMode, jmax: u32) -> Self {
        Self { mode, jmax }
    }

    /// Smallest partition covering spectra truncated at `truncation`.
    pub fn covering(mode: PartitionMode, truncation: u32) -> Self {
        let r = u64::from(truncation.max(1));
        Self::new(mode, shell_index(r * r))
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    pub fn jmax(&self) -> u32 {
        self.jmax
    }

    pub fn covers(&self, truncation: u32) -> bool {
        u64::from(truncation) <= (1u64 << self.jmax)
    }

    /// Window value `φ_j` at a lattice point with squared norm `norm_sq`.
    pub fn window(&self, j: u32, norm_sq: u64) -> f64 {
        match self.mode {
            PartitionMode::Sharp => {
                if shell_index(norm_sq) == j {
                    1.0
                } else {
                    0.0
                }
            }
            PartitionMode::Smooth => {
                let xi = math::sqrt(norm_sq as f64);
                if j == 0 {
                    smooth_step(xi)
                } else {
                    let scale = math::pow(2.0, -(j as f64));
                    smooth_step(scale * xi) - smooth_step(2.0 * scale * xi)
                }
            }
        }
    }

    /// Shells on which a point of shell `j0` can have a nonzero window.
    fn active_shells(&self, j0: u32) -> core::ops::RangeInclusive<u32> {
        match self.mode {
            PartitionMode::Sharp => j0..=j0,
            PartitionMode::Smooth => j0.saturating_sub(1)..=j0,
        }
    }
}

struct LqAccumulator {
    exp: Exp,
    sum: CompensatedSum,
    max: f64,
}

impl LqAccumulator {
    fn new(exp: Exp) -> Self {
        Self {
            exp,
            sum: CompensatedSum::new(),
            max: 0.0,
        }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        match self.exp {
            Exp::Finite(q) => self.sum.add(math::pow(x, q)),
            Exp::Infinity => {
                if x > self.max {
                    self.max = x;
                }
            }
        }
    }

    fn finish(&self) -> f64 {
        match self.exp {
            Exp::Finite(q) => math::pow(self.sum.value(), 1.0 / q),
            Exp::Infinity => self.max,
        }
    }
}

#[inline]
fn bracket_weight(norm_sq: u64, s: f64) -> f64 {
    math::pow(1.0 + norm_sq as f64, s / 2.0)
}

/// Fourier–Lebesgue norm `‖⟨n⟩^s û(n)‖_{ℓ^q}`; on the torus this is also the
/// modulation and Wiener-amalgam norm with the same `(s, q)`.
pub fn fl_norm(path: &SpectralPath, s: f64, q: Exp) -> Result<f64> {
    if let Exp::Finite(v) = q {
        if !(v >= 1.0) {
            return Err(Error::InvalidArgument("q must be at least 1"));
        }
    }
    let lattice = path.lattice();
    let mut acc = LqAccumulator::new(q);
    for (i, coeff) in path.coeffs().iter().enumerate() {
        let x = bracket_weight(lattice.norm_sq(i), s) * math::sqrt(coeff.norm_sqr());
        acc.push(x);
    }
    Ok(acc.finish())
}

/// Fourier–Besov norm with the default `⟨n⟩^s` bracket weights.
pub fn fourier_besov_norm(
    path: &SpectralPath,
    s: f64,
    p: Exp,
    q: Exp,
    partition: &DyadicPartition,
) -> Result<f64> {
    fourier_besov_norm_with(path, s, p, q, partition, WeightForm::Bracket)
}

/// Fourier–Besov norm with an explicit weight form.
pub fn fourier_besov_norm_with(
    path: &SpectralPath,
    s: f64,
    p: Exp,
    q: Exp,
    partition: &DyadicPartition,
    weights: WeightForm,
) -> Result<f64> {
    if !partition.covers(path.truncation()) {
        return Err(Error::PartitionCoverage {
            jmax: partition.jmax(),
            truncation: path.truncation(),
        });
    }
    let lattice = path.lattice();
    let mut shells: Vec<LqAccumulator> = (0..=partition.jmax())
        .map(|_| LqAccumulator::new(p))
        .collect();
    for (i, coeff) in path.coeffs().iter().enumerate() {
        let ns = lattice.norm_sq(i);
        let magnitude = math::sqrt(coeff.norm_sqr());
        let j0 = shell_index(ns);
        for j in partition.active_shells(j0) {
            let w = partition.window(j, ns);
            if w == 0.0 {
                continue;
            }
            let x = match weights {
                WeightForm::Bracket => bracket_weight(ns, s) * w * magnitude,
                WeightForm::Dyadic => w * magnitude,
            };
            shells[j as usize].push(x);
        }
    }
    let mut outer = LqAccumulator::new(q);
    for (j, acc) in shells.iter().enumerate() {
        let mut value = acc.finish();
        if weights == WeightForm::Dyadic {
            value *= math::pow(2.0, j as f64 * s);
        }
        outer.push(value);
    }
    Ok(outer.finish())
}

/// Classical Besov norm: per shell, synthesize the windowed block on an
/// `M`-point grid, take `L^p` under `dt/(2π)`, and combine `2^{js}`-weighted
/// block norms in `ℓ^q`.
pub fn besov_norm(
    path: &SpectralPath,
    s: f64,
    p: Exp,
    q: Exp,
    partition: &DyadicPartition,
    m: usize,
) -> Result<f64> {
    if path.dim() != 1 {
        return Err(Error::UnsupportedDimension(path.dim()));
    }
    if !partition.covers(path.truncation()) {
        return Err(Error::PartitionCoverage {
            jmax: partition.jmax(),
            truncation: path.truncation(),
        });
    }
    let required = OVERSAMPLING << partition.jmax();
    if m < required {
        return Err(Error::Undersampled {
            required,
            requested: m,
        });
    }
    let size = m.next_power_of_two();
    let lattice = path.lattice();
    let mut outer = LqAccumulator::new(q);
    let mut buf = vec![Complex64::default(); size];
    for j in 0..=partition.jmax() {
        buf.fill(Complex64::default());
        let mut touched = false;
        for (i, coeff) in path.coeffs().iter().enumerate() {
            let ns = lattice.norm_sq(i);
            let w = partition.window(j, ns);
            if w == 0.0 {
                continue;
            }
            let f = lattice.frequency(i);
            buf[f.rem_euclid(size as i64) as usize] += coeff * w;
            touched = true;
        }
        let block_norm = if touched {
            fft::fft(&mut buf, true);
            crate::spectral::lp_norm(&buf, p)
        } else {
            0.0
        };
        outer.push(math::pow(2.0, j as f64 * s) * block_norm);
    }
    Ok(outer.finish())
}

/// Evaluate a [`NormSpec`] on a path, building the covering partition the
/// space calls for (`Sharp` for Fourier–Besov, `Smooth` for Besov).
pub fn evaluate(spec: &NormSpec, path: &SpectralPath) -> Result<f64> {
    spec.validate()?;
    match spec.space {
        SpaceKind::FourierLebesgue | SpaceKind::Modulation | SpaceKind::WienerAmalgam => {
            fl_norm(path, spec.s, spec.q.expect("validated"))
        }
        SpaceKind::FourierBesov => {
            let partition = DyadicPartition::covering(PartitionMode::Sharp, path.truncation());
            fourier_besov_norm(
                path,
                spec.s,
                spec.p.expect("validated"),
                spec.q.expect("validated"),
                &partition,
            )
        }
        SpaceKind::Besov => {
            let partition = DyadicPartition::covering(PartitionMode::Smooth, path.truncation());
            let m = OVERSAMPLING << partition.jmax();
            besov_norm(
                path,
                spec.s,
                spec.p.expect("validated"),
                spec.q.expect("validated"),
                &partition,
                m,
            )
        }
    }
}
