//! Hermite polynomials, Wick ordering of `|g|^{2n}`, the exact multilinear
//! decomposition of `L^{2k}` block norms, chaos projections of shell
//! functionals, and hypercontractive moment checks.
//!
//! The resonance sums are enumerated exhaustively (no convolution tricks):
//! they serve as correctness oracles, so only the shell caps keep them
//! affordable. Wick coefficients hard-code `Var(g) = 2`; the tests re-derive
//! them from Hermite products.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math::{self, CompensatedSum};
use crate::spectral::GaussianFamily;
use crate::stats::block_sum;
use crate::{Error, Result};

/// Probabilists' Hermite polynomial `H_n(x)`, generating function
/// `e^{tx - t²/2}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0; // H_0
    if n == 0 {
        return prev;
    }
    let mut cur = x; // H_1
    for m in 1..n {
        let next = x * cur - m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Wick-ordered `:|g|^{2n}:` for the standard complex Gaussian, `n ≤ 3`:
/// `:|g|²: = |g|² − 2`, `:|g|⁴: = |g|⁴ − 8|g|² + 8`,
/// `:|g|⁶: = |g|⁶ − 18|g|⁴ + 72|g|² − 48`.
pub fn wick_abs2n(g: Complex64, n: u32) -> Result<f64> {
    let a = g.norm_sqr();
    match n {
        1 => Ok(a - 2.0),
        2 => Ok(a * a - 8.0 * a + 8.0),
        3 => Ok(a * a * a - 18.0 * a * a + 72.0 * a - 48.0),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// Split of an `L^{2k}` block norm (to the `2k`-th power) into resonance
/// classes. `lhs` is the oversampled quadrature of the block norm, which the
/// class sums must reproduce exactly up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosDecomposition {
    pub shell: u32,
    pub half_order: u32,
    pub lhs: f64,
    /// Fully paired tuples (for `k = 2` the closed form `2·4^{-j}(Σ|g|²)²`
    /// plus the diagonal correction reproduces this class).
    pub paired: f64,
    /// Pair-free resonant tuples (II).
    pub no_pair: f64,
    /// Fully paired tuples containing a "four of a kind" (error type i).
    pub four_of_a_kind: f64,
    /// Partially paired tuples (error type ii; empty when `k = 2`).
    pub partial_pair: f64,
    /// The `−2^{-2j} Σ|g|⁴` diagonal correction of the `p = 4` display
    /// (zero in classifier form).
    pub diagonal: f64,
}

impl ChaosDecomposition {
    /// Sum of all right-hand-side classes.
    pub fn class_total(&self) -> f64 {
        self.paired + self.no_pair + self.four_of_a_kind + self.partial_pair + self.diagonal
    }
}

/// Tuple counts from the exhaustive classifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ResonanceCounts {
    pub total: u64,
    pub paired: u64,
    pub no_pair: u64,
    pub four_of_a_kind: u64,
    pub partial_pair: u64,
}

/// Dense draw table over shell `j`: index by `frequency + 2^j`.
struct ShellTable {
    draws: Vec<Complex64>,
    freqs: Vec<i64>,
    lo: i64, // exclusive magnitude bound
    hi: i64,
}

impl ShellTable {
    fn build(family: &GaussianFamily, j: u32) -> Result<Self> {
        let hi = 1i64 << j;
        let lo = if j == 0 { 0 } else { 1i64 << (j - 1) };
        let mut draws = vec![Complex64::default(); (2 * hi + 1) as usize];
        let mut freqs = Vec::with_capacity(2 * (hi - lo) as usize);
        for (f, g) in family.shell_line(j)? {
            draws[(f + hi) as usize] = g;
            freqs.push(f);
        }
        Ok(Self {
            draws,
            freqs,
            lo,
            hi,
        })
    }

    #[inline]
    fn contains(&self, f: i64) -> bool {
        let a = f.abs();
        a > self.lo && a <= self.hi
    }

    #[inline]
    fn get(&self, f: i64) -> Complex64 {
        self.draws[(f + self.hi) as usize]
    }

    fn frequencies(&self) -> impl Iterator<Item = i64> + '_ {
        self.freqs.iter().copied()
    }
}

/// The `p = 4` display: `lhs = I + II + III` with
/// `I = 2·2^{-2j} (Σ|g_n|²)²`, `II` the pair-free resonant sum over
/// `n₁+n₂ = m₁+m₂`, and `III = −2^{-2j} Σ|g_n|⁴`.
pub fn l4_block_decomposition(family: &GaussianFamily, j: u32) -> Result<ChaosDecomposition> {
    let table = ShellTable::build(family, j)?;
    let norm = math::pow(2.0, -2.0 * j as f64);

    let mut sum_sq = CompensatedSum::new();
    let mut sum_quad = CompensatedSum::new();
    for f in table.frequencies() {
        let a = table.get(f).norm_sqr();
        sum_sq.add(a);
        sum_quad.add(a * a);
    }
    let paired = 2.0 * norm * sum_sq.value() * sum_sq.value();
    let diagonal = -norm * sum_quad.value();
    let no_pair = norm * no_pair_sum_k2(&table);

    let grid = block_sum(family, j, crate::spectral::OVERSAMPLING << j)?;
    let lhs = grid.mean_abs_pow(4.0);

    Ok(ChaosDecomposition {
        shell: j,
        half_order: 2,
        lhs,
        paired,
        no_pair,
        four_of_a_kind: 0.0,
        partial_pair: 0.0,
        diagonal,
    })
}

fn no_pair_sum_k2(table: &ShellTable) -> f64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for n1 in table.frequencies() {
        let g1 = table.get(n1);
        for n2 in table.frequencies() {
            let prod = g1 * table.get(n2);
            let total = n1 + n2;
            let mut sub = Complex64::default();
            for m1 in table.frequencies() {
                let m2 = total - m1;
                if !table.contains(m2) {
                    continue;
                }
                if m1 == n1 || m1 == n2 || m2 == n1 || m2 == n2 {
                    continue;
                }
                sub += (table.get(m1) * table.get(m2)).conj();
            }
            let term = prod * sub;
            re.add(term.re);
            im.add(term.im);
        }
    }
    debug_assert!(math::abs(im.value()) <= 1e-9 * (1.0 + math::abs(re.value())));
    re.value()
}

#[inline]
fn sorted3(mut a: [i64; 3]) -> [i64; 3] {
    if a[0] > a[1] {
        a.swap(0, 1);
    }
    if a[1] > a[2] {
        a.swap(1, 2);
    }
    if a[0] > a[1] {
        a.swap(0, 1);
    }
    a
}

enum TupleClass {
    Paired,
    FourOfAKind,
    NoPair,
    PartialPair,
}

#[inline]
fn classify_k2(n1: i64, n2: i64, m1: i64, m2: i64) -> TupleClass {
    let multiset_equal = (m1 == n1 && m2 == n2) || (m1 == n2 && m2 == n1);
    if multiset_equal {
        if n1 == n2 {
            TupleClass::FourOfAKind
        } else {
            TupleClass::Paired
        }
    } else if m1 == n1 || m1 == n2 || m2 == n1 || m2 == n2 {
        TupleClass::PartialPair
    } else {
        TupleClass::NoPair
    }
}

#[inline]
fn classify_k3_sorted(
    sorted_n: [i64; 3],
    n_has_repeat: bool,
    n: [i64; 3],
    m: [i64; 3],
) -> TupleClass {
    if sorted3(m) == sorted_n {
        if n_has_repeat {
            TupleClass::FourOfAKind
        } else {
            TupleClass::Paired
        }
    } else {
        for a in n {
            for b in m {
                if a == b {
                    return TupleClass::PartialPair;
                }
            }
        }
        TupleClass::NoPair
    }
}

/// Plain running sums over one outer-tuple slice; merged compensated so the
/// innermost loop stays cheap without giving up the exact-identity budget.
#[derive(Debug, Clone, Copy, Default)]
struct ClassSubtotals {
    paired: f64,
    no_pair: f64,
    four_of_a_kind: f64,
    partial_pair: f64,
    counts: [u64; 4],
}

impl ClassSubtotals {
    #[inline]
    fn add(&mut self, class: TupleClass, value: f64) {
        match class {
            TupleClass::Paired => {
                self.paired += value;
                self.counts[0] += 1;
            }
            TupleClass::NoPair => {
                self.no_pair += value;
                self.counts[1] += 1;
            }
            TupleClass::FourOfAKind => {
                self.four_of_a_kind += value;
                self.counts[2] += 1;
            }
            TupleClass::PartialPair => {
                self.partial_pair += value;
                self.counts[3] += 1;
            }
        }
    }
}

struct ClassAccumulators {
    paired: CompensatedSum,
    no_pair: CompensatedSum,
    four_of_a_kind: CompensatedSum,
    partial_pair: CompensatedSum,
    counts: ResonanceCounts,
}

impl ClassAccumulators {
    fn new() -> Self {
        Self {
            paired: CompensatedSum::new(),
            no_pair: CompensatedSum::new(),
            four_of_a_kind: CompensatedSum::new(),
            partial_pair: CompensatedSum::new(),
            counts: ResonanceCounts::default(),
        }
    }

    fn merge(&mut self, local: ClassSubtotals) {
        self.paired.add(local.paired);
        self.no_pair.add(local.no_pair);
        self.four_of_a_kind.add(local.four_of_a_kind);
        self.partial_pair.add(local.partial_pair);
        self.counts.paired += local.counts[0];
        self.counts.no_pair += local.counts[1];
        self.counts.four_of_a_kind += local.counts[2];
        self.counts.partial_pair += local.counts[3];
        self.counts.total += local.counts.iter().sum::<u64>();
    }
}

fn enumerate_k2(table: &ShellTable, acc: &mut ClassAccumulators) {
    for n1 in table.frequencies() {
        let g1 = table.get(n1);
        for n2 in table.frequencies() {
            let prod = g1 * table.get(n2);
            let total = n1 + n2;
            let mut local = ClassSubtotals::default();
            for m1 in table.frequencies() {
                let m2 = total - m1;
                if !table.contains(m2) {
                    continue;
                }
                let term = prod * (table.get(m1) * table.get(m2)).conj();
                local.add(classify_k2(n1, n2, m1, m2), term.re);
            }
            acc.merge(local);
        }
    }
}

fn enumerate_k3(table: &ShellTable, acc: &mut ClassAccumulators) {
    for n1 in table.frequencies() {
        let g1 = table.get(n1);
        for n2 in table.frequencies() {
            let g12 = g1 * table.get(n2);
            for n3 in table.frequencies() {
                let prod_n = g12 * table.get(n3);
                let total = n1 + n2 + n3;
                let sorted_n = sorted3([n1, n2, n3]);
                let n_has_repeat = sorted_n[0] == sorted_n[1] || sorted_n[1] == sorted_n[2];
                let mut local = ClassSubtotals::default();
                for m1 in table.frequencies() {
                    let cm1 = table.get(m1).conj();
                    let rest = total - m1;
                    for m2 in table.frequencies() {
                        let m3 = rest - m2;
                        if !table.contains(m3) {
                            continue;
                        }
                        let term = prod_n * cm1 * (table.get(m2) * table.get(m3)).conj();
                        let class =
                            classify_k3_sorted(sorted_n, n_has_repeat, [n1, n2, n3], [m1, m2, m3]);
                        local.add(class, term.re);
                    }
                }
                acc.merge(local);
            }
        }
    }
}

const K3_SHELL_CAP: u32 = 6;

/// Exhaustive classification of the `2k`-fold resonant sum over shell `j`
/// into fully-paired, pair-free, four-of-a-kind (type i), and partial-pair
/// (type ii) classes. `k = 3` is capped at `j ≤ 6` (O(shell⁵) enumeration).
pub fn l2k_block_decomposition(
    family: &GaussianFamily,
    j: u32,
    k: u32,
) -> Result<ChaosDecomposition> {
    if !(k == 2 || k == 3) {
        return Err(Error::UnsupportedOrder(k));
    }
    if k == 3 && j > K3_SHELL_CAP {
        return Err(Error::InvalidArgument(
            "k = 3 decompositions are capped at shell 6",
        ));
    }
    let table = ShellTable::build(family, j)?;
    let mut acc = ClassAccumulators::new();
    match k {
        2 => enumerate_k2(&table, &mut acc),
        _ => enumerate_k3(&table, &mut acc),
    }
    let norm = math::pow(2.0, -(k as f64) * j as f64);
    let grid = block_sum(family, j, crate::spectral::OVERSAMPLING << j)?;
    let lhs = grid.mean_abs_pow(2.0 * k as f64);
    Ok(ChaosDecomposition {
        shell: j,
        half_order: k,
        lhs,
        paired: norm * acc.paired.value(),
        no_pair: norm * acc.no_pair.value(),
        four_of_a_kind: norm * acc.four_of_a_kind.value(),
        partial_pair: norm * acc.partial_pair.value(),
        diagonal: 0.0,
    })
}

/// Classify the resonant tuples of shell `j` by count only; the ground-truth
/// enumerator behind the algebraic identities.
pub fn classify_resonances(j: u32, k: u32) -> Result<ResonanceCounts> {
    if !(k == 2 || k == 3) {
        return Err(Error::UnsupportedOrder(k));
    }
    if k == 3 && j > K3_SHELL_CAP {
        return Err(Error::InvalidArgument(
            "k = 3 decompositions are capped at shell 6",
        ));
    }
    let lattice = crate::lattice::Lattice::line(1 << j)?;
    let draws = vec![Complex64::new(1.0, 0.0); lattice.len()];
    let family = GaussianFamily::from_draws(lattice, draws)?;
    let table = ShellTable::build(&family, j)?;
    let mut acc = ClassAccumulators::new();
    match k {
        2 => enumerate_k2(&table, &mut acc),
        _ => enumerate_k3(&table, &mut acc),
    }
    Ok(acc.counts)
}

/// Chaos projection of `F_j = 2^{-j} Σ_{|n|∼2^j} |g_n|^{2k}`: the list of
/// `(ℓ, F_j^{(ℓ)})` with `F_j = Σ_ℓ F_j^{(ℓ)}` exactly.
///
/// For `k = 2`: `F^{(0)} = 8·#S_j/2^j`, `F^{(1)} = 8·2^{-j} Σ :|g_n|²:`,
/// `F^{(2)} = 2^{-j} Σ :|g_n|⁴:` (the inverse of the Wick formulas,
/// `|g|⁴ = :|g|⁴: + 8:|g|²: + 8`).
pub fn chaos_project_f(family: &GaussianFamily, j: u32, k: u32) -> Result<Vec<(u32, f64)>> {
    let scale = math::pow(2.0, -(j as f64));
    let shell_count = {
        if family.dim() != 1 {
            return Err(Error::UnsupportedDimension(family.dim()));
        }
        if !family.lattice().covers_shell(j) {
            return Err(Error::ShellCoverage {
                shell: j,
                truncation: family.truncation(),
            });
        }
        family.lattice().shell_len(j) as f64
    };
    match k {
        1 => {
            let mut first = CompensatedSum::new();
            for (_, g) in family.shell_line(j)? {
                first.add(wick_abs2n(g, 1)?);
            }
            Ok(vec![
                (0, 2.0 * shell_count * scale),
                (1, scale * first.value()),
            ])
        }
        2 => {
            let mut first = CompensatedSum::new();
            let mut second = CompensatedSum::new();
            for (_, g) in family.shell_line(j)? {
                first.add(wick_abs2n(g, 1)?);
                second.add(wick_abs2n(g, 2)?);
            }
            Ok(vec![
                (0, 8.0 * shell_count * scale),
                (1, 8.0 * scale * first.value()),
                (2, scale * second.value()),
            ])
        }
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// Empirical check of `‖F‖_{L^q} ≤ (q−1)^{n/2} ‖F‖_{L^2}` for an order-`n`
/// chaos functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperReport {
    pub ratio: f64,
    pub bound: f64,
    /// Delta-method standard error of `ln ratio`.
    pub se: f64,
    pub pass: bool,
}

pub fn hypercontractivity_check(samples: &[f64], order: u32, q: f64) -> Result<HyperReport> {
    const MIN_SAMPLES: usize = 10_000;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            required: MIN_SAMPLES,
            actual: samples.len(),
        });
    }
    if !(q >= 2.0) {
        return Err(Error::InvalidArgument("q must be at least 2"));
    }
    let n = samples.len() as f64;
    let mut sum_a = CompensatedSum::new();
    let mut sum_b = CompensatedSum::new();
    for &f in samples {
        sum_a.add(math::pow(math::abs(f), q));
        sum_b.add(f * f);
    }
    let a = sum_a.value() / n;
    let b = sum_b.value() / n;
    let bound = math::pow(q - 1.0, order as f64 / 2.0);
    if b == 0.0 {
        return Ok(HyperReport {
            ratio: 0.0,
            bound,
            se: 0.0,
            pass: true,
        });
    }
    let ratio = math::pow(a, 1.0 / q) / math::sqrt(b);
    let mut va = CompensatedSum::new();
    let mut vb = CompensatedSum::new();
    let mut cov = CompensatedSum::new();
    for &f in samples {
        let da = math::pow(math::abs(f), q) - a;
        let db = f * f - b;
        va.add(da * da);
        vb.add(db * db);
        cov.add(da * db);
    }
    let var_ln = (va.value() / n / (q * q * a * a) + vb.value() / n / (4.0 * b * b)
        - cov.value() / n / (q * a * b))
        / n;
    let se = math::sqrt(var_ln.max(0.0));
    Ok(HyperReport {
        ratio,
        bound,
        se,
        pass: ratio <= bound * (1.0 + 5.0 * se),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::rng::GaussianSource;
    use crate::spectral::sample_family;
    use crate::stats::{c_p_exact, summarize};
    use approx::assert_relative_eq;

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(0, 5.0), 1.0);
        assert_eq!(hermite(1, 3.0), 3.0);
        assert_eq!(hermite(2, 2.0), 3.0); // x² − 1
        assert_eq!(hermite(4, 0.0), 3.0); // x⁴ − 6x² + 3
        assert_eq!(hermite(6, 1.0), 16.0); // 1 − 15 + 45 − 15
    }

    #[test]
    fn hermite_generating_function() {
        // Σ_n H_n(x) tⁿ/n! vs e^{tx − t²/2}; the n ≤ 8 partial sum still
        // carries a ~1e-5 remainder at (x, t) = (3, 1/2), so the sum runs
        // until the terms drop below the 1e-8 band.
        for &x in &[-3.0, -1.0, 0.0, 0.5, 3.0] {
            for &t in &[-0.5, -0.1, 0.25, 0.5] {
                let mut sum = 0.0;
                let mut factorial = 1.0;
                for n in 0..=24u32 {
                    if n > 0 {
                        factorial *= n as f64;
                    }
                    sum += hermite(n, x) * math::pow(t, n as f64) / factorial;
                }
                let exact = math::exp(t * x - t * t / 2.0);
                assert!((sum - exact).abs() < 1e-8, "x={x} t={t}: {sum} vs {exact}");
            }
        }
    }

    #[test]
    fn wick_values_at_reference_points() {
        let unit = Complex64::new(1.0, 1.0); // |g|² = 2
        assert_relative_eq!(wick_abs2n(unit, 1).unwrap(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(wick_abs2n(unit, 2).unwrap(), -4.0, epsilon = 1e-14);
        let zero = Complex64::default();
        assert_relative_eq!(wick_abs2n(zero, 3).unwrap(), -48.0, epsilon = 1e-14);
        assert!(wick_abs2n(unit, 4).is_err());
    }

    #[test]
    fn wick_matches_hermite_products() {
        // :|g|^{2n}: as sums of Hermite products in (x, y) = (Re g, Im g):
        // :|g|²: = H₂(x) + H₂(y)
        // :|g|⁴: = H₄(x) + 2H₂(x)H₂(y) + H₄(y)
        // :|g|⁶: = H₆(x) + 3H₄(x)H₂(y) + 3H₂(x)H₄(y) + H₆(y)
        let source = GaussianSource::new(404);
        for idx in 0..200u64 {
            let g = source.scalar_draw(idx);
            let (x, y) = (g.re, g.im);
            let w1 = hermite(2, x) + hermite(2, y);
            let w2 = hermite(4, x) + 2.0 * hermite(2, x) * hermite(2, y) + hermite(4, y);
            let w3 = hermite(6, x)
                + 3.0 * hermite(4, x) * hermite(2, y)
                + 3.0 * hermite(2, x) * hermite(4, y)
                + hermite(6, y);
            assert_relative_eq!(wick_abs2n(g, 1).unwrap(), w1, max_relative = 1e-10);
            assert_relative_eq!(wick_abs2n(g, 2).unwrap(), w2, max_relative = 1e-9);
            assert_relative_eq!(wick_abs2n(g, 3).unwrap(), w3, max_relative = 1e-8);
        }
    }

    #[test]
    fn wick_orthogonality_and_centering() {
        // E[:|g|^{2m}: :|g|^{2n}:] = 0 for m ≠ n, E[:|g|^{2n}:] = 0, 1e6 draws
        let source = GaussianSource::new(4242);
        let count = 1_000_000usize;
        let mut mean = [[0.0f64; 3]; 3];
        let mut sq = [[0.0f64; 3]; 3];
        let mut single = [0.0f64; 3];
        let mut single_sq = [0.0f64; 3];
        let mut buf = vec![Complex64::default(); 8192];
        let mut done = 0usize;
        while done < count {
            let take = buf.len().min(count - done);
            source.fill_scalar(done as u64, &mut buf[..take]);
            for g in &buf[..take] {
                let w = [
                    wick_abs2n(*g, 1).unwrap(),
                    wick_abs2n(*g, 2).unwrap(),
                    wick_abs2n(*g, 3).unwrap(),
                ];
                for a in 0..3 {
                    single[a] += w[a];
                    single_sq[a] += w[a] * w[a];
                    for b in 0..3 {
                        mean[a][b] += w[a] * w[b];
                        sq[a][b] += w[a] * w[b] * w[a] * w[b];
                    }
                }
            }
            done += take;
        }
        let n = count as f64;
        for a in 0..3 {
            let m = single[a] / n;
            let se = math::sqrt((single_sq[a] / n - m * m) / n);
            assert!(
                m.abs() <= 5.0 * se,
                "E[:|g|^{}:] = {m} (se {se})",
                2 * (a + 1)
            );
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let m = mean[a][b] / n;
                let se = math::sqrt((sq[a][b] / n - m * m) / n);
                assert!(
                    m.abs() <= 5.0 * se,
                    "E[:|g|^{}::|g|^{}:] = {m} (se {se})",
                    2 * (a + 1),
                    2 * (b + 1)
                );
            }
        }
    }

    #[test]
    fn l4_identity_on_the_two_point_shell() {
        // S_0 = {±1}: no pair-free resonances exist, lhs = I + III
        for seed in 0..20u64 {
            let fam = sample_family(seed, 1, 2).unwrap();
            let dec = l4_block_decomposition(&fam, 0).unwrap();
            assert_eq!(dec.no_pair, 0.0);
            assert_relative_eq!(dec.lhs, dec.paired + dec.diagonal, max_relative = 1e-9);
        }
    }

    #[test]
    fn l4_identity_random_shells() {
        for seed in 0..5u64 {
            let fam = sample_family(seed, 1, 1 << 6).unwrap();
            for j in 1..=6u32 {
                let dec = l4_block_decomposition(&fam, j).unwrap();
                let rhs = dec.paired + dec.no_pair + dec.diagonal;
                assert!(
                    (dec.lhs - rhs).abs() <= 1e-9 * dec.lhs.abs(),
                    "seed {seed} shell {j}: lhs {} rhs {}",
                    dec.lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn l4_constant_family_matches_enumerator() {
        // all g_n = 1: I = 2 (#S)² 4^{-j}, III = −#S·4^{-j}, II from counts
        let j = 4u32;
        let lat = Lattice::line(1 << j).unwrap();
        let draws = vec![Complex64::new(1.0, 0.0); lat.len()];
        let fam = GaussianFamily::from_draws(lat, draws).unwrap();
        let dec = l4_block_decomposition(&fam, j).unwrap();
        let shell = fam.lattice().shell_len(j) as f64;
        let norm = math::pow(2.0, -2.0 * j as f64);
        assert_relative_eq!(dec.paired, 2.0 * shell * shell * norm, max_relative = 1e-12);
        assert_relative_eq!(dec.diagonal, -shell * norm, max_relative = 1e-12);
        let counts = classify_resonances(j, 2).unwrap();
        assert_relative_eq!(
            dec.no_pair,
            counts.no_pair as f64 * norm,
            max_relative = 1e-12
        );
    }

    #[test]
    fn k2_classifier_covers_every_resonant_tuple() {
        for j in 1..=5u32 {
            let counts = classify_resonances(j, 2).unwrap();
            // independent unclassified enumeration of n1+n2 = m1+m2
            let hi = 1i64 << j;
            let lo = 1i64 << (j - 1);
            let freqs: Vec<i64> = (-hi..=hi)
                .filter(|f| f.abs() > lo && f.abs() <= hi)
                .collect();
            let mut total = 0u64;
            for &n1 in &freqs {
                for &n2 in &freqs {
                    for &m1 in &freqs {
                        let m2 = n1 + n2 - m1;
                        if m2.abs() > lo && m2.abs() <= hi {
                            total += 1;
                        }
                    }
                }
            }
            assert_eq!(counts.total, total);
            assert_eq!(
                counts.paired + counts.no_pair + counts.four_of_a_kind,
                total,
                "partial pairs are impossible at k = 2"
            );
            assert_eq!(counts.partial_pair, 0);
        }
    }

    #[test]
    fn l2k_matches_l4_view() {
        // classifier paired + four_of_a_kind = closed-form I + III
        let fam = sample_family(33, 1, 1 << 5).unwrap();
        for j in 1..=5u32 {
            let class = l2k_block_decomposition(&fam, j, 2).unwrap();
            let display = l4_block_decomposition(&fam, j).unwrap();
            assert_relative_eq!(
                class.paired + class.four_of_a_kind,
                display.paired + display.diagonal,
                max_relative = 1e-11
            );
            assert_relative_eq!(class.no_pair, display.no_pair, max_relative = 1e-11);
            assert_eq!(class.partial_pair, 0.0);
        }
    }

    #[test]
    fn l2k_k3_identity_small_shells() {
        for seed in 0..3u64 {
            let fam = sample_family(seed, 1, 1 << 4).unwrap();
            for j in 1..=4u32 {
                let dec = l2k_block_decomposition(&fam, j, 3).unwrap();
                assert!(
                    (dec.lhs - dec.class_total()).abs() <= 1e-8 * dec.lhs.abs(),
                    "seed {seed} shell {j}: lhs {} classes {}",
                    dec.lhs,
                    dec.class_total()
                );
            }
        }
    }

    #[test]
    fn l2k_k3_constant_family_matches_enumerator() {
        let j = 3u32;
        let lat = Lattice::line(1 << j).unwrap();
        let draws = vec![Complex64::new(1.0, 0.0); lat.len()];
        let fam = GaussianFamily::from_draws(lat, draws).unwrap();
        let dec = l2k_block_decomposition(&fam, j, 3).unwrap();
        let counts = classify_resonances(j, 3).unwrap();
        let norm = math::pow(2.0, -3.0 * j as f64);
        assert_relative_eq!(
            dec.paired,
            counts.paired as f64 * norm,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            dec.four_of_a_kind,
            counts.four_of_a_kind as f64 * norm,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            dec.partial_pair,
            counts.partial_pair as f64 * norm,
            max_relative = 1e-11
        );
        // leading-order heuristic k!(#S)^k overcounts the multiplicity
        let shell = fam.lattice().shell_len(j) as f64;
        let heuristic = 6.0 * shell * shell * shell * norm;
        assert!(dec.paired < heuristic);
    }

    #[test]
    fn degenerate_single_frequency_family() {
        // one nonzero draw: no distinct-index tuples, so II = error_ii = 0
        let j = 2u32;
        let lat = Lattice::line(1 << j).unwrap();
        let mut draws = vec![Complex64::default(); lat.len()];
        let idx = lat.index_of_frequency(3).unwrap();
        draws[idx] = Complex64::new(0.7, -1.1);
        let fam = GaussianFamily::from_draws(lat, draws).unwrap();
        for k in [2u32, 3] {
            let dec = l2k_block_decomposition(&fam, j, k).unwrap();
            assert_eq!(dec.no_pair, 0.0);
            assert_eq!(dec.partial_pair, 0.0);
            assert_relative_eq!(dec.lhs, dec.class_total(), max_relative = 1e-10);
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        let fam = sample_family(1, 1, 8).unwrap();
        assert!(matches!(
            l2k_block_decomposition(&fam, 2, 4),
            Err(Error::UnsupportedOrder(4))
        ));
        assert!(l2k_block_decomposition(&fam, 7, 3).is_err());
    }

    #[test]
    fn chaos_projection_reconstructs_f_exactly() {
        let fam = sample_family(91, 1, 1 << 6).unwrap();
        for j in 1..=6u32 {
            let parts = chaos_project_f(&fam, j, 2).unwrap();
            let total: f64 = parts.iter().map(|(_, v)| v).sum();
            let f_direct = crate::stats::x_statistic(&fam, j, 4.0).unwrap().value;
            assert!(
                (total - f_direct).abs() <= 1e-12 * f_direct.max(1.0),
                "shell {j}: {total} vs {f_direct}"
            );
        }
    }

    #[test]
    fn chaos_projection_linear_case() {
        let fam = sample_family(92, 1, 1 << 5).unwrap();
        let j = 5u32;
        let parts = chaos_project_f(&fam, j, 1).unwrap();
        let x = crate::stats::x_statistic(&fam, j, 2.0).unwrap().value;
        let shell_ratio = fam.lattice().shell_len(j) as f64 / math::pow(2.0, j as f64);
        assert_relative_eq!(parts[1].1, x - 2.0 * shell_ratio, max_relative = 1e-12);
        assert_relative_eq!(parts[0].1, 2.0 * shell_ratio, max_relative = 1e-14);
    }

    #[test]
    fn mean_of_f_matches_c4() {
        // E F_j = F^{(0)} = 8 over 1e4 families (j ≥ 1 so #S_j = 2^j)
        let j = 6u32;
        let mut values = Vec::new();
        for k in 0..10_000u64 {
            let fam = sample_family(GaussianSource::derive_seed(77, k), 1, 1 << j).unwrap();
            values.push(crate::stats::x_statistic(&fam, j, 4.0).unwrap().value);
        }
        let summary = summarize(&values);
        let expect = c_p_exact(4.0).unwrap();
        assert!(
            (summary.mean - expect).abs() <= 3.0 * summary.se,
            "E F = {} vs {} (se {})",
            summary.mean,
            expect,
            summary.se
        );
    }

    #[test]
    fn no_pair_sum_is_centered_and_decays() {
        // E II = 0 within 5 SE; E|II|² scales like 2^{-j} within factor 2
        let shells = [4u32, 6, 8];
        let mut second_moments = Vec::new();
        for &j in &shells {
            let mut values = Vec::new();
            for k in 0..400u64 {
                let fam = sample_family(GaussianSource::derive_seed(55, k), 1, 1 << j).unwrap();
                values.push(l4_block_decomposition(&fam, j).unwrap().no_pair);
            }
            let summary = summarize(&values);
            assert!(
                summary.mean.abs() <= 5.0 * summary.se,
                "shell {j}: E II = {} (se {})",
                summary.mean,
                summary.se
            );
            let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
            second_moments.push(summarize(&sq).mean);
        }
        // expect ratio ≈ 2^{Δj} between shells, allow a factor 2 both ways
        for w in 0..second_moments.len() - 1 {
            let expected = math::pow(2.0, (shells[w + 1] - shells[w]) as f64);
            let got = second_moments[w] / second_moments[w + 1];
            assert!(
                got >= expected / 2.0 && got <= expected * 2.0,
                "2^{{-j}} scaling violated: ratio {got} vs {expected}"
            );
        }
    }

    #[test]
    fn hypercontractivity_of_wick_square() {
        // n = 2 functional :|g|²:, q = 4: ratio bounded by 3
        let source = GaussianSource::new(31337);
        let mut samples = vec![0.0f64; 40_000];
        let mut buf = vec![Complex64::default(); 40_000];
        source.fill_scalar(0, &mut buf);
        for (slot, g) in samples.iter_mut().zip(&buf) {
            *slot = wick_abs2n(*g, 1).unwrap();
        }
        let report = hypercontractivity_check(&samples, 2, 4.0).unwrap();
        assert!(report.pass, "ratio {} bound {}", report.ratio, report.bound);
        assert!(report.ratio > 1.0);
    }

    #[test]
    fn hypercontractivity_constant_is_unit_ratio() {
        let samples = vec![3.0f64; 10_000];
        let report = hypercontractivity_check(&samples, 0, 4.0).unwrap();
        assert_relative_eq!(report.ratio, 1.0, max_relative = 1e-12);
        assert!(report.pass);
    }

    #[test]
    fn hypercontractivity_needs_samples() {
        let samples = vec![1.0f64; 100];
        assert!(matches!(
            hypercontractivity_check(&samples, 2, 4.0),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}
