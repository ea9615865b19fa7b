//! Punctured integer lattices `0 < |n| <= N` and their dyadic shells
//! `S_j = { n : 2^(j-1) < |n| <= 2^j }` (Euclidean norm, `S_0 = {|n| = 1}`).

use alloc::vec::Vec;

use crate::rng::zigzag;
use crate::{Error, Result};

/// Index set carrying the coefficients of a spectral object.
///
/// The 1-d case stores nothing: frequencies are recovered from the storage
/// index. Storage order is lexicographic in the point coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lattice {
    /// Frequencies `inner < |n| <= radius` on the line (a full lattice when
    /// `inner == 0`, a high-frequency annulus otherwise).
    Line { inner: u32, radius: u32 },
    /// All points of `Z^dim` with `0 < |n| <= radius`, coordinates stored
    /// flat with stride `dim`.
    Grid {
        dim: usize,
        radius: u32,
        points: Vec<i64>,
    },
}

/// Shell index `j` of a point with squared norm `norm_sq >= 1`, i.e. the
/// unique `j` with `4^(j-1) < norm_sq <= 4^j`.
#[inline]
pub fn shell_index(norm_sq: u64) -> u32 {
    debug_assert!(norm_sq >= 1);
    if norm_sq == 1 {
        0
    } else {
        (norm_sq - 1).ilog2() / 2 + 1
    }
}

/// Squared-magnitude bounds of shell `j`: membership is
/// `lo_sq < norm_sq <= hi_sq`.
#[inline]
pub fn shell_bounds_sq(j: u32) -> (u64, u64) {
    if j == 0 {
        (0, 1)
    } else {
        (1 << (2 * (j - 1)), 1 << (2 * j))
    }
}

impl Lattice {
    pub fn line(radius: u32) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidArgument("truncation must be at least 1"));
        }
        Ok(Lattice::Line { inner: 0, radius })
    }

    /// High-frequency annulus `inner < |n| <= radius` on the line.
    pub fn line_annulus(inner: u32, radius: u32) -> Result<Self> {
        if radius <= inner {
            return Err(Error::InvalidArgument(
                "annulus radius must exceed its inner cutoff",
            ));
        }
        Ok(Lattice::Line { inner, radius })
    }

    /// Full punctured lattice in dimension `dim >= 1`.
    pub fn ball(dim: usize, radius: u32) -> Result<Self> {
        match dim {
            0 => Err(Error::InvalidArgument("dimension must be at least 1")),
            1 => Self::line(radius),
            _ => {
                if radius == 0 {
                    return Err(Error::InvalidArgument("truncation must be at least 1"));
                }
                let bits = 63 / dim as u32;
                if u64::from(radius) * 2 >= (1 << bits) {
                    return Err(Error::InvalidArgument(
                        "truncation too large for this dimension's stream packing",
                    ));
                }
                let mut points = Vec::new();
                let mut coords = alloc::vec![-(radius as i64); dim];
                let radius_sq = u64::from(radius) * u64::from(radius);
                loop {
                    let norm_sq: u64 = coords.iter().map(|&c| (c * c) as u64).sum();
                    if norm_sq > 0 && norm_sq <= radius_sq {
                        points.extend_from_slice(&coords);
                    }
                    // lexicographic odometer, last axis fastest
                    let mut axis = dim;
                    loop {
                        if axis == 0 {
                            return Ok(Lattice::Grid {
                                dim,
                                radius,
                                points,
                            });
                        }
                        axis -= 1;
                        if coords[axis] < radius as i64 {
                            coords[axis] += 1;
                            for c in coords[axis + 1..].iter_mut() {
                                *c = -(radius as i64);
                            }
                            break;
                        }
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Lattice::Line { .. } => 1,
            Lattice::Grid { dim, .. } => *dim,
        }
    }

    pub fn radius(&self) -> u32 {
        match self {
            Lattice::Line { radius, .. } | Lattice::Grid { radius, .. } => *radius,
        }
    }

    pub fn inner(&self) -> u32 {
        match self {
            Lattice::Line { inner, .. } => *inner,
            Lattice::Grid { .. } => 0,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Lattice::Line { inner, radius } => 2 * (*radius - *inner) as usize,
            Lattice::Grid { dim, points, .. } => points.len() / dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Frequency at storage index `i` (1-d lattices).
    #[inline]
    pub fn frequency(&self, i: usize) -> i64 {
        match self {
            Lattice::Line { inner, radius } => {
                let negatives = (*radius - *inner) as usize;
                if i < negatives {
                    i as i64 - *radius as i64
                } else {
                    (*inner as i64 + 1) + (i - negatives) as i64
                }
            }
            Lattice::Grid { .. } => panic!("frequency() is only defined on 1-d lattices"),
        }
    }

    /// Storage index of a 1-d frequency, if stored.
    #[inline]
    pub fn index_of_frequency(&self, frequency: i64) -> Option<usize> {
        match self {
            Lattice::Line { inner, radius } => {
                let magnitude = frequency.unsigned_abs();
                if magnitude <= u64::from(*inner) || magnitude > u64::from(*radius) {
                    return None;
                }
                let negatives = (*radius - *inner) as u64;
                Some(if frequency < 0 {
                    (frequency + *radius as i64) as usize
                } else {
                    (negatives + magnitude - u64::from(*inner) - 1) as usize
                })
            }
            Lattice::Grid { .. } => None,
        }
    }

    #[inline]
    pub fn coord(&self, i: usize, axis: usize) -> i64 {
        match self {
            Lattice::Line { .. } => {
                debug_assert_eq!(axis, 0);
                self.frequency(i)
            }
            Lattice::Grid { dim, points, .. } => points[i * dim + axis],
        }
    }

    #[inline]
    pub fn norm_sq(&self, i: usize) -> u64 {
        match self {
            Lattice::Line { .. } => {
                let f = self.frequency(i);
                (f * f) as u64
            }
            Lattice::Grid { dim, points, .. } => points[i * dim..(i + 1) * dim]
                .iter()
                .map(|&c| (c * c) as u64)
                .sum(),
        }
    }

    /// ChaCha stream index addressing the point at `i` (dimension ≥ 2).
    #[inline]
    pub(crate) fn packed_point(&self, i: usize) -> u64 {
        match self {
            Lattice::Line { .. } => unreachable!("1-d points use line ranks"),
            Lattice::Grid { dim, points, .. } => {
                let bits = 63 / *dim as u32;
                points[i * dim..(i + 1) * dim]
                    .iter()
                    .fold(0u64, |acc, &c| (acc << bits) | zigzag(c))
            }
        }
    }

    /// Largest shell index intersecting the lattice.
    pub fn top_shell(&self) -> u32 {
        let r = u64::from(self.radius());
        shell_index(r * r)
    }

    /// Whether shell `j` lies entirely inside the stored index set.
    pub fn covers_shell(&self, j: u32) -> bool {
        let hi = 1u64 << j;
        let lo = if j == 0 { 0 } else { 1u64 << (j - 1) };
        hi <= u64::from(self.radius()) && lo >= u64::from(self.inner())
    }

    /// Storage indices of shell `j` members.
    pub fn shell_indices(&self, j: u32) -> ShellIndices<'_> {
        match self {
            Lattice::Line { inner, radius } => {
                let hi = (1u64 << j).min(u64::from(*radius));
                let lo_mag =
                    if j == 0 { 1 } else { (1u64 << (j - 1)) + 1 }.max(u64::from(*inner) + 1);
                if lo_mag > hi {
                    return ShellIndices::Line(0..0, 0..0);
                }
                let neg = self
                    .index_of_frequency(-(hi as i64))
                    .expect("shell frequency in range")
                    ..self
                        .index_of_frequency(-(lo_mag as i64))
                        .expect("shell frequency in range")
                        + 1;
                let pos = self
                    .index_of_frequency(lo_mag as i64)
                    .expect("shell frequency in range")
                    ..self
                        .index_of_frequency(hi as i64)
                        .expect("shell frequency in range")
                        + 1;
                ShellIndices::Line(neg, pos)
            }
            Lattice::Grid { .. } => {
                let (lo_sq, hi_sq) = shell_bounds_sq(j);
                ShellIndices::Grid {
                    lattice: self,
                    next: 0,
                    lo_sq,
                    hi_sq,
                }
            }
        }
    }

    /// Number of points in shell `j` (within the stored index set).
    pub fn shell_len(&self, j: u32) -> usize {
        match self {
            Lattice::Line { .. } => {
                if let ShellIndices::Line(neg, pos) = self.shell_indices(j) {
                    neg.len() + pos.len()
                } else {
                    unreachable!()
                }
            }
            Lattice::Grid { .. } => self.shell_indices(j).count(),
        }
    }
}

pub enum ShellIndices<'a> {
    Line(core::ops::Range<usize>, core::ops::Range<usize>),
    Grid {
        lattice: &'a Lattice,
        next: usize,
        lo_sq: u64,
        hi_sq: u64,
    },
}

impl Iterator for ShellIndices<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            ShellIndices::Line(neg, pos) => neg.next().or_else(|| pos.next()),
            ShellIndices::Grid {
                lattice,
                next,
                lo_sq,
                hi_sq,
            } => {
                while *next < lattice.len() {
                    let i = *next;
                    *next += 1;
                    let ns = lattice.norm_sq(i);
                    if ns > *lo_sq && ns <= *hi_sq {
                        return Some(i);
                    }
                }
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_index_matches_definition() {
        for ns in 1..=4096u64 {
            let j = shell_index(ns);
            let (lo, hi) = shell_bounds_sq(j);
            assert!(ns > lo && ns <= hi, "norm_sq {ns} misplaced in shell {j}");
        }
    }

    #[test]
    fn line_layout_is_lexicographic() {
        let lat = Lattice::line(3).unwrap();
        let freqs: Vec<i64> = (0..lat.len()).map(|i| lat.frequency(i)).collect();
        assert_eq!(freqs, [-3, -2, -1, 1, 2, 3]);
        for (i, &f) in freqs.iter().enumerate() {
            assert_eq!(lat.index_of_frequency(f), Some(i));
        }
        assert_eq!(lat.index_of_frequency(0), None);
        assert_eq!(lat.index_of_frequency(4), None);
    }

    #[test]
    fn annulus_layout() {
        let lat = Lattice::line_annulus(2, 5).unwrap();
        let freqs: Vec<i64> = (0..lat.len()).map(|i| lat.frequency(i)).collect();
        assert_eq!(freqs, [-5, -4, -3, 3, 4, 5]);
        assert_eq!(lat.index_of_frequency(2), None);
        assert_eq!(lat.index_of_frequency(-3), Some(2));
    }

    #[test]
    fn ball_d2_radius3_has_28_points() {
        // oracle: brute-force count of 0 < n1^2 + n2^2 <= 9
        let mut expected = 0;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let ns = a * a + b * b;
                if ns > 0 && ns <= 9 {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 28);
        let lat = Lattice::ball(2, 3).unwrap();
        assert_eq!(lat.len(), 28);
        // lexicographic ordering
        for i in 1..lat.len() {
            let prev = (lat.coord(i - 1, 0), lat.coord(i - 1, 1));
            let cur = (lat.coord(i, 0), lat.coord(i, 1));
            assert!(prev < cur);
        }
    }

    #[test]
    fn grid_points_pack_uniquely() {
        let lat = Lattice::ball(2, 4).unwrap();
        let mut packed: Vec<u64> = (0..lat.len()).map(|i| lat.packed_point(i)).collect();
        packed.sort_unstable();
        packed.dedup();
        assert_eq!(packed.len(), lat.len());
    }

    #[test]
    fn line_shells_partition_the_lattice() {
        let lat = Lattice::line(64).unwrap();
        let mut seen = alloc::vec![0u8; lat.len()];
        for j in 0..=lat.top_shell() {
            for i in lat.shell_indices(j) {
                seen[i] += 1;
                assert_eq!(shell_index(lat.norm_sq(i)), j);
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn shell_cardinality_is_two_to_j_for_positive_j() {
        let lat = Lattice::line(1 << 10).unwrap();
        assert_eq!(lat.shell_len(0), 2);
        for j in 1..=10 {
            assert_eq!(lat.shell_len(j), 1 << j, "shell {j}");
        }
    }

    #[test]
    fn coverage_accounts_for_annulus() {
        let lat = Lattice::line_annulus(16, 64).unwrap();
        assert!(!lat.covers_shell(4)); // needs |n| = 9..16, below cutoff
        assert!(lat.covers_shell(5));
        assert!(lat.covers_shell(6));
        assert!(!lat.covers_shell(7));
    }
}
