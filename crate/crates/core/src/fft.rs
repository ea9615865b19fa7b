//! Iterative radix-2 transform for power-of-two synthesis grids.
//!
//! Unnormalized in both directions: forward applies `e^{-2πi nk/M}`, inverse
//! `e^{+2πi nk/M}`; callers divide by `M` where a mean is wanted.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;

pub(crate) fn fft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let angle = sign * math::TAU / len as f64;
        // tabulated twiddles; recurrence rotation would compound rounding
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| {
                let a = angle * k as f64;
                Complex64::new(math::cos(a), math::sin(a))
            })
            .collect();
        for block in buf.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for k in 0..half {
                let t = hi[k] * twiddles[k];
                hi[k] = lo[k] - t;
                lo[k] += t;
            }
        }
        len <<= 1;
    }
}
