//! Gaussian random Fourier series for Brownian-type loops and the machinery
//! to measure them: spectral sampling, Fourier–Lebesgue / Fourier–Besov /
//! Besov norms over dyadic shells, Wiener-chaos decompositions of block
//! functionals, Cramér–Chernoff and Monte Carlo tail estimation, and the
//! time-domain bridge cross-validation.
//!
//! The crate is `no_std`-compatible (allocation required). All transcendental
//! math goes through `libm`, and every Gaussian draw is addressed by a
//! `(seed, domain, index)` counter into a ChaCha8 keystream, so results are
//! bit-identical regardless of evaluation order, worker count, or whether
//! `std` is enabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// argument guards use `!(x >= bound)` so NaN is rejected along with the
// out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bridge;
pub mod chaos;
pub mod deviations;
mod error;
mod fft;
pub mod lattice;
mod math;
pub mod norms;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;
