//! Analysis toolkit for the rook's walk Markov chain on `{1..n}^d` and its
//! Hamming-shell projection.
//!
//! The walk resamples one uniformly chosen coordinate to a uniformly chosen
//! different value. Grouping states by Hamming distance from the all-ones
//! state turns it into a birth-death chain on `{0..d}` whose distance to
//! stationarity matches the full walk's exactly. That projected chain has a
//! closed-form spectrum (Krawtchouk polynomials), which this crate uses to
//! compute total-variation curves, exact mixing times, and every closed-form
//! mixing-time bound, in either exact rational or `f64` arithmetic.
//!
//! Modules:
//! - [`scalar`]: the run-level numeric mode (exact rational vs float).
//! - [`chain`]: parameters, shell combinatorics, stationary distributions, TV.
//! - [`lumped`]: the tridiagonal shell kernel, evolution, mixing times.
//! - [`full`]: brute-force and Monte Carlo checks on the unprojected walk.
//! - [`krawtchouk`]: the orthogonal polynomial family and its inner product.
//! - [`spectral`]: eigenvalues, orthonormalization, L² identities.
//! - [`bounds`]: mixing-time bounds, cutoff constants, discrepancy reports.

pub mod bounds;
pub mod chain;
pub mod error;
pub mod full;
pub mod krawtchouk;
pub mod lumped;
pub mod scalar;
pub mod spectral;

pub use chain::{shell_size, shell_sizes, stationary_shell_distribution, tv_distance, ChainParams, ShellDistribution};
pub use error::{Error, Result};
pub use lumped::{mixing_time, spectral_tv_curve, tv_curve, ShellKernel, TvCurve};
pub use scalar::{Mode, Scalar};
pub use spectral::SpectralData;
