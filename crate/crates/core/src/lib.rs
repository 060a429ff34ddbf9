//! Capacity maximization for point-to-point MIMO links with movable antennas.
//!
//! A movable antenna can be repositioned inside a bounded 2D region, which
//! reshapes the multipath channel matrix seen by the link. This crate models
//! the resulting field-response channel, computes water-filled capacities, and
//! jointly optimizes the transmit/receive antenna positions together with the
//! transmit covariance through alternating optimization with a per-antenna
//! successive convex approximation step.
//!
//! Module map:
//! - [`geometry`]: movement regions, feasibility, projections, grid initialization
//! - [`channel`]: field-response channel model and seeded scene generation
//! - [`capacity`]: truncated SVD, water-filling, capacities, channel metrics
//! - [`position_opt`]: the per-antenna surrogate maximization step
//! - [`solver`]: full alternating optimizer plus low-SNR / MISO / SIMO variants
//! - [`benchmarks`]: fixed-array, selection, receive-only and grid-search baselines
//! - [`harness`]: seeded Monte Carlo experiment runner and CSV emission

pub mod benchmarks;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod position_opt;
mod seed;
mod serde_support;
pub mod solver;

pub use error::{Error, Result};

pub use nalgebra::Complex;

/// Double-precision complex scalar used throughout.
pub type C64 = Complex<f64>;
/// Dynamically sized complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dynamically sized complex column vector.
pub type CVec = nalgebra::DVector<C64>;

pub(crate) fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).unscale(2.0)
}
