//! Spectral machinery: truncated SVD, water-filling power allocation,
//! capacity evaluation, optimal covariances, and channel-quality metrics.
//!
//! Log-determinants are always evaluated from the spectrum of the Hermitian
//! form, never from a raw determinant, so high-SNR evaluations cannot
//! overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{hermitian_part, CMat};

/// Relative singular-value cutoff used when no explicit tolerance is given.
/// Retained values satisfy `sigma > DEFAULT_RANK_TOL * sigma_max`; the
/// condition number is reported over retained values only, so benchmark
/// comparisons all use the same truncation.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Rank-truncated SVD `H ~ left * diag(singular) * right^H`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Left singular vectors, `rows x retained`.
    pub left: CMat,
    /// Retained singular values, strictly positive and descending.
    pub singular: Vec<f64>,
    /// Right singular vectors, `cols x retained`.
    pub right: CMat,
}

impl SpectralDecomposition {
    pub fn rank(&self) -> usize {
        self.singular.len()
    }
}

/// SVD of `h` keeping singular values above `tol` relative to the largest.
pub fn truncated_svd(h: &CMat, tol: f64) -> Result<SpectralDecomposition> {
    let svd = h.clone().svd(true, true);
    let u = svd.u.expect("svd was computed with u");
    let v_t = svd.v_t.expect("svd was computed with v");
    let values = svd.singular_values;
    let largest = values.max();
    if !largest.is_finite() {
        return Err(Error::NumericalFailure(
            "singular values are not finite".into(),
        ));
    }
    if largest == 0.0 {
        return Err(Error::AllZeroChannel);
    }
    // values are sorted descending, so retained values form a prefix
    let keep = values.iter().take_while(|&&s| s > tol * largest).count();
    Ok(SpectralDecomposition {
        left: u.columns(0, keep).into_owned(),
        singular: values.iter().take(keep).copied().collect(),
        right: v_t.rows(0, keep).adjoint(),
    })
}

/// Water-filling allocation over parallel eigenchannels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaterFilling {
    /// Per-stream powers, summing to the budget.
    pub powers: Vec<f64>,
    /// Common water level of the active streams.
    pub water_level: f64,
}

/// Allocate `power` over streams with the given descending singular values:
/// `p_s = max(level - noise / singular_s^2, 0)` with the level chosen so the
/// powers sum to `power`.
///
/// The level is found by an exact active-set sweep: try `k = S..1` active
/// streams and accept the first `k` whose implied water level exceeds
/// `noise / singular_k^2`. Exact in O(S), no bisection tolerance.
pub fn water_fill(singular: &[f64], power: f64, noise: f64) -> WaterFilling {
    assert!(!singular.is_empty(), "water-filling needs at least one stream");
    assert!(power > 0.0 && noise > 0.0);
    debug_assert!(singular.windows(2).all(|w| w[0] >= w[1]));
    debug_assert!(singular.iter().all(|&s| s > 0.0));

    let inverse_gain: Vec<f64> = singular.iter().map(|s| noise / (s * s)).collect();
    let mut prefix = 0.0;
    let prefix_sums: Vec<f64> = inverse_gain
        .iter()
        .map(|g| {
            prefix += g;
            prefix
        })
        .collect();

    for k in (1..=singular.len()).rev() {
        let level = (power + prefix_sums[k - 1]) / k as f64;
        if level > inverse_gain[k - 1] {
            let powers = inverse_gain
                .iter()
                .enumerate()
                .map(|(s, g)| if s < k { level - g } else { 0.0 })
                .collect();
            return WaterFilling {
                powers,
                water_level: level,
            };
        }
    }
    unreachable!("a single active stream always admits a positive allocation")
}

/// Transmit covariance matrix; Hermitian, positive semi-definite, trace
/// within the power budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covariance {
    #[serde(with = "crate::serde_support")]
    matrix: CMat,
}

impl Covariance {
    /// Validating constructor for externally supplied matrices.
    pub fn new(matrix: CMat, power_budget: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::CovarianceInvariant(format!(
                "covariance must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.adjoint()).camax();
        if asym > 1e-10 {
            return Err(Error::CovarianceInvariant(format!(
                "not Hermitian: max asymmetry {asym:e}"
            )));
        }
        let herm = hermitian_part(&matrix);
        let min_eig = herm
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-9 {
            return Err(Error::CovarianceInvariant(format!(
                "not positive semi-definite: min eigenvalue {min_eig:e}"
            )));
        }
        let trace = matrix.trace().re;
        if trace > power_budget + 1e-9 {
            return Err(Error::CovarianceInvariant(format!(
                "trace {trace} exceeds power budget {power_budget}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Construct without validation; callers guarantee the invariants.
    pub(crate) fn from_valid(matrix: CMat) -> Self {
        debug_assert!((&matrix - matrix.adjoint()).camax() <= 1e-9);
        Self { matrix }
    }

    /// All-zero covariance (no transmission).
    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: CMat::zeros(n, n),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Total transmit power `Re tr(Q)`.
    pub fn trace_power(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// `log2 det(I + H Q H^H / noise)` in bps/Hz, via the eigenvalues of the
/// Hermitian argument.
pub fn capacity_of(h: &CMat, q: &Covariance, noise: f64) -> f64 {
    let m = h.nrows();
    let k = CMat::identity(m, m) + (h * q.matrix() * h.adjoint()).unscale(noise);
    hermitian_part(&k)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&ev| ev.log2())
        .sum()
}

/// Eigenmode transmission: water-filled covariance on the right singular
/// vectors of `h`, plus the capacity it achieves.
pub fn optimal_covariance(h: &CMat, power: f64, noise: f64) -> Result<(Covariance, f64)> {
    let sd = truncated_svd(h, DEFAULT_RANK_TOL)?;
    let wf = water_fill(&sd.singular, power, noise);
    let q = eigenmode_covariance(&sd.right, &wf.powers);
    let capacity = stream_capacity(&sd.singular, &wf.powers, noise);
    Ok((Covariance::from_valid(q), capacity))
}

/// Covariance for the reciprocal link `H^H`, built on the left singular
/// vectors of `h` with the same water-filled powers. Achieves the same
/// capacity over `H^H` as [`optimal_covariance`] does over `H`.
pub fn receive_side_covariance(h: &CMat, power: f64, noise: f64) -> Result<Covariance> {
    let sd = truncated_svd(h, DEFAULT_RANK_TOL)?;
    let wf = water_fill(&sd.singular, power, noise);
    Ok(Covariance::from_valid(eigenmode_covariance(
        &sd.left, &wf.powers,
    )))
}

fn eigenmode_covariance(basis: &CMat, powers: &[f64]) -> CMat {
    let n = basis.nrows();
    let mut q = CMat::zeros(n, n);
    for (s, &p) in powers.iter().enumerate() {
        if p > 0.0 {
            let v = basis.column(s);
            q += (v * v.adjoint()).scale(p);
        }
    }
    q
}

fn stream_capacity(singular: &[f64], powers: &[f64], noise: f64) -> f64 {
    singular
        .iter()
        .zip(powers)
        .map(|(s, p)| (1.0 + s * s * p / noise).log2())
        .sum()
}

/// Summary statistics of a channel realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMetrics {
    /// Water-filled capacity in bps/Hz.
    pub capacity: f64,
    /// Squared Frobenius norm over the full (untruncated) spectrum.
    pub total_power: f64,
    /// Largest squared singular value.
    pub strongest_eig_power: f64,
    /// Ratio of largest to smallest retained singular value.
    pub condition_number: f64,
}

/// Capacity, total power, strongest eigenchannel power, and condition number
/// of `h`, truncating at `tol` relative to the largest singular value.
pub fn metrics_of(h: &CMat, power: f64, noise: f64, tol: f64) -> Result<ChannelMetrics> {
    let sd = truncated_svd(h, tol)?;
    let wf = water_fill(&sd.singular, power, noise);
    Ok(ChannelMetrics {
        capacity: stream_capacity(&sd.singular, &wf.powers, noise),
        total_power: h.iter().map(|z| z.norm_sqr()).sum(),
        strongest_eig_power: sd.singular[0] * sd.singular[0],
        condition_number: sd.singular[0] / sd.singular[sd.rank() - 1],
    })
}
