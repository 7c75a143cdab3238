//! Finite discrete probability distributions with strictly positive mass.
//!
//! Every constructor normalizes, then re-normalizes once and asserts the sum
//! tolerance rather than trusting caller arithmetic. Empirical counts enter
//! only through additive smoothing so that every catalog measure stays finite
//! (several divide by `p_i * q_i`).

use crate::sum::csum;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("weight at index {index} is {value}; weights must be finite and > 0")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("need at least 2 outcomes, got {0}")]
    TooShort(usize),
    #[error("all counts are zero")]
    AllZeroCounts,
    #[error("smoothing alpha must be > 0, got {0}")]
    NonPositiveAlpha(f64),
    #[error("normalized sum {0} is outside tolerance {1}")]
    SumOutOfTolerance(f64, f64),
}

/// A point of the open probability simplex: strictly positive entries summing
/// to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Normalize positive weights into a distribution.
    pub fn from_weights(weights: &[f64], tol: f64) -> Result<Self, DistError> {
        if weights.len() < 2 {
            return Err(DistError::TooShort(weights.len()));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(DistError::NonPositiveWeight { index, value });
            }
        }
        let total = csum(weights.iter().copied());
        let probs = weights.iter().map(|w| w / total).collect();
        Self::finish(probs, tol)
    }

    /// `(c_i + alpha) / (sum c + n*alpha)`, additive smoothing so zero counts
    /// still yield strictly positive mass.
    pub fn from_counts_smoothed(counts: &[u64], alpha: f64) -> Result<Self, DistError> {
        if counts.len() < 2 {
            return Err(DistError::TooShort(counts.len()));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(DistError::NonPositiveAlpha(alpha));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(DistError::AllZeroCounts);
        }
        let total = csum(counts.iter().map(|&c| c as f64)) + counts.len() as f64 * alpha;
        let probs = counts.iter().map(|&c| (c as f64 + alpha) / total).collect();
        Self::finish(probs, SUM_TOL)
    }

    /// Uniform sample from the open simplex via exponential spacings
    /// (equivalent to a symmetric Dirichlet with unit concentration).
    /// Deterministic for a fixed seed.
    pub fn random(dim: usize, seed: u64) -> Result<Self, DistError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(dim, &mut rng)
    }

    /// Same sampler, driven by a caller-owned stream.
    pub fn random_with<R: Rng>(dim: usize, rng: &mut R) -> Result<Self, DistError> {
        if dim < 2 {
            return Err(DistError::TooShort(dim));
        }
        let mut w = Vec::with_capacity(dim);
        for _ in 0..dim {
            // random::<f64>() is in [0, 1); 1-u is in (0, 1], so the spacing
            // -ln(1-u) is finite and nonnegative; the floor keeps the one-in-
            // 2^53 draw u = 0 strictly positive.
            let u: f64 = rng.random();
            w.push((-(1.0 - u).ln()).max(1e-300));
        }
        let total = csum(w.iter().copied());
        Self::finish(w.into_iter().map(|v| v / total).collect(), SUM_TOL)
    }

    fn finish(mut probs: Vec<f64>, tol: f64) -> Result<Self, DistError> {
        // One corrective renormalization, then assert.
        let s = csum(probs.iter().copied());
        for p in &mut probs {
            *p /= s;
        }
        let s = csum(probs.iter().copied());
        if (s - 1.0).abs() > tol {
            return Err(DistError::SumOutOfTolerance(s, tol));
        }
        debug_assert!(probs.iter().all(|&p| p > 0.0));
        Ok(Distribution { probs })
    }

    /// Construct from already-validated probabilities. Used by the samplers.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(probs.len() >= 2 && probs.iter().all(|&p| p > 0.0));
        Distribution { probs }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_weights_normalizes() {
        let d = Distribution::from_weights(&[2.0, 2.0], 1e-12).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);
        let d = Distribution::from_weights(&[3.0, 1.0], 1e-12).unwrap();
        assert_eq!(d.probs(), &[0.75, 0.25]);
        let d = Distribution::from_weights(&[1.0, 2.0, 3.0, 4.0], 1e-12).unwrap();
        for (got, want) in d.probs().iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn from_weights_rejects_bad_input() {
        assert_eq!(Distribution::from_weights(&[1.0], 1e-12), Err(DistError::TooShort(1)));
        assert!(matches!(
            Distribution::from_weights(&[1.0, 0.0], 1e-12),
            Err(DistError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(
            Distribution::from_weights(&[1.0, f64::NAN], 1e-12),
            Err(DistError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(
            Distribution::from_weights(&[-1.0, 2.0], 1e-12),
            Err(DistError::NonPositiveWeight { index: 0, .. })
        ));
    }

    #[test]
    fn smoothing_examples() {
        let d = Distribution::from_counts_smoothed(&[0, 0], 1.0);
        assert_eq!(d, Err(DistError::AllZeroCounts));
        let d = Distribution::from_counts_smoothed(&[9, 0], 0.5).unwrap();
        assert!((d.probs()[0] - 0.95).abs() < 1e-15);
        assert!((d.probs()[1] - 0.05).abs() < 1e-15);
        let d = Distribution::from_counts_smoothed(&[1, 1, 1], 2.0).unwrap();
        for &p in d.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(
            Distribution::from_counts_smoothed(&[1, 2], -0.5),
            Err(DistError::NonPositiveAlpha(-0.5))
        );
    }

    #[test]
    fn random_is_reproducible_and_valid() {
        let a = Distribution::random(2, 99).unwrap();
        let b = Distribution::random(2, 99).unwrap();
        assert_eq!(a, b);
        let d = Distribution::random(5, 7).unwrap();
        assert!(d.probs().iter().all(|&p| p > 0.0));
        assert!((csum(d.probs().iter().copied()) - 1.0).abs() <= 1e-12);
        assert_eq!(Distribution::random(1, 0), Err(DistError::TooShort(1)));
    }

    #[test]
    fn random_entry_mean_matches_uniform_simplex() {
        // Law of large numbers for Dirichlet(1,..,1): E[p_0] = 1/4 at dim 4.
        let mut rng = ChaCha8Rng::seed_from_u64(20240817);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| Distribution::random_with(4, &mut rng).unwrap().probs()[0])
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.25).abs() < 0.005, "mean = {mean}");
    }
}
