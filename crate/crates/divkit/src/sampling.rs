//! Seeded generation of distribution pairs for randomized verification.
//!
//! Trials cycle deterministically through the requested dimension list and
//! through three pair styles: plain uniform simplex draws, adversarial
//! near-boundary pairs (minimum mass pinned to `1e-6`, where curvature-ratio
//! suprema are approached at extreme likelihood ratios), and near-equal pairs
//! (`Q` a relative `1e-3` perturbation of `P`, where the sharp constants are
//! approached). Everything is a pure function of the seed.

use crate::distributions::Distribution;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const BOUNDARY_MASS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStyle {
    Uniform,
    NearBoundary,
    NearEqual,
}

#[derive(Debug, Clone)]
pub struct PairSampler {
    rng: ChaCha8Rng,
    dims: Vec<usize>,
    trial: u64,
    include_near_equal: bool,
}

impl PairSampler {
    pub fn new(dims: &[usize], seed: u64) -> Self {
        assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 2));
        PairSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dims: dims.to_vec(),
            trial: 0,
            include_near_equal: false,
        }
    }

    /// Mix in near-equal pairs (used by bound certification, where the worst
    /// functional ratio is attained in the `P -> Q` limit).
    pub fn with_near_equal(mut self) -> Self {
        self.include_near_equal = true;
        self
    }

    fn style(&self) -> PairStyle {
        match self.trial % 8 {
            3 | 7 => PairStyle::NearBoundary,
            5 if self.include_near_equal => PairStyle::NearEqual,
            _ => PairStyle::Uniform,
        }
    }

    pub fn next_pair(&mut self) -> (Distribution, Distribution) {
        let dim = self.dims[(self.trial % self.dims.len() as u64) as usize];
        let style = self.style();
        self.trial += 1;
        if style == PairStyle::NearBoundary {
            // Pin different outcomes in P and Q; at dim 2 a shared pin would
            // collapse the pair to (nearly) identical points instead of the
            // intended extreme likelihood ratios.
            let i = self.rng.random_range(0..dim);
            let j = (i + 1 + self.rng.random_range(0..dim - 1)) % dim;
            return (self.draw_pinned(dim, i), self.draw_pinned(dim, j));
        }
        let p = self.draw(dim);
        let q = match style {
            PairStyle::NearEqual => self.perturb(&p),
            _ => self.draw(dim),
        };
        (p, q)
    }

    fn draw(&mut self, dim: usize) -> Distribution {
        Distribution::random_with(dim, &mut self.rng).unwrap()
    }

    fn draw_pinned(&mut self, dim: usize, pin: usize) -> Distribution {
        let d = self.draw(dim);
        let mut probs = d.probs().to_vec();
        let rest: f64 = probs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pin)
            .map(|(_, &p)| p)
            .sum();
        let scale = (1.0 - BOUNDARY_MASS) / rest;
        for (i, p) in probs.iter_mut().enumerate() {
            *p = if i == pin { BOUNDARY_MASS } else { *p * scale };
        }
        Distribution::from_normalized(probs)
    }

    fn perturb(&mut self, p: &Distribution) -> Distribution {
        let mut probs: Vec<f64> = p
            .probs()
            .iter()
            .map(|&v| v * (1.0 + 1e-3 * (self.rng.random::<f64>() - 0.5)))
            .collect();
        let total: f64 = probs.iter().sum();
        for v in &mut probs {
            *v /= total;
        }
        Distribution::from_normalized(probs)
    }
}

/// Parse a dims selector: a range `"2..16"` (inclusive) or a list `"2,4,8"`.
pub fn parse_dims(spec: &str) -> Option<Vec<usize>> {
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (lo.trim().parse::<usize>().ok()?, hi.trim().parse::<usize>().ok()?);
        if lo < 2 || hi < lo {
            return None;
        }
        return Some((lo..=hi).collect());
    }
    let dims: Option<Vec<usize>> = spec.split(',').map(|s| s.trim().parse::<usize>().ok()).collect();
    let dims = dims?;
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return None;
    }
    Some(dims)
}
