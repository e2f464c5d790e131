//! Sparse bandit instances: validated mean vectors, reward sampling and
//! regret accounting.
//!
//! An instance holds `d` arms of which exactly `s` have a strictly positive
//! mean ("good" arms); the remaining arms have nonpositive means ("bad"
//! arms). Means are canonicalized to nonincreasing order at construction and
//! the original positions are retained for reporting.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Reward noise attached to every arm.
///
/// Only one model is supported: Gaussian with variance 1/4 (standard
/// deviation 1/2). This is the model under which the lower bounds of
/// [`crate::lower_bound`] are stated, so simulations and theory use the same
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    GaussianQuarterVariance,
}

impl NoiseModel {
    pub fn variance(self) -> f64 {
        0.25
    }

    pub fn std_dev(self) -> f64 {
        0.5
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("instance has no arms")]
    EmptyInstance,
    #[error("sparsity level s={s} out of range for d={d} arms")]
    SparsityOutOfRange { s: usize, d: usize },
    #[error("expected {expected} strictly positive means, found {found}")]
    SparsityMismatch { expected: usize, found: usize },
    #[error("mean of arm {arm} is not finite")]
    NonFiniteMean { arm: usize },
    #[error("arm index {arm} out of range for d={d}")]
    IndexOutOfRange { arm: usize, d: usize },
    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Per-arm suboptimality gaps `delta_i = mu_1 - mu_i`.
///
/// `delta_0 = 0`, the vector is nondecreasing, and bad arms with zero mean
/// carry a gap equal to the best mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaps {
    deltas: Vec<f64>,
}

impl Gaps {
    pub fn delta(&self, arm: usize) -> f64 {
        self.deltas[arm]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// A validated sparse bandit instance.
///
/// Construction sorts the means into nonincreasing order, so arm `0` is
/// always a best arm and arms `s..d` are the bad arms.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseBanditInstance {
    means: Vec<f64>,
    s: usize,
    noise: NoiseModel,
    gaps: Gaps,
    /// `source[i]` is the position arm `i` occupied in the caller's input.
    source: Vec<usize>,
}

impl SparseBanditInstance {
    /// Validates `means` against the sparsity level `s` and canonicalizes
    /// the ordering.
    ///
    /// Fails with [`InstanceError::SparsityMismatch`] unless exactly `s`
    /// entries are strictly positive.
    pub fn new(means: Vec<f64>, s: usize) -> Result<Self, InstanceError> {
        if means.is_empty() {
            return Err(InstanceError::EmptyInstance);
        }
        let d = means.len();
        if s < 1 || s > d {
            return Err(InstanceError::SparsityOutOfRange { s, d });
        }
        if let Some(arm) = means.iter().position(|m| !m.is_finite()) {
            return Err(InstanceError::NonFiniteMean { arm });
        }
        let positive = means.iter().filter(|&&m| m > 0.0).count();
        if positive != s {
            return Err(InstanceError::SparsityMismatch {
                expected: s,
                found: positive,
            });
        }

        let mut source: Vec<usize> = (0..d).collect();
        // Stable sort: ties keep the caller's relative order.
        source.sort_by(|&a, &b| means[b].partial_cmp(&means[a]).unwrap());
        let sorted: Vec<f64> = source.iter().map(|&i| means[i]).collect();
        let best = sorted[0];
        let deltas: Vec<f64> = sorted.iter().map(|&m| best - m).collect();

        Ok(Self {
            means: sorted,
            s,
            noise: NoiseModel::GaussianQuarterVariance,
            gaps: Gaps { deltas },
            source,
        })
    }

    pub fn d(&self) -> usize {
        self.means.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    /// Means in canonical (nonincreasing) order.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    /// `mu_1`, the largest mean.
    pub fn best_mean(&self) -> f64 {
        self.means[0]
    }

    pub fn gaps(&self) -> &Gaps {
        &self.gaps
    }

    pub fn is_good(&self, arm: usize) -> bool {
        arm < self.s
    }

    /// The input position of canonical arm `arm` (0-based), for reporting
    /// results in terms of the caller's arm labels.
    pub fn original_index(&self, arm: usize) -> usize {
        self.source[arm]
    }

    /// Draws one reward for `arm`: Gaussian with mean `mu_arm`, standard
    /// deviation 1/2. Deterministic given the rng state.
    pub fn sample_reward<R: Rng + ?Sized>(
        &self,
        arm: usize,
        rng: &mut R,
    ) -> Result<f64, InstanceError> {
        if arm >= self.d() {
            return Err(InstanceError::IndexOutOfRange { arm, d: self.d() });
        }
        let normal = Normal::new(self.means[arm], self.noise.std_dev()).unwrap();
        Ok(normal.sample(rng))
    }

    /// `sum_i delta_i * n_i`, the pseudo-regret of a pull-count vector.
    pub fn pseudo_regret(&self, pull_counts: &[u64]) -> Result<f64, InstanceError> {
        if pull_counts.len() != self.d() {
            return Err(InstanceError::LengthMismatch {
                expected: self.d(),
                found: pull_counts.len(),
            });
        }
        Ok(pull_counts
            .iter()
            .zip(self.gaps.as_slice())
            .map(|(&n, &delta)| delta * n as f64)
            .sum())
    }
}

/// Running pull counts and cumulative pseudo-regret for one replication.
#[derive(Debug, Clone)]
pub struct RegretLedger {
    pull_counts: Vec<u64>,
    cumulative: f64,
    trajectory: Vec<(u64, f64)>,
}

impl RegretLedger {
    pub fn new(d: usize) -> Self {
        Self {
            pull_counts: vec![0; d],
            cumulative: 0.0,
            trajectory: Vec::new(),
        }
    }

    /// Records one pull of `arm` with suboptimality gap `delta`.
    pub fn record_pull(&mut self, arm: usize, delta: f64) {
        self.pull_counts[arm] += 1;
        self.cumulative += delta;
    }

    /// Appends `(t, cumulative pseudo-regret)` to the trajectory.
    pub fn checkpoint(&mut self, t: u64) {
        self.trajectory.push((t, self.cumulative));
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pull_counts
    }

    pub fn cumulative_pseudo_regret(&self) -> f64 {
        self.cumulative
    }

    pub fn rounds_elapsed(&self) -> u64 {
        self.pull_counts.iter().sum()
    }

    pub fn trajectory(&self) -> &[(u64, f64)] {
        &self.trajectory
    }

    pub fn into_trajectory(self) -> Vec<(u64, f64)> {
        self.trajectory
    }
}
