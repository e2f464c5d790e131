//! Decision policies: the sparsity-aware three-phase UCB machine and the
//! classical UCB baseline.
//!
//! The sparse policy cycles through three operating modes. A *round-robin*
//! sweep pulls every arm once whenever fewer than `s` arms are active; a
//! *force-log* step pulls an active but under-sampled arm whenever fewer
//! than `s` arms are both active and sufficiently sampled; otherwise the
//! policy plays a UCB step restricted to the sufficiently sampled arms.
//!
//! An arm is *active* when its empirical mean clears the self-referential
//! threshold `2 * sqrt(ln(n_i) / n_i)`, and *sufficiently sampled* when it
//! clears the time-referenced threshold `2 * sqrt(ln(t) / n_i)`. Since
//! `n_i <= t`, the second set is always contained in the first.
//!
//! All decisions are deterministic functions of the policy state; the only
//! randomness in a simulation lives in the reward sampler.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("policy needs at least one arm and d >= s (got d={d}, s={s})")]
    BadDimensions { d: usize, s: usize },
    #[error("horizon-aware force-log threshold requires a horizon >= 1")]
    BadHorizon,
    #[error("arm index {arm} out of range for d={d}")]
    IndexOutOfRange { arm: usize, d: usize },
    #[error("state not initialized: arm {arm} has no samples")]
    NotInitialized { arm: usize },
    #[error("inconsistent state: {0}")]
    InconsistentState(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

/// Operating mode of one decision round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    RoundRobin,
    ForceLog,
    Ucb,
}

/// Threshold family used by the sufficiently-sampled test.
///
/// `Anytime` is the default `2 * sqrt(ln(t) / n_i)`. `HorizonAware` swaps in
/// `2 * sqrt(ln(T / n_i) / n_i)`, which needs the horizon up front and
/// trades the anytime property for a smaller forced-exploration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceLogVariant {
    Anytime,
    HorizonAware { horizon: u64 },
}

/// Configuration of the sparse policy.
///
/// Ties in every argmax/min are broken toward the lowest arm index; this is
/// fixed rather than configurable so that runs are reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyConfig {
    pub s: usize,
    pub variant: ForceLogVariant,
}

impl PolicyConfig {
    pub fn anytime(s: usize) -> Self {
        Self {
            s,
            variant: ForceLogVariant::Anytime,
        }
    }

    pub fn horizon_aware(s: usize, horizon: u64) -> Self {
        Self {
            s,
            variant: ForceLogVariant::HorizonAware { horizon },
        }
    }
}

/// One decision: the arm to pull and the phase that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub arm: usize,
    pub phase: Phase,
}

fn mean_or_zero(sum: f64, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Lowest-index argmax over `(index, score)` pairs — the tie-break rule
/// shared by every argmax in this module.
pub fn argmax_lowest_index<I: IntoIterator<Item = (usize, f64)>>(iter: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in iter {
        match best {
            Some((_, bv)) if v <= bv => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// State of the sparsity-aware UCB policy.
#[derive(Debug, Clone)]
pub struct SparseUcb {
    config: PolicyConfig,
    d: usize,
    /// Current round, 1-based; `counts` holds pulls made before round `t`.
    t: u64,
    counts: Vec<u64>,
    sums: Vec<f64>,
    /// Pulls left in the current round-robin sweep (counting the pending one).
    rr_remaining: usize,
    /// Arm the sweep will pull next.
    rr_next: usize,
    last_phase: Option<Phase>,
}

impl SparseUcb {
    /// A fresh policy over `d` arms. The first `d` rounds form the
    /// initialization sweep pulling arms `0..d` in order.
    pub fn new(d: usize, config: PolicyConfig) -> Result<Self, PolicyError> {
        if d == 0 || config.s == 0 || config.s > d {
            return Err(PolicyError::BadDimensions { d, s: config.s });
        }
        if let ForceLogVariant::HorizonAware { horizon } = config.variant {
            if horizon == 0 {
                return Err(PolicyError::BadHorizon);
            }
        }
        Ok(Self {
            config,
            d,
            t: 1,
            counts: vec![0; d],
            sums: vec![0.0; d],
            rr_remaining: d,
            rr_next: 0,
            last_phase: None,
        })
    }

    /// Rebuilds a mid-run state (not inside a sweep) from raw counts and
    /// sums. Intended for tests and for resuming from logged state.
    pub fn from_parts(
        config: PolicyConfig,
        counts: Vec<u64>,
        sums: Vec<f64>,
        t: u64,
    ) -> Result<Self, PolicyError> {
        let d = counts.len();
        if d == 0 || config.s == 0 || config.s > d {
            return Err(PolicyError::BadDimensions { d, s: config.s });
        }
        if sums.len() != d {
            return Err(PolicyError::InconsistentState(format!(
                "counts has length {d} but sums has length {}",
                sums.len()
            )));
        }
        let total: u64 = counts.iter().sum();
        if total + 1 != t {
            return Err(PolicyError::InconsistentState(format!(
                "sum of counts is {total} but t={t} requires {}",
                t.saturating_sub(1)
            )));
        }
        Ok(Self {
            config,
            d,
            t,
            counts,
            sums,
            rr_remaining: 0,
            rr_next: 0,
            last_phase: None,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn config(&self) -> &PolicyConfig {
        &self.config
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn last_phase(&self) -> Option<Phase> {
        self.last_phase
    }

    pub fn rr_remaining(&self) -> usize {
        self.rr_remaining
    }

    /// Empirical mean of `arm`, zero when the arm has never been pulled.
    pub fn empirical_mean(&self, arm: usize) -> f64 {
        mean_or_zero(self.sums[arm], self.counts[arm])
    }

    /// Activity threshold `2 * sqrt(ln(n) / n)`; zero at `n = 1`.
    fn active_threshold(n: u64) -> f64 {
        let nf = n as f64;
        2.0 * (nf.ln() / nf).sqrt()
    }

    /// Sufficient-sampling threshold for the configured variant.
    fn sufficient_threshold(&self, n: u64) -> f64 {
        let nf = n as f64;
        match self.config.variant {
            ForceLogVariant::Anytime => 2.0 * ((self.t as f64).ln() / nf).sqrt(),
            ForceLogVariant::HorizonAware { horizon } => {
                let ratio = (horizon as f64 / nf).ln().max(0.0);
                2.0 * (ratio / nf).sqrt()
            }
        }
    }

    /// Whether `arm` clears the activity threshold. False when unsampled.
    pub fn is_active(&self, arm: usize) -> bool {
        let n = self.counts[arm];
        n > 0 && self.empirical_mean(arm) >= Self::active_threshold(n)
    }

    /// Whether `arm` clears the sufficient-sampling threshold. False when
    /// unsampled.
    pub fn is_sufficiently_sampled(&self, arm: usize) -> bool {
        let n = self.counts[arm];
        n > 0 && self.empirical_mean(arm) >= self.sufficient_threshold(n)
    }

    fn require_initialized(&self) -> Result<(), PolicyError> {
        match self.counts.iter().position(|&n| n == 0) {
            Some(arm) => Err(PolicyError::NotInitialized { arm }),
            None => Ok(()),
        }
    }

    /// The set of active arms. Requires every arm to have been pulled.
    pub fn active_set(&self) -> Result<Vec<usize>, PolicyError> {
        self.require_initialized()?;
        Ok((0..self.d).filter(|&i| self.is_active(i)).collect())
    }

    /// The set of active and sufficiently sampled arms; always a subset of
    /// [`Self::active_set`] under the anytime variant.
    pub fn sufficiently_sampled_set(&self) -> Result<Vec<usize>, PolicyError> {
        self.require_initialized()?;
        Ok((0..self.d)
            .filter(|&i| self.is_sufficiently_sampled(i))
            .collect())
    }

    /// UCB index `xbar_i + 2 * sqrt(ln(t) / n_i)` of a sampled arm.
    pub fn ucb_index(&self, arm: usize) -> f64 {
        let n = self.counts[arm] as f64;
        self.empirical_mean(arm) + 2.0 * ((self.t as f64).ln() / n).sqrt()
    }

    /// Picks the arm for round `t`.
    ///
    /// Starting a new round-robin sweep commits the next `d` rounds to it:
    /// the sweep is never interrupted, and the active/sufficient sets are
    /// only re-evaluated once it completes. Calling `select` again without
    /// an intervening [`Self::update`] returns the same decision.
    pub fn select(&mut self) -> Result<Decision, PolicyError> {
        if self.rr_remaining > 0 {
            self.last_phase = Some(Phase::RoundRobin);
            return Ok(Decision {
                arm: self.rr_next,
                phase: Phase::RoundRobin,
            });
        }

        let active = self.active_set()?;
        if active.len() < self.config.s {
            self.rr_remaining = self.d;
            self.rr_next = 0;
            self.last_phase = Some(Phase::RoundRobin);
            return Ok(Decision {
                arm: 0,
                phase: Phase::RoundRobin,
            });
        }

        let sufficient = self.sufficiently_sampled_set()?;
        if sufficient.len() < self.config.s {
            // Lowest-index arm that is active but not sufficiently sampled.
            let arm = active
                .iter()
                .copied()
                .find(|&i| !self.is_sufficiently_sampled(i))
                .ok_or_else(|| {
                    PolicyError::InvariantViolation(
                        "active minus sufficiently-sampled is empty although \
                         |active| >= s > |sufficient|"
                            .to_string(),
                    )
                })?;
            self.last_phase = Some(Phase::ForceLog);
            return Ok(Decision {
                arm,
                phase: Phase::ForceLog,
            });
        }

        let arm = argmax_lowest_index(sufficient.iter().map(|&i| (i, self.ucb_index(i))))
            .expect("sufficient set has at least s >= 1 arms");
        self.last_phase = Some(Phase::Ucb);
        Ok(Decision {
            arm,
            phase: Phase::Ucb,
        })
    }

    /// Records the reward of a pull and advances the round counter and any
    /// in-progress sweep.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), PolicyError> {
        if arm >= self.d {
            return Err(PolicyError::IndexOutOfRange { arm, d: self.d });
        }
        if self.rr_remaining > 0 && arm == self.rr_next {
            self.rr_remaining -= 1;
            self.rr_next = (self.rr_next + 1) % self.d;
        }
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.t += 1;
        Ok(())
    }
}

/// Classical UCB over all arms, used as the experimental baseline.
#[derive(Debug, Clone)]
pub struct ClassicUcb {
    d: usize,
    t: u64,
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl ClassicUcb {
    pub fn new(d: usize) -> Result<Self, PolicyError> {
        if d == 0 {
            return Err(PolicyError::BadDimensions { d, s: 0 });
        }
        Ok(Self {
            d,
            t: 1,
            counts: vec![0; d],
            sums: vec![0.0; d],
        })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn empirical_mean(&self, arm: usize) -> f64 {
        mean_or_zero(self.sums[arm], self.counts[arm])
    }

    /// Argmax of `xbar_i + 2 * sqrt(ln(t) / n_i)` over all arms, lowest
    /// index on ties. Requires every arm to have been pulled once.
    pub fn ucb_select(&self) -> Result<usize, PolicyError> {
        if let Some(arm) = self.counts.iter().position(|&n| n == 0) {
            return Err(PolicyError::NotInitialized { arm });
        }
        let lnt = (self.t as f64).ln();
        Ok(argmax_lowest_index((0..self.d).map(|i| {
            let n = self.counts[i] as f64;
            (i, self.sums[i] / n + 2.0 * (lnt / n).sqrt())
        }))
        .expect("d >= 1"))
    }

    /// Arm for round `t`: rounds `1..=d` initialize each arm once, then the
    /// UCB rule applies.
    pub fn select(&self) -> usize {
        if self.t <= self.d as u64 {
            (self.t - 1) as usize
        } else {
            self.ucb_select()
                .expect("all arms initialized after round d")
        }
    }

    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), PolicyError> {
        if arm >= self.d {
            return Err(PolicyError::IndexOutOfRange { arm, d: self.d });
        }
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.t += 1;
        Ok(())
    }
}

/// Per-pull event classes used by the regret diagnostics.
///
/// Good-arm pulls split by phase, with UCB pulls further split by whether
/// the best arm was sufficiently sampled at decision time. Bad-arm pulls
/// outside round-robin sweeps are all "active bad arm" events: force-log and
/// UCB only ever touch active arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventClass {
    RoundRobin,
    ForceLog,
    UcbBestSampled,
    UcbBestMissing,
    ActiveBad,
}

/// Classifies the pull of `arm` decided in `phase` from the pre-pull state.
///
/// Must be called before the corresponding [`SparseUcb::update`], since the
/// best arm's sufficient-sampling status refers to decision time.
pub fn classify_event(state: &SparseUcb, arm: usize, phase: Phase) -> EventClass {
    let good = arm < state.config.s;
    match (good, phase) {
        (_, Phase::RoundRobin) => EventClass::RoundRobin,
        (true, Phase::ForceLog) => EventClass::ForceLog,
        (true, Phase::Ucb) => {
            if state.is_sufficiently_sampled(0) {
                EventClass::UcbBestSampled
            } else {
                EventClass::UcbBestMissing
            }
        }
        (false, _) => EventClass::ActiveBad,
    }
}
