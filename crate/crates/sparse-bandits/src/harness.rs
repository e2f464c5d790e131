//! Seeded Monte-Carlo experiment runner.
//!
//! A replication plays one policy against one instance for a fixed horizon,
//! recording the pseudo-regret trajectory at checkpoints plus, for the
//! sparse policy, per-arm event counts (which phase produced each pull, and
//! whether the best arm was sufficiently sampled during UCB pulls). An
//! experiment aggregates replications into means and standard errors and can
//! compare the event counts against their closed-form expectation bounds.
//!
//! Replication `r` draws its rewards from an independent ChaCha stream
//! derived from `(base_seed, r)`, so replications can run on any number of
//! threads without changing any result; aggregation always folds the
//! collected results in replication order.

use crate::instance::{InstanceError, RegretLedger, SparseBanditInstance};
use crate::policies::{
    classify_event, ClassicUcb, EventClass, ForceLogVariant, Phase, PolicyConfig, PolicyError,
    SparseUcb,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("replication {replication} broke an invariant: {what}")]
    InvariantViolation { replication: u32, what: String },
    #[error("diagnostics require the sparse policy with the anytime threshold")]
    WrongPolicy,
}

/// Which policy an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyChoice {
    Ucb,
    SparseUcb(PolicyConfig),
}

impl PolicyChoice {
    pub fn label(self) -> &'static str {
        match self {
            PolicyChoice::Ucb => "ucb",
            PolicyChoice::SparseUcb(_) => "sparse_ucb",
        }
    }
}

/// A fully specified experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub instance: SparseBanditInstance,
    pub policy: PolicyChoice,
    pub horizon: u64,
    pub replications: u32,
    pub base_seed: u64,
    /// Strictly increasing rounds in `[1, horizon]` at which the regret is
    /// recorded.
    pub checkpoints: Vec<u64>,
}

impl ExperimentConfig {
    /// Builds a config with the default geometric checkpoint grid.
    pub fn new(
        instance: SparseBanditInstance,
        policy: PolicyChoice,
        horizon: u64,
        replications: u32,
        base_seed: u64,
    ) -> Result<Self, HarnessError> {
        let checkpoints = geometric_checkpoints(horizon);
        Self::with_checkpoints(
            instance,
            policy,
            horizon,
            replications,
            base_seed,
            checkpoints,
        )
    }

    pub fn with_checkpoints(
        instance: SparseBanditInstance,
        policy: PolicyChoice,
        horizon: u64,
        replications: u32,
        base_seed: u64,
        checkpoints: Vec<u64>,
    ) -> Result<Self, HarnessError> {
        let cfg = Self {
            instance,
            policy,
            horizon,
            replications,
            base_seed,
            checkpoints,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.horizon == 0 {
            return Err(HarnessError::BadConfig("horizon must be >= 1".into()));
        }
        if self.replications == 0 {
            return Err(HarnessError::BadConfig("replications must be >= 1".into()));
        }
        if let PolicyChoice::SparseUcb(pc) = self.policy {
            if pc.s != self.instance.s() {
                return Err(HarnessError::BadConfig(format!(
                    "policy sparsity {} does not match instance s={}",
                    pc.s,
                    self.instance.s()
                )));
            }
        }
        let mut last = 0u64;
        for &cp in &self.checkpoints {
            if cp <= last || cp > self.horizon {
                return Err(HarnessError::BadConfig(format!(
                    "checkpoints must be strictly increasing within [1, {}]",
                    self.horizon
                )));
            }
            last = cp;
        }
        Ok(())
    }
}

/// Roughly geometric grid (ratio ~1.2) over `[1, horizon]`, always ending at
/// the horizon. Evenly spaced in log-time, which is what regret-slope fits
/// want.
pub fn geometric_checkpoints(horizon: u64) -> Vec<u64> {
    let mut cps = Vec::new();
    let mut t = 1u64;
    while t < horizon {
        cps.push(t);
        t = ((t as f64) * 1.2).round().max((t + 1) as f64) as u64;
    }
    cps.push(horizon);
    cps
}

/// The reward stream of replication `r`.
pub fn replication_rng(base_seed: u64, r: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(r as u64);
    rng
}

/// Pull counts of one arm split by event class. Good arms use the first
/// four classes; bad arms only accumulate `round_robin` and `active_bad`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArmEventCounts {
    pub round_robin: u64,
    pub force_log: u64,
    pub ucb_best_sampled: u64,
    pub ucb_best_missing: u64,
    pub active_bad: u64,
}

impl ArmEventCounts {
    fn bump(&mut self, class: EventClass) {
        match class {
            EventClass::RoundRobin => self.round_robin += 1,
            EventClass::ForceLog => self.force_log += 1,
            EventClass::UcbBestSampled => self.ucb_best_sampled += 1,
            EventClass::UcbBestMissing => self.ucb_best_missing += 1,
            EventClass::ActiveBad => self.active_bad += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.round_robin
            + self.force_log
            + self.ucb_best_sampled
            + self.ucb_best_missing
            + self.active_bad
    }
}

/// Rounds spent in each phase over one replication.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseRounds {
    pub round_robin: u64,
    pub force_log: u64,
    pub ucb: u64,
}

impl PhaseRounds {
    fn bump(&mut self, phase: Phase) {
        match phase {
            Phase::RoundRobin => self.round_robin += 1,
            Phase::ForceLog => self.force_log += 1,
            Phase::Ucb => self.ucb += 1,
        }
    }
}

/// Everything recorded about one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub final_counts: Vec<u64>,
    pub regret_trajectory: Vec<(u64, f64)>,
    /// Per-arm event counts; empty when the policy records no events (UCB).
    pub event_counts: Vec<ArmEventCounts>,
    pub phase_rounds: PhaseRounds,
}

fn verify_replication(
    cfg: &ExperimentConfig,
    r: u32,
    result: &ReplicationResult,
) -> Result<(), HarnessError> {
    let fail = |what: String| HarnessError::InvariantViolation {
        replication: r,
        what,
    };
    let total: u64 = result.final_counts.iter().sum();
    if total != cfg.horizon {
        return Err(fail(format!(
            "sum of pull counts {total} != horizon {}",
            cfg.horizon
        )));
    }
    let mut last = f64::NEG_INFINITY;
    for &(_, reg) in &result.regret_trajectory {
        if reg < last {
            return Err(fail("regret trajectory decreased".into()));
        }
        last = reg;
    }
    if !result.event_counts.is_empty() {
        let s = cfg.instance.s();
        for (arm, ev) in result.event_counts.iter().enumerate() {
            if ev.total() != result.final_counts[arm] {
                return Err(fail(format!(
                    "event classes of arm {arm} sum to {} but N = {}",
                    ev.total(),
                    result.final_counts[arm]
                )));
            }
            let misplaced = if arm < s {
                ev.active_bad
            } else {
                ev.force_log + ev.ucb_best_sampled + ev.ucb_best_missing
            };
            if misplaced != 0 {
                return Err(fail(format!("arm {arm} has events of the wrong kind")));
            }
        }
    }
    Ok(())
}

/// Runs replication `r` of the experiment. Deterministic in `(cfg, r)`.
pub fn run_replication(cfg: &ExperimentConfig, r: u32) -> Result<ReplicationResult, HarnessError> {
    let instance = &cfg.instance;
    let d = instance.d();
    let gaps = instance.gaps();
    let mut rng = replication_rng(cfg.base_seed, r);
    let mut ledger = RegretLedger::new(d);
    let mut next_cp = 0usize;
    let mut phase_rounds = PhaseRounds::default();

    let result = match cfg.policy {
        PolicyChoice::SparseUcb(pc) => {
            let mut policy = SparseUcb::new(d, pc)?;
            let mut events = vec![ArmEventCounts::default(); d];
            for t in 1..=cfg.horizon {
                let decision = policy.select()?;
                let class = classify_event(&policy, decision.arm, decision.phase);
                events[decision.arm].bump(class);
                phase_rounds.bump(decision.phase);
                let reward = instance.sample_reward(decision.arm, &mut rng)?;
                policy.update(decision.arm, reward)?;
                ledger.record_pull(decision.arm, gaps.delta(decision.arm));
                if next_cp < cfg.checkpoints.len() && cfg.checkpoints[next_cp] == t {
                    ledger.checkpoint(t);
                    next_cp += 1;
                }
            }
            ReplicationResult {
                final_counts: ledger.pull_counts().to_vec(),
                regret_trajectory: ledger.into_trajectory(),
                event_counts: events,
                phase_rounds,
            }
        }
        PolicyChoice::Ucb => {
            let mut policy = ClassicUcb::new(d)?;
            for t in 1..=cfg.horizon {
                let arm = policy.select();
                let reward = instance.sample_reward(arm, &mut rng)?;
                policy.update(arm, reward)?;
                ledger.record_pull(arm, gaps.delta(arm));
                if next_cp < cfg.checkpoints.len() && cfg.checkpoints[next_cp] == t {
                    ledger.checkpoint(t);
                    next_cp += 1;
                }
            }
            ReplicationResult {
                final_counts: ledger.pull_counts().to_vec(),
                regret_trajectory: ledger.into_trajectory(),
                event_counts: Vec::new(),
                phase_rounds,
            }
        }
    };

    verify_replication(cfg, r, &result)?;
    Ok(result)
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

/// Online mean/variance accumulator, folded in replication order.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    fn stats(&self) -> MeanSe {
        let n = self.n as f64;
        let mean = self.sum / n;
        let se = if self.n > 1 {
            let var = ((self.sumsq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        MeanSe { mean, se }
    }
}

/// Per-arm event statistics over replications.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmEventStats {
    pub round_robin: MeanSe,
    pub force_log: MeanSe,
    pub ucb_best_sampled: MeanSe,
    pub ucb_best_missing: MeanSe,
    pub active_bad: MeanSe,
}

/// Aggregated experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub policy: PolicyChoice,
    pub replications: u32,
    pub checkpoints: Vec<u64>,
    pub mean_regret: Vec<f64>,
    pub stderr_regret: Vec<f64>,
    /// False when a single replication makes the standard error undefined;
    /// the stderr columns are all zero in that case.
    pub stderr_defined: bool,
    /// Pseudo-regret at the horizon.
    pub final_regret: MeanSe,
    /// Per-arm event statistics; empty for the plain UCB policy.
    pub events: Vec<ArmEventStats>,
    /// Per-replication `sum_i gap_i * ucb_best_missing_i` statistic.
    pub best_missing_weighted: MeanSe,
    /// Mean fraction of rounds spent in each phase.
    pub phase_fractions: PhaseFractions,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseFractions {
    pub round_robin: f64,
    pub force_log: f64,
    pub ucb: f64,
}

/// Order-insensitive reduction of replication results.
///
/// The fold always walks the slice front to back, so a fixed result order
/// yields bit-identical aggregates regardless of how the replications were
/// computed.
pub fn aggregate_replications(
    cfg: &ExperimentConfig,
    results: &[ReplicationResult],
) -> Result<AggregateResult, HarnessError> {
    if results.is_empty() {
        return Err(HarnessError::BadConfig(
            "no replications to aggregate".into(),
        ));
    }
    let d = cfg.instance.d();
    let gaps = cfg.instance.gaps();
    let track_events = !results[0].event_counts.is_empty();

    let mut regret_acc = vec![Accumulator::default(); cfg.checkpoints.len()];
    let mut final_acc = Accumulator::default();
    let mut event_acc = vec![[Accumulator::default(); 5]; if track_events { d } else { 0 }];
    let mut weighted_acc = Accumulator::default();
    let mut phase_acc = [Accumulator::default(); 3];

    for res in results {
        if res.regret_trajectory.len() != cfg.checkpoints.len() {
            return Err(HarnessError::BadConfig(
                "replication trajectory does not match the checkpoint grid".into(),
            ));
        }
        for (acc, &(_, reg)) in regret_acc.iter_mut().zip(&res.regret_trajectory) {
            acc.push(reg);
        }
        final_acc.push(cfg.instance.pseudo_regret(&res.final_counts)?);
        if track_events {
            let mut weighted = 0.0;
            for (arm, ev) in res.event_counts.iter().enumerate() {
                event_acc[arm][0].push(ev.round_robin as f64);
                event_acc[arm][1].push(ev.force_log as f64);
                event_acc[arm][2].push(ev.ucb_best_sampled as f64);
                event_acc[arm][3].push(ev.ucb_best_missing as f64);
                event_acc[arm][4].push(ev.active_bad as f64);
                weighted += gaps.delta(arm) * ev.ucb_best_missing as f64;
            }
            weighted_acc.push(weighted);
        }
        let t = cfg.horizon as f64;
        phase_acc[0].push(res.phase_rounds.round_robin as f64 / t);
        phase_acc[1].push(res.phase_rounds.force_log as f64 / t);
        phase_acc[2].push(res.phase_rounds.ucb as f64 / t);
    }

    let events = event_acc
        .iter()
        .map(|accs| ArmEventStats {
            round_robin: accs[0].stats(),
            force_log: accs[1].stats(),
            ucb_best_sampled: accs[2].stats(),
            ucb_best_missing: accs[3].stats(),
            active_bad: accs[4].stats(),
        })
        .collect();

    Ok(AggregateResult {
        policy: cfg.policy,
        replications: results.len() as u32,
        checkpoints: cfg.checkpoints.clone(),
        mean_regret: regret_acc.iter().map(|a| a.stats().mean).collect(),
        stderr_regret: regret_acc.iter().map(|a| a.stats().se).collect(),
        stderr_defined: results.len() > 1,
        final_regret: final_acc.stats(),
        events,
        best_missing_weighted: weighted_acc.stats(),
        phase_fractions: PhaseFractions {
            round_robin: phase_acc[0].stats().mean,
            force_log: phase_acc[1].stats().mean,
            ucb: phase_acc[2].stats().mean,
        },
    })
}

/// Runs all replications (in parallel) and aggregates them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<AggregateResult, HarnessError> {
    cfg.validate()?;
    let results: Vec<ReplicationResult> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| run_replication(cfg, r))
        .collect::<Result<_, _>>()?;
    aggregate_replications(cfg, &results)
}

// Closed-form expectation bounds for the sparse policy with the anytime
// threshold. All logarithms are natural.

/// Expected round-robin pulls of any single arm:
/// `1 + 3s + sum_j (8 + 32 ln(16/mu_j^2)) / mu_j^2` over good arms `j`.
pub fn round_robin_pull_bound(instance: &SparseBanditInstance) -> f64 {
    let s = instance.s();
    let tail: f64 = instance.means()[..s]
        .iter()
        .map(|&mu| {
            let mu2 = mu * mu;
            (8.0 + 32.0 * (16.0 / mu2).ln()) / mu2
        })
        .sum();
    1.0 + 3.0 * s as f64 + tail
}

/// Expected force-log pulls of a good arm with mean `mu`:
/// `(16 ln(T) + 8) / mu^2`.
pub fn force_log_pull_bound(mu: f64, horizon: u64) -> f64 {
    (16.0 * (horizon as f64).ln() + 8.0) / (mu * mu)
}

/// Expected UCB pulls of a suboptimal good arm with gap `delta` while the
/// best arm is sufficiently sampled: `(16 ln(T) + 8) / delta^2 + 3`.
pub fn ucb_tracked_pull_bound(delta: f64, horizon: u64) -> f64 {
    (16.0 * (horizon as f64).ln() + 8.0) / (delta * delta) + 3.0
}

/// Expected regret from UCB pulls while the best arm is not sufficiently
/// sampled: `d * delta_s * pi^2 / 6`.
pub fn best_missing_regret_bound(instance: &SparseBanditInstance) -> f64 {
    let delta_s = instance.gaps().delta(instance.s() - 1);
    instance.d() as f64 * delta_s * PI * PI / 6.0
}

/// Expected active pulls of any bad arm: `pi^2 / 6`.
pub fn bad_arm_active_bound() -> f64 {
    PI * PI / 6.0
}

/// Coefficient of `ln(T)` in the total regret bound:
/// `16 * sum_{good, gap>0} (1/gap_i + gap_i/mu_i^2)`.
pub fn log_regret_coefficient(instance: &SparseBanditInstance) -> f64 {
    let gaps = instance.gaps().as_slice();
    16.0 * (1..instance.s())
        .filter(|&i| gaps[i] > 0.0)
        .map(|i| {
            let mu = instance.mean(i);
            1.0 / gaps[i] + gaps[i] / (mu * mu)
        })
        .sum::<f64>()
}

/// Total expected pseudo-regret bound at the horizon, composed from the
/// per-event bounds weighted by their gaps.
pub fn total_regret_bound(instance: &SparseBanditInstance, horizon: u64) -> f64 {
    let gaps = instance.gaps().as_slice();
    let s = instance.s();
    let sum_gaps: f64 = gaps.iter().sum();
    let rr = sum_gaps * round_robin_pull_bound(instance);
    let good: f64 = (1..s)
        .filter(|&i| gaps[i] > 0.0)
        .map(|i| {
            gaps[i]
                * (force_log_pull_bound(instance.mean(i), horizon)
                    + ucb_tracked_pull_bound(gaps[i], horizon))
        })
        .sum();
    let bad: f64 = gaps[s..].iter().map(|&g| g * bad_arm_active_bound()).sum();
    rr + good + bad + best_missing_regret_bound(instance)
}

/// One row of the diagnostics report.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: &'static str,
    /// Canonical arm index the check applies to, `None` for aggregates.
    pub arm: Option<usize>,
    pub empirical_mean: f64,
    pub stderr: f64,
    pub bound: f64,
    pub pass: bool,
}

fn check(name: &'static str, arm: Option<usize>, stats: MeanSe, bound: f64) -> LemmaCheck {
    LemmaCheck {
        name,
        arm,
        empirical_mean: stats.mean,
        stderr: stats.se,
        bound,
        pass: stats.mean <= bound + 3.0 * stats.se,
    }
}

/// Compares the aggregated event counts against their closed-form bounds.
///
/// Each bound is on an expectation, so a check passes when the empirical
/// mean stays below the bound plus three standard errors. Only meaningful
/// for the sparse policy with the anytime threshold; anything else is
/// rejected with [`HarnessError::WrongPolicy`].
// Arm indices are the subject of each check; looping over them directly
// reads better than clippy's enumerate rewrite.
#[allow(clippy::needless_range_loop)]
pub fn lemma_diagnostics(
    aggregate: &AggregateResult,
    instance: &SparseBanditInstance,
    horizon: u64,
) -> Result<Vec<LemmaCheck>, HarnessError> {
    match aggregate.policy {
        PolicyChoice::SparseUcb(pc) if pc.variant == ForceLogVariant::Anytime => {}
        _ => return Err(HarnessError::WrongPolicy),
    }
    let d = instance.d();
    let s = instance.s();
    let gaps = instance.gaps().as_slice();
    let mut checks = Vec::new();

    let rr_bound = round_robin_pull_bound(instance);
    for arm in 0..d {
        checks.push(check(
            "round_robin_pulls",
            Some(arm),
            aggregate.events[arm].round_robin,
            rr_bound,
        ));
    }
    for arm in 0..s {
        checks.push(check(
            "force_log_pulls",
            Some(arm),
            aggregate.events[arm].force_log,
            force_log_pull_bound(instance.mean(arm), horizon),
        ));
    }
    for arm in 1..s {
        if gaps[arm] > 0.0 {
            checks.push(check(
                "ucb_pulls_best_sampled",
                Some(arm),
                aggregate.events[arm].ucb_best_sampled,
                ucb_tracked_pull_bound(gaps[arm], horizon),
            ));
        }
    }
    checks.push(check(
        "regret_best_missing",
        None,
        aggregate.best_missing_weighted,
        best_missing_regret_bound(instance),
    ));
    for arm in s..d {
        checks.push(check(
            "bad_arm_active_pulls",
            Some(arm),
            aggregate.events[arm].active_bad,
            bad_arm_active_bound(),
        ));
    }
    checks.push(check(
        "total_regret",
        None,
        aggregate.final_regret,
        total_regret_bound(instance, horizon),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(means: &[f64], s: usize) -> SparseBanditInstance {
        SparseBanditInstance::new(means.to_vec(), s).unwrap()
    }

    fn preset(d: usize, s: usize, delta: f64) -> SparseBanditInstance {
        let mut means = vec![0.9];
        means.extend(std::iter::repeat_n(0.9 - delta, s - 1));
        means.extend(std::iter::repeat_n(0.0, d - s));
        instance(&means, s)
    }

    fn sparse_cfg(
        inst: SparseBanditInstance,
        horizon: u64,
        reps: u32,
        seed: u64,
    ) -> ExperimentConfig {
        let s = inst.s();
        ExperimentConfig::new(
            inst,
            PolicyChoice::SparseUcb(PolicyConfig::anytime(s)),
            horizon,
            reps,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn checkpoint_grid_is_strictly_increasing_and_ends_at_horizon() {
        for horizon in [1u64, 2, 10, 10_000] {
            let cps = geometric_checkpoints(horizon);
            assert_eq!(*cps.last().unwrap(), horizon);
            for w in cps.windows(2) {
                assert!(w[0] < w[1]);
            }
            assert!(cps[0] >= 1);
        }
    }

    #[test]
    fn replications_are_deterministic() {
        let cfg = sparse_cfg(instance(&[0.9, 0.4, 0.0], 2), 500, 1, 42);
        let a = run_replication(&cfg, 0).unwrap();
        let b = run_replication(&cfg, 0).unwrap();
        assert_eq!(a, b);
        let c = run_replication(&cfg, 1).unwrap();
        assert_ne!(a.final_counts, c.final_counts);
    }

    #[test]
    fn single_arm_has_zero_regret() {
        let cfg = sparse_cfg(instance(&[0.7], 1), 200, 2, 9);
        let agg = run_experiment(&cfg).unwrap();
        assert_eq!(agg.final_regret.mean, 0.0);
        let rep = run_replication(&cfg, 0).unwrap();
        assert_eq!(rep.final_counts, vec![200]);
    }

    #[test]
    fn event_decomposition_is_conserved() {
        let cfg = sparse_cfg(preset(6, 3, 0.3), 2_000, 3, 7);
        for r in 0..3 {
            let rep = run_replication(&cfg, r).unwrap();
            let total: u64 = rep.final_counts.iter().sum();
            assert_eq!(total, 2_000);
            for (arm, ev) in rep.event_counts.iter().enumerate() {
                assert_eq!(ev.total(), rep.final_counts[arm], "arm {arm}");
            }
        }
    }

    #[test]
    fn doubling_replications_keeps_the_prefix() {
        let small = sparse_cfg(instance(&[0.9, 0.4, 0.0], 2), 300, 2, 11);
        let big = sparse_cfg(instance(&[0.9, 0.4, 0.0], 2), 300, 4, 11);
        for r in 0..2 {
            assert_eq!(
                run_replication(&small, r).unwrap(),
                run_replication(&big, r).unwrap()
            );
        }
    }

    #[test]
    fn single_replication_flags_undefined_stderr() {
        let cfg = sparse_cfg(instance(&[0.9, 0.0], 1), 100, 1, 5);
        let agg = run_experiment(&cfg).unwrap();
        assert!(!agg.stderr_defined);
        assert!(agg.stderr_regret.iter().all(|&se| se == 0.0));
    }

    #[test]
    fn aggregation_is_permutation_invariant() {
        let cfg = sparse_cfg(preset(5, 2, 0.4), 800, 6, 3);
        let results: Vec<_> = (0..6).map(|r| run_replication(&cfg, r).unwrap()).collect();
        let base = aggregate_replications(&cfg, &results).unwrap();
        let mut shuffled = results.clone();
        shuffled.reverse();
        shuffled.swap(1, 3);
        let again = aggregate_replications(&cfg, &shuffled).unwrap();
        assert!((base.final_regret.mean - again.final_regret.mean).abs() < 1e-9);
        assert!((base.final_regret.se - again.final_regret.se).abs() < 1e-9);
        for (a, b) in base.mean_regret.iter().zip(&again.mean_regret) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn independent_reruns_agree_statistically() {
        let inst = instance(&[0.9, 0.4, 0.0], 2);
        let mk = |seed| {
            ExperimentConfig::new(inst.clone(), PolicyChoice::Ucb, 10_000, 40, seed).unwrap()
        };
        let a = run_experiment(&mk(100)).unwrap();
        let b = run_experiment(&mk(200)).unwrap();
        let diff = (a.final_regret.mean - b.final_regret.mean).abs();
        let combined = (a.final_regret.se.powi(2) + b.final_regret.se.powi(2)).sqrt();
        assert!(diff <= 3.0 * combined, "diff {diff} combined se {combined}");
    }

    #[test]
    fn diagnostics_reject_the_wrong_policy() {
        let inst = instance(&[0.9, 0.0], 1);
        let cfg = ExperimentConfig::new(inst.clone(), PolicyChoice::Ucb, 100, 2, 1).unwrap();
        let agg = run_experiment(&cfg).unwrap();
        assert_eq!(
            lemma_diagnostics(&agg, &inst, 100).unwrap_err(),
            HarnessError::WrongPolicy
        );

        let cfg = ExperimentConfig::new(
            inst.clone(),
            PolicyChoice::SparseUcb(PolicyConfig::horizon_aware(1, 100)),
            100,
            2,
            1,
        )
        .unwrap();
        let agg = run_experiment(&cfg).unwrap();
        assert_eq!(
            lemma_diagnostics(&agg, &inst, 100).unwrap_err(),
            HarnessError::WrongPolicy
        );
    }

    #[test]
    fn bound_arithmetic_spot_checks() {
        // (16 ln(1e4) + 8) / 0.4^2
        let b = force_log_pull_bound(0.4, 10_000);
        let expect = (16.0 * (10_000f64).ln() + 8.0) / 0.16;
        assert!((b - expect).abs() < 1e-9);
        assert!((971.0..972.0).contains(&expect));
        assert!((bad_arm_active_bound() - 1.6449340668482264).abs() < 1e-12);

        let i = preset(15, 7, 0.25);
        let cap = log_regret_coefficient(&i);
        let expect = 16.0 * 6.0 * (1.0 / 0.25 + 0.25 / (0.65 * 0.65));
        assert!((cap - expect).abs() < 1e-9);
        assert!(total_regret_bound(&i, 10_000) > cap * (10_000f64).ln());
    }

    #[test]
    fn small_run_passes_all_diagnostics() {
        let inst = preset(6, 3, 0.3);
        let cfg = sparse_cfg(inst.clone(), 3_000, 20, 77);
        let agg = run_experiment(&cfg).unwrap();
        let checks = lemma_diagnostics(&agg, &inst, 3_000).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(
                c.pass,
                "{} arm {:?}: {} vs {} (+3 * {})",
                c.name, c.arm, c.empirical_mean, c.bound, c.stderr
            );
        }
    }

    #[test]
    fn diagnostics_pass_at_short_horizon_on_the_benchmark_instance() {
        let inst = preset(15, 7, 0.25);
        let cfg = sparse_cfg(inst.clone(), 1_000, 100, 5150);
        let agg = run_experiment(&cfg).unwrap();
        for c in lemma_diagnostics(&agg, &inst, 1_000).unwrap() {
            assert!(
                c.pass,
                "{} arm {:?}: {} vs {} (+3 * {})",
                c.name, c.arm, c.empirical_mean, c.bound, c.stderr
            );
        }
    }

    #[test]
    fn bad_arm_diagnostic_example() {
        let inst = instance(&[0.9, 0.0], 1);
        let cfg = sparse_cfg(inst.clone(), 10_000, 30, 13);
        let agg = run_experiment(&cfg).unwrap();
        let checks = lemma_diagnostics(&agg, &inst, 10_000).unwrap();
        let bad = checks
            .iter()
            .find(|c| c.name == "bad_arm_active_pulls")
            .unwrap();
        assert!((bad.bound - PI * PI / 6.0).abs() < 1e-12);
        assert!(bad.pass, "mean {} vs {}", bad.empirical_mean, bad.bound);
    }

    #[test]
    fn ucb_phase_dominates_on_strongly_sparse_instances() {
        let cfg = sparse_cfg(preset(15, 7, 0.1), 100_000, 3, 21);
        let agg = run_experiment(&cfg).unwrap();
        assert!(
            agg.phase_fractions.ucb > 0.95,
            "ucb fraction {}",
            agg.phase_fractions.ucb
        );
    }

    #[test]
    fn config_validation_catches_mismatches() {
        let inst = instance(&[0.9, 0.4, 0.0], 2);
        assert!(matches!(
            ExperimentConfig::new(
                inst.clone(),
                PolicyChoice::SparseUcb(PolicyConfig::anytime(3)),
                100,
                1,
                0
            ),
            Err(HarnessError::BadConfig(_))
        ));
        assert!(matches!(
            ExperimentConfig::with_checkpoints(
                inst.clone(),
                PolicyChoice::Ucb,
                100,
                1,
                0,
                vec![5, 5]
            ),
            Err(HarnessError::BadConfig(_))
        ));
        assert!(matches!(
            ExperimentConfig::with_checkpoints(inst, PolicyChoice::Ucb, 100, 1, 0, vec![101]),
            Err(HarnessError::BadConfig(_))
        ));
    }
}
