//! Sparse stochastic multi-armed bandits.
//!
//! Of `d` arms only `s` have a strictly positive mean, and the learner knows
//! `s`. This crate implements the pieces needed to study that problem end to
//! end:
//!
//! * [`instance`] — validated instances, Gaussian (variance 1/4) reward
//!   sampling, pseudo-regret accounting;
//! * [`policies`] — the sparsity-aware three-phase UCB policy and the
//!   classical UCB baseline;
//! * [`lower_bound`] — the asymptotic regret lower bound in closed form, its
//!   `epsilon`-generalization, and the relaxed linear program it solves;
//! * [`simplex`] — the dense two-phase LP solver used as an independent
//!   oracle for the closed form;
//! * [`harness`] — seeded, parallel Monte-Carlo experiments with per-event
//!   regret diagnostics.

pub mod harness;
pub mod instance;
pub mod lower_bound;
pub mod policies;
pub mod simplex;

pub use harness::{
    run_experiment, run_replication, AggregateResult, ExperimentConfig, PolicyChoice,
    ReplicationResult,
};
pub use instance::{Gaps, InstanceError, NoiseModel, RegretLedger, SparseBanditInstance};
pub use lower_bound::{
    build_relaxed_lp, classical_lower_bound, explicit_lower_bound, generalized_lower_bound,
    irrelevance_threshold, lp_lower_bound, sparsity_regime, LowerBoundError, LowerBoundResult,
    Regime,
};
pub use policies::{
    argmax_lowest_index, classify_event, ClassicUcb, Decision, EventClass, ForceLogVariant, Phase,
    PolicyConfig, PolicyError, SparseUcb,
};
pub use simplex::{solve_lp, LpProblem, LpRow, LpSolution, LpStatus, SimplexError};
