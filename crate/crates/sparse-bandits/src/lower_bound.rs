//! Asymptotic regret lower bounds for sparse Gaussian bandit instances.
//!
//! The bound is the optimum of a small linear program over per-arm
//! coefficients `c_i` (the asymptotic pull rates per `ln T`), and comes in
//! three forms:
//!
//! * [`explicit_lower_bound`] — the closed-form optimum, split into a
//!   strong-sparsity regime (the bound no longer depends on the total number
//!   of arms) and a weak regime governed by a critical index `k` and a
//!   multiplier `lambda`;
//! * [`generalized_lower_bound`] — the same construction for the wider
//!   problem class where good arms are only known to sit at least `epsilon`
//!   above the bad ones;
//! * [`build_relaxed_lp`] + [`solve_lp`](crate::simplex::solve_lp) — the
//!   numeric route, used as an independent oracle for the closed form.
//!
//! Everything here requires the bad arms to have mean exactly zero, which is
//! the model the bounds are stated for. Natural logarithms throughout.

use crate::instance::SparseBanditInstance;
use crate::simplex::{solve_lp, LpProblem, LpRow, LpSolution, SimplexError};
use thiserror::Error;

/// Relative tolerance for the closed-form vs LP-oracle cross-check.
pub const ORACLE_REL_TOL: f64 = 1e-9;
/// Absolute slack allowed when checking coefficient feasibility.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LowerBoundError {
    #[error("bad arm {arm} has mean {mean}, the bound requires bad arms to be exactly 0")]
    NonzeroBadArm { arm: usize, mean: f64 },
    #[error("no critical index reproduces the LP optimum: {0}")]
    NoValidK(String),
    #[error("instance has no bad arms (d = s)")]
    DegenerateNoBadArms,
    #[error("epsilon must be a positive finite number, got {0}")]
    InvalidEpsilon(f64),
    #[error("lp solve failed: {0}")]
    Lp(#[from] SimplexError),
}

/// Sparsity regime of an instance.
///
/// `Strong` iff `(d-s)/mu_1 - sum_{i in [s], gap>0} gap_i / mu_i^2 > 0`; in
/// that regime the bound is a sum of per-good-arm maxima and is independent
/// of the number of bad arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Strong,
    Weak,
}

/// The lower bound together with the certificate that produced it.
#[derive(Debug, Clone)]
pub struct LowerBoundResult {
    /// Lower bound on `liminf Reg(T) / ln(T)`.
    pub value: f64,
    pub regime: Regime,
    /// Critical index (0-based, canonical order) of the weak-regime closed
    /// form. `None` when the optimum sits at `lambda = 0`, which covers the
    /// strong regime and weak instances whose constrained arms all satisfy
    /// `mu_i >= gap_i`.
    pub k: Option<usize>,
    /// Bad-arm multiplier in `[0, 1]`; bad arms carry `lambda / (2 mu_1^2)`.
    pub lambda: f64,
    /// Optimal per-arm coefficients, feasible for [`build_relaxed_lp`].
    pub coefficients: Vec<f64>,
    /// Good arms whose squared mean dominates their squared gap; their gap
    /// constraint alone already covers every paired constraint.
    pub s_star: Vec<usize>,
}

fn require_zero_bad_arms(instance: &SparseBanditInstance) -> Result<(), LowerBoundError> {
    for arm in instance.s()..instance.d() {
        let mean = instance.mean(arm);
        if mean != 0.0 {
            return Err(LowerBoundError::NonzeroBadArm { arm, mean });
        }
    }
    Ok(())
}

/// Effective good-arm scale parameters.
///
/// `shift = 0` gives the plain means; `shift = eps - mu_s` gives the
/// generalized form where every good mean is measured against the threshold
/// `mu_s - eps` instead of zero. Adding the shift (rather than substituting
/// `mu_i - mu_s + eps` directly) keeps the `eps = mu_s` case bit-identical
/// to the plain one.
fn effective_means(instance: &SparseBanditInstance, shift: f64) -> Vec<f64> {
    instance.means()[..instance.s()]
        .iter()
        .map(|&m| m + shift)
        .collect()
}

/// Σ over all arms with a positive gap of `1 / (2 gap_i)` — the bound for
/// the problem without any sparsity information.
pub fn classical_lower_bound(instance: &SparseBanditInstance) -> f64 {
    instance
        .gaps()
        .as_slice()
        .iter()
        .filter(|&&g| g > 0.0)
        .map(|&g| 1.0 / (2.0 * g))
        .sum()
}

/// The mean level below which the sparse bound coincides with the classical
/// one: `mu_1 (-1 + sqrt(1 + 4(d-s))) / (2(d-s))`.
pub fn irrelevance_threshold(d: usize, s: usize, mu1: f64) -> Result<f64, LowerBoundError> {
    if d <= s {
        return Err(LowerBoundError::DegenerateNoBadArms);
    }
    let b = (d - s) as f64;
    Ok(mu1 * (-1.0 + (1.0 + 4.0 * b).sqrt()) / (2.0 * b))
}

fn regime_of(instance: &SparseBanditInstance, m: &[f64]) -> Regime {
    let d = instance.d();
    let s = instance.s();
    let mu1 = instance.best_mean();
    let gaps = instance.gaps().as_slice();
    let sum: f64 = (1..s)
        .filter(|&i| gaps[i] > 0.0)
        .map(|i| gaps[i] / (m[i] * m[i]))
        .sum();
    if (d - s) as f64 / mu1 - sum > 0.0 {
        Regime::Strong
    } else {
        Regime::Weak
    }
}

/// Classifies the instance per the sign of
/// `(d-s)/mu_1 - sum_{gap>0} gap_i / mu_i^2`.
pub fn sparsity_regime(instance: &SparseBanditInstance) -> Result<Regime, LowerBoundError> {
    require_zero_bad_arms(instance)?;
    Ok(regime_of(instance, &effective_means(instance, 0.0)))
}

fn build_lp_from(instance: &SparseBanditInstance, m: &[f64]) -> LpProblem {
    let d = instance.d();
    let s = instance.s();
    let mu1 = instance.best_mean();
    let gaps = instance.gaps().as_slice();
    let mut rows = Vec::new();
    // Good arms tied with the best contribute no regret and admit no
    // change-of-measure constraint; they are skipped entirely.
    for i in 1..s {
        if gaps[i] <= 0.0 {
            continue;
        }
        let mut coeffs = vec![0.0; d];
        coeffs[i] = 2.0 * gaps[i] * gaps[i];
        rows.push(LpRow { coeffs, rhs: 1.0 });
        for j in s..d {
            let mut coeffs = vec![0.0; d];
            coeffs[j] = 2.0 * mu1 * mu1;
            coeffs[i] = 2.0 * m[i] * m[i];
            rows.push(LpRow { coeffs, rhs: 1.0 });
        }
    }
    LpProblem {
        objective: gaps.to_vec(),
        rows,
    }
}

/// The relaxed linear program whose optimum is the lower bound: one gap
/// constraint per suboptimal good arm plus one paired constraint per
/// (suboptimal good arm, bad arm) combination.
pub fn build_relaxed_lp(instance: &SparseBanditInstance) -> Result<LpProblem, LowerBoundError> {
    require_zero_bad_arms(instance)?;
    Ok(build_lp_from(instance, &effective_means(instance, 0.0)))
}

/// Solves the relaxed program numerically — the oracle route.
pub fn lp_lower_bound(instance: &SparseBanditInstance) -> Result<LpSolution, LowerBoundError> {
    Ok(solve_lp(&build_relaxed_lp(instance)?)?)
}

/// The oracle route for the generalized (`epsilon`) problem class.
pub fn generalized_lp_lower_bound(
    instance: &SparseBanditInstance,
    epsilon: f64,
) -> Result<LpSolution, LowerBoundError> {
    require_zero_bad_arms(instance)?;
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(LowerBoundError::InvalidEpsilon(epsilon));
    }
    let shift = epsilon - instance.mean(instance.s() - 1);
    Ok(solve_lp(&build_lp_from(
        instance,
        &effective_means(instance, shift),
    ))?)
}

/// Shared closed-form optimizer over effective good-arm scales `m`.
///
/// The program reduces to a one-dimensional piecewise-linear minimization in
/// the bad-arm multiplier `lambda`: every suboptimal good arm contributes
/// `max(1/(2 gap_i^2), (1-lambda)/(2 m_i^2))` and the bad arms contribute
/// `(d-s) lambda / (2 mu_1)`. The slope changes sign at one of the kinks
/// `1 - m_i^2/gap_i^2`, which are nondecreasing in `i`; the critical index
/// is the last one where the slope is still negative.
fn closed_form(
    instance: &SparseBanditInstance,
    m: &[f64],
) -> Result<LowerBoundResult, LowerBoundError> {
    let d = instance.d();
    let s = instance.s();
    let mu1 = instance.best_mean();
    let gaps = instance.gaps().as_slice();

    let regime = regime_of(instance, m);
    let positive_gap: Vec<usize> = (1..s).filter(|&i| gaps[i] > 0.0).collect();
    let s_star: Vec<usize> = (0..s)
        .filter(|&i| gaps[i] == 0.0 || m[i] >= gaps[i])
        .collect();
    let candidates: Vec<usize> = positive_gap
        .iter()
        .copied()
        .filter(|&i| m[i] < gaps[i])
        .collect();
    let kink = |i: usize| 1.0 - (m[i] / gaps[i]) * (m[i] / gaps[i]);

    // slope(k) * 2 = (d-s)/mu_1 - sum_{candidates >= k} gap_i / m_i^2. The
    // tail sum shrinks as k walks right, so the slope is negative on a
    // prefix of the candidate chain; the critical index is the last
    // candidate inside that prefix.
    let mut critical: Option<usize> = None;
    {
        let mut tail = 0.0;
        for &i in candidates.iter().rev() {
            tail += gaps[i] / (m[i] * m[i]);
            if (d - s) as f64 / mu1 - tail < 0.0 {
                critical = Some(i);
                break;
            }
        }
    }

    let mut coefficients = vec![0.0; d];
    let (value, lambda, k) = match critical {
        None => {
            // The multiplier stays at its lowest allowed value, zero.
            let mut value = 0.0;
            for &i in &positive_gap {
                let c = (1.0 / (2.0 * gaps[i] * gaps[i])).max(1.0 / (2.0 * m[i] * m[i]));
                coefficients[i] = c;
                value += (1.0 / (2.0 * gaps[i])).max(gaps[i] / (2.0 * m[i] * m[i]));
            }
            (value, 0.0, None)
        }
        Some(mut k) => {
            // Equal kinks collapse to one: report the smallest index.
            loop {
                let prev = candidates.iter().copied().rfind(|&i| i < k);
                match prev {
                    Some(p) if kink(p) == kink(k) => k = p,
                    _ => break,
                }
            }
            let lambda = kink(k);
            let ratio_k = (m[k] / gaps[k]) * (m[k] / gaps[k]); // = 1 - lambda
            for &i in &positive_gap {
                coefficients[i] = if i < k {
                    1.0 / (2.0 * gaps[i] * gaps[i])
                } else {
                    (1.0 / (2.0 * gaps[i] * gaps[i])).max(ratio_k / (2.0 * m[i] * m[i]))
                };
            }
            for c in coefficients[s..].iter_mut() {
                *c = lambda / (2.0 * mu1 * mu1);
            }
            let mut value: f64 = positive_gap
                .iter()
                .filter(|&&i| i <= k)
                .map(|&i| 1.0 / (2.0 * gaps[i]))
                .sum();
            value += positive_gap
                .iter()
                .filter(|&&i| i > k)
                .map(|&i| (m[k] * m[k]) / (m[i] * m[i]) * gaps[i] / (2.0 * gaps[k] * gaps[k]))
                .sum::<f64>();
            value += (d - s) as f64 / (2.0 * mu1) * (1.0 - (m[k] * m[k]) / (gaps[k] * gaps[k]));
            (value, lambda, Some(k))
        }
    };

    // The certificate must be feasible and, in the weak regime, must
    // reproduce the numerically solved optimum.
    let lp = build_lp_from(instance, m);
    let dot: f64 = coefficients.iter().zip(gaps).map(|(&c, &g)| c * g).sum();
    if (dot - value).abs() > 1e-9 * (1.0 + value.abs()) {
        return Err(LowerBoundError::NoValidK(format!(
            "closed-form value {value} disagrees with its own certificate {dot}"
        )));
    }
    let slack = lp.min_slack(&coefficients);
    if slack < -FEASIBILITY_SLACK {
        return Err(LowerBoundError::NoValidK(format!(
            "certificate violates a constraint by {slack:e} (k={k:?}, lambda={lambda})"
        )));
    }
    if regime == Regime::Weak {
        let oracle = solve_lp(&lp)?;
        let rel = (value - oracle.value).abs() / (1.0 + oracle.value.abs());
        if rel > ORACLE_REL_TOL {
            return Err(LowerBoundError::NoValidK(format!(
                "closed form {value} vs lp optimum {} (relative gap {rel:e}, k={k:?})",
                oracle.value
            )));
        }
    }

    Ok(LowerBoundResult {
        value,
        regime,
        k,
        lambda,
        coefficients,
        s_star,
    })
}

/// Closed-form evaluation of the lower bound for an instance with zero-mean
/// bad arms.
pub fn explicit_lower_bound(
    instance: &SparseBanditInstance,
) -> Result<LowerBoundResult, LowerBoundError> {
    require_zero_bad_arms(instance)?;
    closed_form(instance, &effective_means(instance, 0.0))
}

/// Lower bound for the wider class where good arms are only known to exceed
/// `mu_s - epsilon`: every good-arm scale `mu_i` is replaced by
/// `mu_i - mu_s + epsilon`. With `epsilon = mu_s` this reproduces
/// [`explicit_lower_bound`] exactly.
pub fn generalized_lower_bound(
    instance: &SparseBanditInstance,
    epsilon: f64,
) -> Result<LowerBoundResult, LowerBoundError> {
    require_zero_bad_arms(instance)?;
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(LowerBoundError::InvalidEpsilon(epsilon));
    }
    let shift = epsilon - instance.mean(instance.s() - 1);
    closed_form(instance, &effective_means(instance, shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(means: &[f64], s: usize) -> SparseBanditInstance {
        SparseBanditInstance::new(means.to_vec(), s).unwrap()
    }

    /// Equal suboptimal good means at `mu1 - delta`, bad arms at zero.
    fn preset(d: usize, s: usize, mu1: f64, delta: f64) -> SparseBanditInstance {
        let mut means = vec![mu1];
        means.extend(std::iter::repeat_n(mu1 - delta, s - 1));
        means.extend(std::iter::repeat_n(0.0, d - s));
        inst(&means, s)
    }

    fn random_instance(rng: &mut ChaCha8Rng, max_d: usize) -> SparseBanditInstance {
        let d = rng.random_range(1..=max_d);
        let s = rng.random_range(1..=d);
        let mu1: f64 = rng.random_range(0.2..1.0);
        let mut means = vec![mu1];
        while means.len() < s {
            let v = rng.random_range(0.01..mu1 * 0.999);
            if means.iter().all(|&m| m != v) {
                means.push(v);
            }
        }
        means.extend(std::iter::repeat_n(0.0, d - s));
        inst(&means, s)
    }

    #[test]
    fn regime_examples() {
        assert_eq!(
            sparsity_regime(&inst(&[0.9, 0.0], 1)).unwrap(),
            Regime::Strong
        );
        assert_eq!(
            sparsity_regime(&preset(15, 7, 0.9, 0.5)).unwrap(),
            Regime::Weak
        );
        assert_eq!(
            sparsity_regime(&preset(15, 7, 0.9, 0.1)).unwrap(),
            Regime::Strong
        );
    }

    #[test]
    fn rejects_negative_bad_arms() {
        let bad = inst(&[0.9, -0.1], 1);
        assert_eq!(
            sparsity_regime(&bad).unwrap_err(),
            LowerBoundError::NonzeroBadArm { arm: 1, mean: -0.1 }
        );
        assert!(explicit_lower_bound(&bad).is_err());
        assert!(build_relaxed_lp(&bad).is_err());
    }

    #[test]
    fn no_suboptimal_good_arm_gives_zero() {
        let r = explicit_lower_bound(&inst(&[0.9, 0.0], 1)).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.regime, Regime::Strong);
        assert_eq!(r.lambda, 0.0);
        assert_eq!(r.k, None);
    }

    #[test]
    fn strong_example_hand_checked() {
        // max(1/(2*0.1), 0.1/(2*0.64)) = 5.0
        let r = explicit_lower_bound(&inst(&[0.9, 0.8, 0.0], 2)).unwrap();
        assert_eq!(r.regime, Regime::Strong);
        assert!((r.value - 5.0).abs() < 1e-12);
        let lp = lp_lower_bound(&inst(&[0.9, 0.8, 0.0], 2)).unwrap();
        assert!((lp.value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn interior_critical_index() {
        // Slope changes sign strictly inside the candidate chain.
        let i = inst(&[0.9, 0.42, 0.40, 0.0, 0.0, 0.0], 3);
        let r = explicit_lower_bound(&i).unwrap();
        assert_eq!(r.regime, Regime::Weak);
        assert_eq!(r.k, Some(1));
        assert!((r.lambda - (1.0 - (0.42f64 / 0.48).powi(2))).abs() < 1e-12);
        let lp = lp_lower_bound(&i).unwrap();
        assert!((r.value - lp.value).abs() <= ORACLE_REL_TOL * (1.0 + lp.value));
    }

    #[test]
    fn weak_regime_with_lambda_zero() {
        // The only suboptimal good arm has mu >= gap, so no candidate kink
        // exists and the optimum sits at lambda = 0 despite the weak label.
        let i = inst(&[1.0, 0.55, 0.0], 2);
        let r = explicit_lower_bound(&i).unwrap();
        assert_eq!(r.regime, Regime::Weak);
        assert_eq!(r.k, None);
        assert_eq!(r.lambda, 0.0);
        assert!((r.value - 1.0 / 0.9).abs() < 1e-12);
    }

    #[test]
    fn matches_lp_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..300 {
            let i = random_instance(&mut rng, 8);
            let r = explicit_lower_bound(&i).unwrap();
            let lp = lp_lower_bound(&i).unwrap();
            let rel = (r.value - lp.value).abs() / (1.0 + lp.value.abs());
            assert!(rel <= ORACLE_REL_TOL, "rel {rel} on {:?}", i.means());
            // And the certificate is feasible.
            let prob = build_relaxed_lp(&i).unwrap();
            assert!(prob.min_slack(&r.coefficients) >= -FEASIBILITY_SLACK);
            // Dominance against the classical bound.
            assert!(r.value <= classical_lower_bound(&i) + 1e-12);
        }
    }

    #[test]
    fn matches_lp_oracle_on_wider_instances() {
        // Bigger programs: d up to 20 gives a few hundred rows.
        let mut rng = ChaCha8Rng::seed_from_u64(31_337);
        for _ in 0..60 {
            let i = random_instance(&mut rng, 20);
            let r = explicit_lower_bound(&i).unwrap();
            let lp = lp_lower_bound(&i).unwrap();
            let rel = (r.value - lp.value).abs() / (1.0 + lp.value.abs());
            assert!(rel <= ORACLE_REL_TOL, "rel {rel} on d={}", i.d());
        }
    }

    #[test]
    fn weak_value_rearrangement_identity() {
        // In the weak regime with critical index k the value equals
        //   classical - (m_k^2/gap_k^2) ((d-s)/(2 mu1) - sum_{i>k} gap_i/(2 mu_i^2))
        //             - sum_{i>k, good} 1/(2 gap_i).
        for i in [
            preset(15, 7, 0.9, 0.5),
            preset(15, 7, 0.9, 0.7),
            inst(&[0.9, 0.42, 0.40, 0.0, 0.0, 0.0], 3),
        ] {
            let r = explicit_lower_bound(&i).unwrap();
            let Some(k) = r.k else {
                panic!("expected weak instance with k")
            };
            let gaps = i.gaps().as_slice();
            let mu = i.means();
            let ratio = (mu[k] / gaps[k]).powi(2);
            let tail_mu: f64 = (k + 1..i.s())
                .map(|j| gaps[j] / (2.0 * mu[j] * mu[j]))
                .sum();
            let tail_gap: f64 = (k + 1..i.s()).map(|j| 1.0 / (2.0 * gaps[j])).sum();
            let rhs = classical_lower_bound(&i)
                - ratio * ((i.d() - i.s()) as f64 / (2.0 * i.best_mean()) - tail_mu)
                - tail_gap;
            assert!(
                (r.value - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()),
                "value {} identity {rhs}",
                r.value
            );
        }
    }

    #[test]
    fn critical_index_at_last_good_arm() {
        // Distinct gaps chosen so the slope stays negative through the whole
        // chain: the critical index lands on the worst good arm and the
        // value collapses to classical - (d-s)/(2 mu1) * mu_s^2/gap_s^2.
        let i = inst(&[0.9, 0.3, 0.25, 0.2, 0.0, 0.0], 4);
        let r = explicit_lower_bound(&i).unwrap();
        assert_eq!(r.k, Some(3));
        let mu_s = 0.2f64;
        let gap_s = 0.7f64;
        let expect =
            classical_lower_bound(&i) - (2.0 / (2.0 * 0.9)) * (mu_s * mu_s) / (gap_s * gap_s);
        assert!((r.value - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
    }

    #[test]
    fn vanishing_sparsity_approaches_classical() {
        let i = preset(15, 7, 0.9, 0.9 - 1e-6);
        let r = explicit_lower_bound(&i).unwrap();
        let classical = classical_lower_bound(&i);
        assert!((r.value - classical).abs() / classical < 1e-9);
    }

    #[test]
    fn classical_examples() {
        let i = inst(&[0.9, 0.4, 0.0], 2);
        assert!((classical_lower_bound(&i) - (1.0 + 1.0 / 1.8)).abs() < 1e-12);
        assert_eq!(classical_lower_bound(&inst(&[0.5, 0.5], 2)), 0.0);
        assert_eq!(classical_lower_bound(&inst(&[0.5], 1)), 0.0);
    }

    #[test]
    fn irrelevance_threshold_examples() {
        assert!((irrelevance_threshold(3, 1, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((irrelevance_threshold(7, 1, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            irrelevance_threshold(4, 4, 0.9).unwrap_err(),
            LowerBoundError::DegenerateNoBadArms
        );
        // Asymptotically mu_1 / sqrt(d - s).
        let t = irrelevance_threshold(10_001, 1, 1.0).unwrap();
        let approx = 1.0 / (10_000f64).sqrt();
        assert!((t / approx - 1.0).abs() < 0.02);
    }

    #[test]
    fn lp_row_counts() {
        let p = build_relaxed_lp(&inst(&[0.9, 0.4, 0.0], 2)).unwrap();
        assert_eq!(p.num_rows(), 2);
        let p = build_relaxed_lp(&inst(&[0.9, 0.4, 0.0, 0.0], 2)).unwrap();
        assert_eq!(p.num_rows(), 3);
        // A good arm tied with the best is excluded from the constraints.
        let p = build_relaxed_lp(&inst(&[0.9, 0.9, 0.0], 2)).unwrap();
        assert_eq!(p.num_rows(), 0);
    }

    #[test]
    fn generalized_with_eps_mu_s_is_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let i = random_instance(&mut rng, 8);
            let eps = i.mean(i.s() - 1);
            let plain = explicit_lower_bound(&i).unwrap();
            let gen = generalized_lower_bound(&i, eps).unwrap();
            assert_eq!(plain.value, gen.value);
            assert_eq!(plain.k, gen.k);
            assert_eq!(plain.lambda, gen.lambda);
            assert_eq!(plain.coefficients, gen.coefficients);
        }
    }

    #[test]
    fn generalized_value_is_nonincreasing_in_epsilon() {
        let i = preset(15, 7, 0.9, 0.25);
        let mu_s = 0.65;
        let mut last = f64::INFINITY;
        let mut eps = 0.1;
        while eps <= mu_s + 1e-12 {
            let v = generalized_lower_bound(&i, eps).unwrap().value;
            assert!(v <= last + 1e-12, "eps {eps}: {v} > {last}");
            last = v;
            eps += 0.05;
        }
    }

    #[test]
    fn tiny_epsilon_forces_weak_classification() {
        let i = preset(15, 7, 0.9, 0.25);
        let r = generalized_lower_bound(&i, 1e-9).unwrap();
        assert_eq!(r.regime, Regime::Weak);
        assert_eq!(
            generalized_lower_bound(&i, 0.0).unwrap_err(),
            LowerBoundError::InvalidEpsilon(0.0)
        );
        assert_eq!(
            generalized_lower_bound(&i, -1.0).unwrap_err(),
            LowerBoundError::InvalidEpsilon(-1.0)
        );
    }

    #[test]
    fn generalized_matches_its_lp_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..100 {
            let i = random_instance(&mut rng, 7);
            let eps = rng.random_range(0.01..1.0);
            let r = generalized_lower_bound(&i, eps).unwrap();
            let lp = generalized_lp_lower_bound(&i, eps).unwrap();
            let rel = (r.value - lp.value).abs() / (1.0 + lp.value.abs());
            assert!(rel <= ORACLE_REL_TOL, "eps {eps} rel {rel}");
        }
    }

    #[test]
    fn value_is_continuous_across_the_regime_boundary() {
        // Sweep mu_s for d=15, s=7, mu1=0.9; the regime flips near 0.512 and
        // the value must not jump between adjacent grid points. The sweep
        // stops at 0.75 to stay clear of the gap -> 0 blow-up of 1/(2 gap),
        // where even a continuous value moves fast per grid step.
        let step = 2e-4;
        let mut prev: Option<(Regime, f64)> = None;
        let mut flips = 0;
        let mut mu = 0.05;
        while mu < 0.75 {
            let i = preset(15, 7, 0.9, 0.9 - mu);
            let r = explicit_lower_bound(&i).unwrap();
            if let Some((pr, pv)) = prev {
                assert!(
                    (r.value - pv).abs() < 0.05,
                    "jump at mu_s={mu}: {pv} -> {}",
                    r.value
                );
                if pr != r.regime {
                    flips += 1;
                    assert!((0.50..0.53).contains(&mu), "flip at unexpected mu_s {mu}");
                }
            }
            prev = Some((r.regime, r.value));
            mu += step;
        }
        assert_eq!(flips, 1);
    }
}
