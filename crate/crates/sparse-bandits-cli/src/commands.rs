//! The `simulate` and `lower-bound` subcommands.

use crate::config::{RunSpec, PRESETS};
use crate::output::{
    fmt_f64, write_bound_csv, write_events_csv, write_lemmas_csv, write_regret_csv, BoundRow,
};
use crate::CliError;
use sparse_bandits::harness::lemma_diagnostics;
use sparse_bandits::lower_bound::{generalized_lower_bound, generalized_lp_lower_bound};
use sparse_bandits::{
    classical_lower_bound, explicit_lower_bound, irrelevance_threshold, lp_lower_bound,
    run_experiment, ForceLogVariant, LowerBoundResult, PolicyChoice, Regime, SparseBanditInstance,
};

/// Runs the selected policies, writes `regret.csv`, `events.csv` and
/// `lemmas.csv` into the output directory, and prints a short summary.
pub fn cmd_simulate(spec: &RunSpec) -> Result<(), CliError> {
    let instance = spec.resolve_instance()?;
    let configs = spec.experiment_configs()?;
    let mut runs = Vec::new();
    for cfg in &configs {
        let agg = run_experiment(cfg)?;
        println!(
            "{}: final pseudo-regret {:.3} +- {:.3} over {} replications (T={})",
            agg.policy.label(),
            agg.final_regret.mean,
            agg.final_regret.se,
            agg.replications,
            spec.horizon,
        );
        runs.push(agg);
    }

    write_regret_csv(&spec.out, &runs)?;

    let sparse = runs
        .iter()
        .find(|a| matches!(a.policy, PolicyChoice::SparseUcb(_)));
    write_events_csv(&spec.out, &instance, sparse)?;

    // Diagnostics are only defined for the anytime sparse policy.
    let checks = match sparse {
        Some(agg)
            if matches!(
                agg.policy,
                PolicyChoice::SparseUcb(pc) if pc.variant == ForceLogVariant::Anytime
            ) =>
        {
            lemma_diagnostics(agg, &instance, spec.horizon)?
        }
        _ => Vec::new(),
    };
    if !checks.is_empty() {
        let failed = checks.iter().filter(|c| !c.pass).count();
        println!(
            "bound diagnostics: {}/{} checks passed",
            checks.len() - failed,
            checks.len()
        );
    }
    write_lemmas_csv(&spec.out, &checks)?;
    println!(
        "wrote regret.csv, events.csv, lemmas.csv to {}",
        spec.out.display()
    );
    Ok(())
}

fn bound_row(
    instance: &SparseBanditInstance,
    result: &LowerBoundResult,
    lp_value: f64,
) -> BoundRow {
    BoundRow {
        regime: match result.regime {
            Regime::Strong => "strong",
            Regime::Weak => "weak",
        },
        k: result.k.map(|k| k + 1),
        lambda: result.lambda,
        value: result.value,
        classical_value: classical_lower_bound(instance),
        irrelevance_threshold: irrelevance_threshold(
            instance.d(),
            instance.s(),
            instance.best_mean(),
        )
        .ok(),
        lp_value,
    }
}

/// Evaluates the lower bound (plus the generalized form when an epsilon or
/// a grid is given), writes `bound.csv`, and prints the table.
pub fn cmd_lower_bound(spec: &RunSpec) -> Result<(), CliError> {
    let instance = spec.resolve_instance()?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();

    let mut epsilons: Vec<f64> = Vec::new();
    if let Some(eps) = spec.epsilon {
        epsilons.push(eps);
    }
    if let Some(grid) = &spec.epsilon_grid {
        epsilons.extend(grid.values());
    }

    if epsilons.is_empty() {
        let result = explicit_lower_bound(&instance)?;
        let lp = lp_lower_bound(&instance)?;
        rows.push(bound_row(&instance, &result, lp.value));
        labels.push("exact sparsity".to_string());
    } else {
        for &eps in &epsilons {
            let result = generalized_lower_bound(&instance, eps)?;
            let lp = generalized_lp_lower_bound(&instance, eps)?;
            rows.push(bound_row(&instance, &result, lp.value));
            labels.push(format!("epsilon = {}", fmt_f64(eps)));
        }
    }

    for (row, label) in rows.iter().zip(&labels) {
        let k = row
            .k
            .map(|k| format!("k=arm {k}"))
            .unwrap_or_else(|| "k=-".into());
        let thr = row
            .irrelevance_threshold
            .map(|t| format!("{t:.6}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{label}: regime={} {k} lambda={:.6} value={:.6} classical={:.6} \
             irrelevance-threshold={thr} lp={:.6} gap={:.2e}",
            row.regime,
            row.lambda,
            row.value,
            row.classical_value,
            row.lp_value,
            (row.value - row.lp_value).abs(),
        );
    }

    write_bound_csv(&spec.out, &rows)?;
    println!("wrote bound.csv to {}", spec.out.display());
    Ok(())
}

/// `presets list`: one line per preset.
pub fn presets_table() -> String {
    let mut out = String::new();
    for p in PRESETS {
        out.push_str(&format!(
            "{:<11} d={} s={:<2} mu1={} delta-s={}\n",
            p.name, p.d, p.s, p.mu1, p.delta_s
        ));
    }
    out
}
