//! CSV emission. All files are UTF-8 with LF line endings; floats use
//! Rust's shortest round-trippable decimal form.

use crate::CliError;
use sparse_bandits::harness::LemmaCheck;
use sparse_bandits::{AggregateResult, SparseBanditInstance};
use std::fmt::Write as _;
use std::path::Path;

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

/// `regret.csv`: one row per checkpoint per policy.
pub fn write_regret_csv(dir: &Path, runs: &[AggregateResult]) -> Result<(), CliError> {
    let mut out = String::from("t,policy,mean_regret,stderr,replications\n");
    for agg in runs {
        let label = agg.policy.label();
        for (i, &t) in agg.checkpoints.iter().enumerate() {
            writeln!(
                out,
                "{t},{label},{},{},{}",
                fmt_f64(agg.mean_regret[i]),
                fmt_f64(agg.stderr_regret[i]),
                agg.replications
            )
            .unwrap();
        }
    }
    write_file(dir, "regret.csv", &out)
}

/// `events.csv`: per-arm mean event counts of the sparse policy. Good arms
/// report the four good-arm classes, bad arms the sweep and active classes.
pub fn write_events_csv(
    dir: &Path,
    instance: &SparseBanditInstance,
    sparse: Option<&AggregateResult>,
) -> Result<(), CliError> {
    let mut out = String::from("arm,orig_arm,class,mean_count,stderr\n");
    if let Some(agg) = sparse {
        for (arm, ev) in agg.events.iter().enumerate() {
            let classes: &[(&str, _)] = if instance.is_good(arm) {
                &[
                    ("round_robin", ev.round_robin),
                    ("force_log", ev.force_log),
                    ("ucb_best_sampled", ev.ucb_best_sampled),
                    ("ucb_best_missing", ev.ucb_best_missing),
                ]
            } else {
                &[
                    ("round_robin", ev.round_robin),
                    ("active_bad", ev.active_bad),
                ]
            };
            for (class, stats) in classes {
                writeln!(
                    out,
                    "{},{},{class},{},{}",
                    arm + 1,
                    instance.original_index(arm) + 1,
                    fmt_f64(stats.mean),
                    fmt_f64(stats.se)
                )
                .unwrap();
            }
        }
    }
    write_file(dir, "events.csv", &out)
}

/// `lemmas.csv`: the diagnostics report, one row per bound check.
pub fn write_lemmas_csv(dir: &Path, checks: &[LemmaCheck]) -> Result<(), CliError> {
    let mut out = String::from("check,arm,empirical_mean,stderr,bound,pass\n");
    for c in checks {
        let arm = c.arm.map(|a| (a + 1).to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{arm},{},{},{},{}",
            c.name,
            fmt_f64(c.empirical_mean),
            fmt_f64(c.stderr),
            fmt_f64(c.bound),
            c.pass
        )
        .unwrap();
    }
    write_file(dir, "lemmas.csv", &out)
}

/// One row of `bound.csv`.
pub struct BoundRow {
    pub regime: &'static str,
    /// Critical index, 1-based, empty when the bound has none.
    pub k: Option<usize>,
    pub lambda: f64,
    pub value: f64,
    pub classical_value: f64,
    /// Empty when the instance has no bad arms.
    pub irrelevance_threshold: Option<f64>,
    pub lp_value: f64,
}

pub fn write_bound_csv(dir: &Path, rows: &[BoundRow]) -> Result<(), CliError> {
    let mut out = String::from(
        "regime,k,lambda,value,classical_value,irrelevance_threshold,lp_value,lp_gap\n",
    );
    for r in rows {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        let thr = r.irrelevance_threshold.map(fmt_f64).unwrap_or_default();
        writeln!(
            out,
            "{},{k},{},{},{},{thr},{},{}",
            r.regime,
            fmt_f64(r.lambda),
            fmt_f64(r.value),
            fmt_f64(r.classical_value),
            fmt_f64(r.lp_value),
            fmt_f64((r.value - r.lp_value).abs())
        )
        .unwrap();
    }
    write_file(dir, "bound.csv", &out)
}
