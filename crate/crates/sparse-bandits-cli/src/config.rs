//! Run specification: defaults, config-file keys and command-line flags.
//!
//! A run is described by a flat set of `key = value` pairs. The same keys
//! are accepted from a config file (one pair per line, `#` comments) and as
//! `--key value` flags; flags override the file. Instance parameters come
//! either from a named preset, from `(d, s, mu1, delta-s)`, or from an
//! explicit mean vector — these three forms are mutually exclusive.

use crate::CliError;
use sparse_bandits::{
    ExperimentConfig, ForceLogVariant, PolicyChoice, PolicyConfig, SparseBanditInstance,
};
use std::path::{Path, PathBuf};

/// Which policies a `simulate` run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicySelection {
    Ucb,
    Sparse,
    Both,
}

/// Threshold family for the sparse policy's force-log trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceLogChoice {
    Anytime,
    HorizonAware,
}

/// An epsilon grid `start:step:end` for lower-bound sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonGrid {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl EpsilonGrid {
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut eps = self.start;
        while eps <= self.end + 1e-12 {
            out.push(eps);
            eps += self.step;
        }
        out
    }
}

/// A named experiment preset: `mu_1` plus `s - 1` good arms at
/// `mu_1 - delta_s` and `d - s` zero arms.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub d: usize,
    pub s: usize,
    pub mu1: f64,
    pub delta_s: f64,
}

/// The six benchmark panels: a gap sweep at fixed sparsity and a sparsity
/// sweep at fixed gap.
pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2-left",
        d: 15,
        s: 7,
        mu1: 0.9,
        delta_s: 0.7,
    },
    Preset {
        name: "fig2-mid",
        d: 15,
        s: 7,
        mu1: 0.9,
        delta_s: 0.25,
    },
    Preset {
        name: "fig2-right",
        d: 15,
        s: 7,
        mu1: 0.9,
        delta_s: 0.1,
    },
    Preset {
        name: "fig3-left",
        d: 15,
        s: 12,
        mu1: 0.9,
        delta_s: 0.3,
    },
    Preset {
        name: "fig3-mid",
        d: 15,
        s: 6,
        mu1: 0.9,
        delta_s: 0.3,
    },
    Preset {
        name: "fig3-right",
        d: 15,
        s: 2,
        mu1: 0.9,
        delta_s: 0.3,
    },
];

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    pub fn instance(&self) -> SparseBanditInstance {
        build_parametric(self.d, self.s, self.mu1, self.delta_s)
            .expect("presets are valid by construction")
    }
}

fn build_parametric(
    d: usize,
    s: usize,
    mu1: f64,
    delta_s: f64,
) -> Result<SparseBanditInstance, CliError> {
    if s > d {
        return Err(CliError::Validation(format!("s={s} exceeds d={d}")));
    }
    let mut means = vec![mu1];
    means.extend(std::iter::repeat_n(mu1 - delta_s, s.saturating_sub(1)));
    means.extend(std::iter::repeat_n(0.0, d - s));
    SparseBanditInstance::new(means, s)
        .map_err(|e| CliError::Validation(format!("invalid instance parameters: {e}")))
}

/// All knobs of one invocation, before resolution.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub preset: Option<String>,
    pub d: Option<usize>,
    pub s: Option<usize>,
    pub mu1: Option<f64>,
    pub delta_s: Option<f64>,
    pub means: Option<Vec<f64>>,
    pub policy: PolicySelection,
    pub horizon: u64,
    pub replications: u32,
    pub seed: u64,
    pub out: PathBuf,
    pub epsilon: Option<f64>,
    pub epsilon_grid: Option<EpsilonGrid>,
    pub forcelog: ForceLogChoice,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            preset: None,
            d: None,
            s: None,
            mu1: None,
            delta_s: None,
            means: None,
            policy: PolicySelection::Both,
            horizon: 10_000,
            replications: 100,
            seed: 12345,
            out: PathBuf::from("."),
            epsilon: None,
            epsilon_grid: None,
            forcelog: ForceLogChoice::Anytime,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("cannot parse `{value}` for key `{key}`")))
}

impl RunSpec {
    /// Applies one `key = value` pair. Shared by the file and flag paths.
    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "preset" => self.preset = Some(value.trim().to_string()),
            "d" => self.d = Some(parse_num(key, value)?),
            "s" => self.s = Some(parse_num(key, value)?),
            "mu1" => self.mu1 = Some(parse_num(key, value)?),
            "delta-s" => self.delta_s = Some(parse_num(key, value)?),
            "means" => {
                let parsed: Result<Vec<f64>, _> =
                    value.split(',').map(|v| v.trim().parse()).collect();
                self.means = Some(parsed.map_err(|_| {
                    CliError::Validation(format!("cannot parse mean vector `{value}`"))
                })?);
            }
            "policy" => {
                self.policy = match value.trim() {
                    "ucb" => PolicySelection::Ucb,
                    "sparse" | "sparse-ucb" | "sparse_ucb" => PolicySelection::Sparse,
                    "both" => PolicySelection::Both,
                    other => {
                        return Err(CliError::Validation(format!(
                            "unknown policy `{other}` (expected ucb, sparse or both)"
                        )))
                    }
                }
            }
            "horizon" => {
                self.horizon = parse_num(key, value)?;
                if self.horizon == 0 {
                    return Err(CliError::Validation("horizon must be >= 1".into()));
                }
            }
            "reps" => {
                self.replications = parse_num(key, value)?;
                if self.replications == 0 {
                    return Err(CliError::Validation("reps must be >= 1".into()));
                }
            }
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "epsilon" => self.epsilon = Some(parse_num(key, value)?),
            "epsilon-grid" => {
                let parts: Vec<&str> = value.trim().split(':').collect();
                if parts.len() != 3 {
                    return Err(CliError::Validation(
                        "epsilon-grid expects start:step:end".into(),
                    ));
                }
                let grid = EpsilonGrid {
                    start: parse_num(key, parts[0])?,
                    step: parse_num(key, parts[1])?,
                    end: parse_num(key, parts[2])?,
                };
                if !(grid.start > 0.0 && grid.step > 0.0 && grid.end >= grid.start) {
                    return Err(CliError::Validation(
                        "epsilon-grid needs 0 < start <= end and step > 0".into(),
                    ));
                }
                self.epsilon_grid = Some(grid);
            }
            "forcelog" => {
                self.forcelog = match value.trim() {
                    "anytime" => ForceLogChoice::Anytime,
                    "horizon-aware" | "horizon" => ForceLogChoice::HorizonAware,
                    other => {
                        return Err(CliError::Validation(format!(
                            "unknown forcelog variant `{other}`"
                        )))
                    }
                }
            }
            other => return Err(CliError::Validation(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Loads `key = value` lines; `#` starts a comment, blank lines are
    /// skipped, unknown keys are rejected with their line number.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Parse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    message: "expected `key = value`".into(),
                });
            };
            self.set(key.trim(), value).map_err(|e| CliError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    /// Parses `--key value` flags, honoring `--config FILE` first so that
    /// flags override the file regardless of their position.
    pub fn from_args(args: &[String]) -> Result<Self, CliError> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut config: Option<PathBuf> = None;
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let Some(key) = arg.strip_prefix("--") else {
                return Err(CliError::Usage(format!("unexpected argument `{arg}`")));
            };
            let Some(value) = it.next() else {
                return Err(CliError::Usage(format!("flag --{key} needs a value")));
            };
            if key == "config" {
                config = Some(PathBuf::from(value));
            } else {
                pairs.push((key.to_string(), value.clone()));
            }
        }
        let mut spec = RunSpec::default();
        if let Some(path) = config {
            spec.apply_file(&path)?;
        }
        for (key, value) in &pairs {
            spec.set(key, value)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(spec)
    }

    /// Resolves the instance, enforcing that the preset and the explicit
    /// parameter forms are not mixed.
    pub fn resolve_instance(&self) -> Result<SparseBanditInstance, CliError> {
        let explicit = self.d.is_some()
            || self.s.is_some()
            || self.mu1.is_some()
            || self.delta_s.is_some()
            || self.means.is_some();
        if let Some(name) = &self.preset {
            if explicit {
                return Err(CliError::Validation(
                    "preset and explicit instance parameters are mutually exclusive".into(),
                ));
            }
            let preset = find_preset(name).ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown preset `{name}` (try `sparse-bandits presets list`)"
                ))
            })?;
            return Ok(preset.instance());
        }
        if let Some(means) = &self.means {
            if self.d.is_some() || self.mu1.is_some() || self.delta_s.is_some() {
                return Err(CliError::Validation(
                    "means cannot be combined with d/mu1/delta-s".into(),
                ));
            }
            let s = self
                .s
                .ok_or_else(|| CliError::Validation("means requires s".into()))?;
            return SparseBanditInstance::new(means.clone(), s)
                .map_err(|e| CliError::Validation(format!("invalid mean vector: {e}")));
        }
        match (self.d, self.s, self.mu1) {
            (Some(d), Some(s), Some(mu1)) => {
                let delta_s = match self.delta_s {
                    Some(v) => v,
                    None if s == 1 => 0.0, // no suboptimal good arm to place
                    None => {
                        return Err(CliError::Validation(
                            "d/s/mu1 form requires delta-s when s > 1".into(),
                        ))
                    }
                };
                build_parametric(d, s, mu1, delta_s)
            }
            _ => Err(CliError::Validation(
                "specify an instance via --preset, --means + --s, or --d --s --mu1 --delta-s"
                    .into(),
            )),
        }
    }

    fn policy_config(&self, s: usize) -> PolicyConfig {
        let variant = match self.forcelog {
            ForceLogChoice::Anytime => ForceLogVariant::Anytime,
            ForceLogChoice::HorizonAware => ForceLogVariant::HorizonAware {
                horizon: self.horizon,
            },
        };
        PolicyConfig { s, variant }
    }

    /// One experiment per selected policy, UCB first.
    pub fn experiment_configs(&self) -> Result<Vec<ExperimentConfig>, CliError> {
        let instance = self.resolve_instance()?;
        let mut choices = Vec::new();
        if matches!(self.policy, PolicySelection::Ucb | PolicySelection::Both) {
            choices.push(PolicyChoice::Ucb);
        }
        if matches!(self.policy, PolicySelection::Sparse | PolicySelection::Both) {
            choices.push(PolicyChoice::SparseUcb(self.policy_config(instance.s())));
        }
        choices
            .into_iter()
            .map(|policy| {
                ExperimentConfig::new(
                    instance.clone(),
                    policy,
                    self.horizon,
                    self.replications,
                    self.seed,
                )
                .map_err(CliError::from)
            })
            .collect()
    }
}
