//! JSON experiment configuration.

use std::path::PathBuf;

use ocba_core::policies::DEFAULT_GAP_FLOOR;
use ocba_core::replication::geometric_grid;
use ocba_core::{PolicyConfig, PolicyKind, ProblemInstance, RunSpec};
use serde::{Deserialize, Serialize};

use crate::{builtin_instance, HarnessError, HarnessResult};

/// Default checkpoint count of the geometric grid.
pub const DEFAULT_POINTS: usize = 50;

/// Instance given by built-in name or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    /// One of [`crate::BUILTIN_NAMES`].
    Named(String),
    /// Explicit means and standard deviations.
    Inline {
        /// Label used in output file names; `custom` if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// True means.
        mu: Vec<f64>,
        /// Known standard deviations.
        sigma: Vec<f64>,
    },
}

impl InstanceSpec {
    /// Label used in output file names.
    pub fn label(&self) -> &str {
        match self {
            InstanceSpec::Named(name) => name,
            InstanceSpec::Inline { name, .. } => name.as_deref().unwrap_or("custom"),
        }
    }

    /// Builds the instance.
    pub fn resolve(&self) -> HarnessResult<ProblemInstance> {
        match self {
            InstanceSpec::Named(name) => builtin_instance(name),
            InstanceSpec::Inline { mu, sigma, .. } => Ok(ProblemInstance::new(mu.clone(), sigma.clone())?),
        }
    }
}

/// One policy entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    /// Policy name, e.g. `ocba2-um`.
    pub kind: PolicyKind,
    /// Samples per step.
    #[serde(default = "one")]
    pub delta: u64,
    /// Floor on estimated gaps; policy default if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_floor: Option<f64>,
}

impl PolicySpec {
    /// Validates into a core policy.
    pub fn resolve(&self) -> HarnessResult<PolicyConfig> {
        Ok(PolicyConfig::with_gap_floor(self.kind, self.delta, self.gap_floor.unwrap_or(DEFAULT_GAP_FLOOR))?)
    }
}

/// Checkpoint grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckpointSpec {
    /// Log-spaced totals from `start` (default `10 k`) to the budget.
    Geometric {
        /// Number of grid points.
        points: usize,
        /// First grid point.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<u64>,
    },
    /// Explicit totals.
    Explicit(Vec<u64>),
}

impl Default for CheckpointSpec {
    fn default() -> Self {
        CheckpointSpec::Geometric { points: DEFAULT_POINTS, start: None }
    }
}

impl CheckpointSpec {
    fn raw_grid(&self, k: usize, budget: u64) -> HarnessResult<Vec<u64>> {
        match self {
            CheckpointSpec::Geometric { points, start } => {
                if *points == 0 {
                    return Err(HarnessError::Config("checkpoint grid needs at least one point".into()));
                }
                Ok(geometric_grid(start.unwrap_or(10 * k as u64), budget, *points))
            }
            CheckpointSpec::Explicit(totals) => Ok(totals.clone()),
        }
    }
}

/// A full experiment: one instance, several policies, shared budget and
/// seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Instance to run on.
    pub instance: InstanceSpec,
    /// Policies to compare.
    pub policies: Vec<PolicySpec>,
    /// Sampling budget per replication.
    pub budget: u64,
    /// Initial samples per design.
    #[serde(default = "default_n0")]
    pub n0: u64,
    /// Replications per policy.
    #[serde(default = "default_reps")]
    pub replications: u64,
    /// Master seed; replication `r` uses stream `r` of this seed.
    #[serde(default)]
    pub master_seed: u64,
    /// Checkpoint grid.
    #[serde(default)]
    pub checkpoints: CheckpointSpec,
    /// Where outputs are written.
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    /// Worker threads; all available cores if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn one() -> u64 {
    1
}

fn default_n0() -> u64 {
    5
}

fn default_reps() -> u64 {
    500
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// A validated config.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    /// Instance label.
    pub label: String,
    /// Instance.
    pub instance: ProblemInstance,
    /// Policies with their run specs (grids are snapped per batch size).
    pub policies: Vec<(PolicyConfig, RunSpec)>,
}

impl ExperimentConfig {
    /// Parses a JSON document.
    pub fn from_json(text: &str) -> HarnessResult<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid config: {e}")))
    }

    /// Checks every field and builds the core objects.
    pub fn resolve(&self) -> HarnessResult<ResolvedConfig> {
        let instance = self.instance.resolve()?;
        if self.policies.is_empty() {
            return Err(HarnessError::Config("no policies given".into()));
        }
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        let raw = self.checkpoints.raw_grid(instance.k(), self.budget)?;
        let mut policies = Vec::with_capacity(self.policies.len());
        for spec in &self.policies {
            let policy = spec.resolve()?;
            let run = RunSpec::new(instance.k(), self.n0, self.budget, policy.delta(), &raw)?;
            if policies.iter().any(|(p, _): &(PolicyConfig, RunSpec)| {
                p.kind() == policy.kind() && p.delta() == policy.delta()
            }) {
                return Err(HarnessError::Config(format!(
                    "policy {} with delta {} listed twice",
                    policy.kind(),
                    policy.delta()
                )));
            }
            policies.push((policy, run));
        }
        Ok(ResolvedConfig { label: self.instance.label().to_string(), instance, policies })
    }
}
