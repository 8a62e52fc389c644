//! Replication sweeps.

use std::path::PathBuf;

use ocba_core::metrics::aggregate;
use ocba_core::{
    run_replication, MetricSeries, PolicyConfig, ProblemInstance, ReplicationTrace, RunSpec, SeedSpec,
    TheoryReport,
};
use rayon::prelude::*;

use crate::output::{write_manifest, write_series_csv, write_theory};
use crate::{csv_file_name, ExperimentConfig, HarnessError, HarnessResult};

/// Result of one policy on one instance.
#[derive(Debug, Clone)]
pub struct PolicyRun {
    /// The policy.
    pub policy: PolicyConfig,
    /// Aggregated metrics.
    pub series: MetricSeries,
    /// Raw traces, in replication order.
    pub traces: Vec<ReplicationTrace>,
}

/// Everything [`run_experiment`] produced.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    /// Instance label.
    pub label: String,
    /// Theoretical constants (per-sample batch size).
    pub theory: TheoryReport,
    /// One run per configured policy, in config order.
    pub runs: Vec<PolicyRun>,
    /// Files written, in write order.
    pub files: Vec<PathBuf>,
}

/// Runs `reps` replications of `policy`, replication `r` seeded with
/// `SeedSpec::new(master_seed, r)`.
///
/// `workers = Some(1)` runs serially on the calling thread. Traces are
/// collected in replication order and aggregated sequentially, so the result
/// does not depend on the worker count.
pub fn simulate(
    instance: &ProblemInstance,
    policy: &PolicyConfig,
    spec: &RunSpec,
    reps: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> HarnessResult<PolicyRun> {
    let one = |r: u64| run_replication(instance, policy, spec, SeedSpec::new(master_seed, r));
    let traces: Vec<ReplicationTrace> = match workers {
        Some(1) => (0..reps).map(one).collect::<Result<_, _>>(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Runtime(format!("thread pool: {e}")))?
            .install(|| (0..reps).into_par_iter().map(one).collect::<Result<_, _>>()),
        None => (0..reps).into_par_iter().map(one).collect::<Result<_, _>>(),
    }
    .map_err(|e| HarnessError::Runtime(format!("{} replication failed: {e}", policy.kind())))?;
    let series = aggregate(&traces, instance).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    Ok(PolicyRun { policy: *policy, series, traces })
}

/// Runs every policy of `config` and writes one CSV per policy, the
/// instance's theory JSON and `manifest.json` into `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> HarnessResult<ExperimentReport> {
    let resolved = config.resolve()?;
    let theory = TheoryReport::compute(&resolved.instance, 1)
        .map_err(|e| HarnessError::Runtime(format!("theory: {e}")))?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;

    let mut files = Vec::new();
    let mut runs = Vec::with_capacity(resolved.policies.len());
    for (policy, spec) in &resolved.policies {
        let run = simulate(&resolved.instance, policy, spec, config.replications, config.master_seed, config.workers)?;
        let path = dir.join(csv_file_name(&resolved.label, policy));
        write_series_csv(&path, &run.series, resolved.instance.k())?;
        files.push(path);
        runs.push(run);
    }
    let path = dir.join(format!("{}_theory.json", resolved.label));
    write_theory(&path, &theory)?;
    files.push(path);
    let path = dir.join("manifest.json");
    write_manifest(&path, config, &files)?;
    files.push(path);
    Ok(ExperimentReport { label: resolved.label, theory, runs, files })
}
