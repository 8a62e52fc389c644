//! The sequential loop of a single replication.
//!
//! ```text
//! collect n0 samples per design            (t = 0)
//! while total < budget:
//!     t += 1
//!     decision = policy(state, draws)
//!     collect decision.batch samples of decision.design
//!     snapshot if total hit a checkpoint
//! ```
//!
//! All randomness of a replication comes from one [`SampleStream`], so the
//! trace is a pure function of the instance, policy, run spec and seed.

use alloc::vec::Vec;

use crate::metrics::ReplicationTrace;
use crate::sampling::{SampleStream, SeedSpec};
use crate::state::{init_state, MIN_INITIAL_SAMPLES};
use crate::{Error, PolicyConfig, ProblemInstance, Result};

/// Budget, initial sample size and checkpoint grid of a run.
///
/// Checkpoints are totals the run actually reaches: every step adds exactly
/// `delta` samples, so reachable totals are `n0 * k + j * delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpec {
    n0: u64,
    budget: u64,
    checkpoints: Vec<u64>,
}

impl RunSpec {
    /// Validates the budget and snaps `grid` onto reachable totals.
    ///
    /// Grid values below the initial total `n0 * k` are dropped, the rest
    /// are rounded up to the next reachable total, duplicates are removed,
    /// and the final total is always included.
    pub fn new(k: usize, n0: u64, budget: u64, delta: u64, grid: &[u64]) -> Result<Self> {
        if n0 < MIN_INITIAL_SAMPLES {
            return Err(Error::InitialSamplesTooFew(n0));
        }
        if delta == 0 {
            return Err(Error::ZeroDelta);
        }
        let initial = n0 * k as u64;
        if budget <= initial {
            return Err(Error::BudgetTooSmall { budget, initial });
        }
        let snap = |c: u64| initial + (c - initial).div_ceil(delta) * delta;
        let terminal = snap(budget);
        let mut checkpoints: Vec<u64> =
            grid.iter().copied().filter(|&c| c >= initial && c <= budget).map(snap).collect();
        checkpoints.push(terminal);
        checkpoints.sort_unstable();
        checkpoints.dedup();
        Ok(Self { n0, budget, checkpoints })
    }

    /// Initial samples per design.
    pub fn n0(&self) -> u64 {
        self.n0
    }

    /// Sampling budget `n`.
    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Snapped checkpoint totals, strictly increasing.
    pub fn checkpoints(&self) -> &[u64] {
        &self.checkpoints
    }

    /// Total samples at the end of the run: the first reachable total at or
    /// above the budget.
    pub fn terminal_total(&self) -> u64 {
        *self.checkpoints.last().expect("terminal checkpoint is always present")
    }
}

/// `points` totals spaced geometrically from `start` to `end`, rounded to
/// integers and deduplicated. `end` is always the last entry.
pub fn geometric_grid(start: u64, end: u64, points: usize) -> Vec<u64> {
    let start = start.clamp(1, end.max(1));
    if points < 2 || start >= end {
        return alloc::vec![end];
    }
    let ratio = libm::log(end as f64 / start as f64) / (points - 1) as f64;
    let mut grid: Vec<u64> =
        (0..points).map(|j| libm::round(start as f64 * libm::exp(ratio * j as f64)) as u64).collect();
    *grid.last_mut().expect("points >= 2") = end;
    grid.dedup();
    grid
}

/// Runs one replication of `policy` on `instance`.
pub fn run_replication(
    instance: &ProblemInstance,
    policy: &PolicyConfig,
    spec: &RunSpec,
    seed: SeedSpec,
) -> Result<ReplicationTrace> {
    let mut stream = SampleStream::new(seed);
    let mut state = init_state(instance, spec.n0, &mut stream)?;
    let mut trace = ReplicationTrace::new();
    let checkpoints = spec.checkpoints();
    let mut next = 0;
    if checkpoints.first() == Some(&state.total()) {
        trace.record_checkpoint(&state)?;
        next = 1;
    }
    while state.total() < spec.budget {
        state.begin_iteration();
        let decision = policy.decide(&state, instance.sigma(), &mut stream)?;
        state.sample(instance, decision.design, decision.batch, &mut stream)?;
        trace.record_step(instance, &decision);
        if let Some(&c) = checkpoints.get(next) {
            if state.total() == c {
                trace.record_checkpoint(&state)?;
                next += 1;
            } else if state.total() > c {
                return Err(Error::InvalidCheckpointGrid);
            }
        }
    }
    if next != checkpoints.len() {
        return Err(Error::InvalidCheckpointGrid);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::increasing_variances;
    use crate::PolicyKind;
    use alloc::vec;

    #[test]
    fn grid_endpoints() {
        let g = geometric_grid(100, 20_000, 50);
        assert_eq!(g[0], 100);
        assert_eq!(*g.last().unwrap(), 20_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(geometric_grid(10, 10, 5), vec![10]);
    }

    #[test]
    fn spec_snaps_to_reachable_totals() {
        let spec = RunSpec::new(10, 5, 1000, 10, &[10, 50, 55, 61, 1000]).unwrap();
        assert_eq!(spec.checkpoints(), &[50, 60, 70, 1000]);
        let spec = RunSpec::new(10, 5, 1005, 10, &[]).unwrap();
        assert_eq!(spec.terminal_total(), 1010);
        assert_eq!(
            RunSpec::new(10, 5, 50, 1, &[]),
            Err(Error::BudgetTooSmall { budget: 50, initial: 50 })
        );
        assert_eq!(RunSpec::new(10, 1, 500, 1, &[]), Err(Error::InitialSamplesTooFew(1)));
    }

    #[test]
    fn replication_respects_budget_and_grid() {
        let inst = increasing_variances();
        for kind in PolicyKind::ALL {
            let delta = if kind.requires_unit_delta() { 1 } else { 7 };
            let policy = PolicyConfig::new(kind, delta).unwrap();
            let spec = RunSpec::new(10, 5, 600, delta, &geometric_grid(100, 600, 10)).unwrap();
            let tr = run_replication(&inst, &policy, &spec, SeedSpec::new(1, 2)).unwrap();
            let snaps = tr.snapshots();
            assert_eq!(snaps.len(), spec.checkpoints().len());
            for (s, &c) in snaps.iter().zip(spec.checkpoints()) {
                assert_eq!(s.total, c);
                assert_eq!(s.counts.iter().sum::<u64>(), c);
                assert!(s.counts.iter().all(|&n| n >= 5));
            }
            assert!(snaps.windows(2).all(|w| w[0].regret_sum <= w[1].regret_sum));
            let last = snaps.last().unwrap().total;
            assert!(last >= 600 && last < 600 + delta, "{kind}: {last}");
        }
    }

    #[test]
    fn replication_is_deterministic() {
        let inst = increasing_variances();
        let spec = RunSpec::new(10, 5, 2000, 1, &geometric_grid(100, 2000, 20)).unwrap();
        for kind in PolicyKind::ALL {
            let policy = PolicyConfig::new(kind, 1).unwrap();
            let a = run_replication(&inst, &policy, &spec, SeedSpec::new(11, 5)).unwrap();
            let b = run_replication(&inst, &policy, &spec, SeedSpec::new(11, 5)).unwrap();
            assert_eq!(a, b);
        }
    }
}
