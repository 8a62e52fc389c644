//! Sequential sampling policies for ranking and selection with Gaussian
//! designs and known variances.
//!
//! The crate is `no_std` (it needs `alloc`) and holds everything that is a
//! pure function of its inputs:
//!
//! * [`instance`], [`sampling`] and [`state`]: problem instances, the
//!   seeded Gaussian sample stream and the per-replication bookkeeping.
//! * [`theory`]: optimal allocations, convergence-rate constants, Gaussian
//!   KL divergence and exact pairwise false-selection probabilities.
//! * [`policies`]: OCBA-1, OCBA-2, their regret-oriented `-UM` variants,
//!   Epsilon-Greedy and UCB1-Normal behind one interface.
//! * [`metrics`]: per-replication traces and cross-replication aggregates
//!   (PFS, EOC, cumulative regret, allocation fractions).
//! * [`replication`]: the sequential loop that drives one policy on one
//!   instance from a seed to a trace.
//!
//! File formats, the CLI and parallel orchestration live in the
//! `ocba-harness` crate.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod instance;
pub mod metrics;
pub mod policies;
pub mod replication;
pub mod sampling;
pub mod state;
pub mod theory;

pub use error::{Error, Result};
pub use instance::ProblemInstance;
pub use metrics::{CheckpointSnapshot, MetricField, MetricPoint, MetricSeries, ReplicationTrace};
pub use policies::{Branch, PolicyConfig, PolicyKind, StepDecision};
pub use replication::{run_replication, RunSpec};
pub use sampling::{SampleStream, SeedSpec};
pub use state::AllocationState;
pub use theory::TheoryReport;

/// Index of the largest value, lowest index on ties.
///
/// NaN entries never win. Returns `None` for an empty iterator.
pub(crate) fn argmax<I: IntoIterator<Item = f64>>(values: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            None if !v.is_nan() => best = Some((i, v)),
            Some((_, b)) if v > b => best = Some((i, v)),
            _ => {}
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the smallest value, lowest index on ties.
pub(crate) fn argmin<I: IntoIterator<Item = f64>>(values: I) -> Option<usize> {
    argmax(values.into_iter().map(|v| -v))
}
