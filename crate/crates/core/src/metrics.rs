//! Per-replication traces and cross-replication performance estimates.
//!
//! A [`ReplicationTrace`] snapshots one run at a fixed grid of total-sample
//! counts. [`aggregate`] reduces a set of traces over the same grid into a
//! [`MetricSeries`]:
//!
//! * `pfs`: fraction of replications whose estimated best is wrong,
//! * `eoc`: mean of `mu_b - mu_{b_hat}`,
//! * `cr`: mean cumulative regret `sum_s (mu_b - mu_{I_s}) * batch` over the
//!   policy steps (initial samples excluded),
//! * `alloc_mean`: mean of `N_i / total` per design,
//!
//! plus the rate transforms `-ln(pfs)/t`, `-ln(eoc)/t`, `cr/t` and
//! `cr/ln(t)`, which are `None` where undefined (`pfs = 0`, `eoc = 0`,
//! `t <= 1`).

use alloc::vec::Vec;
use core::ops::Range;

use crate::{AllocationState, Error, ProblemInstance, Result, StepDecision};

/// State of one replication at one checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointSnapshot {
    /// Total samples taken so far (the checkpoint's grid value).
    pub total: u64,
    /// Iteration index at the snapshot.
    pub t: u64,
    /// Estimated best design.
    pub estimated_best: usize,
    /// Per-design counts; they sum to `total`.
    pub counts: Vec<u64>,
    /// Cumulative regret of the policy steps so far.
    pub regret_sum: f64,
}

/// Checkpoint snapshots and branch statistics of one replication.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplicationTrace {
    snapshots: Vec<CheckpointSnapshot>,
    regret: f64,
    steps: u64,
    explore_steps: u64,
    epsilon_sum: f64,
}

impl ReplicationTrace {
    /// Empty trace.
    pub fn new() -> Self {
        Self::default()
    }

    /// Accounts for one policy step.
    pub fn record_step(&mut self, instance: &ProblemInstance, decision: &StepDecision) {
        self.regret += instance.gap(decision.design) * decision.batch as f64;
        self.steps += 1;
        if decision.explored {
            self.explore_steps += 1;
        }
        if let Some(eps) = decision.epsilon {
            self.epsilon_sum += eps;
        }
    }

    /// Appends a snapshot of `state`. Checkpoint totals must strictly increase.
    pub fn record_checkpoint(&mut self, state: &AllocationState) -> Result<()> {
        if let Some(last) = self.snapshots.last() {
            if state.total() <= last.total {
                return Err(Error::CheckpointOutOfOrder { previous: last.total, total: state.total() });
            }
        }
        self.snapshots.push(CheckpointSnapshot {
            total: state.total(),
            t: state.t(),
            estimated_best: state.estimated_best()?,
            counts: state.counts().to_vec(),
            regret_sum: self.regret,
        });
        Ok(())
    }

    /// Snapshots in checkpoint order.
    pub fn snapshots(&self) -> &[CheckpointSnapshot] {
        &self.snapshots
    }

    /// Cumulative regret so far (including steps after the last checkpoint).
    pub fn regret(&self) -> f64 {
        self.regret
    }

    /// Number of policy steps recorded.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Number of steps on which an exploration branch fired.
    pub fn explore_steps(&self) -> u64 {
        self.explore_steps
    }

    /// Sum of the exploration probabilities over all steps.
    pub fn epsilon_sum(&self) -> f64 {
        self.epsilon_sum
    }

    fn grid(&self) -> impl Iterator<Item = u64> + '_ {
        self.snapshots.iter().map(|s| s.total)
    }
}

/// Cross-replication estimates at one checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPoint {
    /// Total samples.
    pub t: u64,
    /// Probability of false selection.
    pub pfs: f64,
    /// Expected opportunity cost.
    pub eoc: f64,
    /// Cumulative regret.
    pub cr: f64,
    /// Mean allocation fraction per design.
    pub alloc_mean: Vec<f64>,
    /// `-ln(pfs) / t`.
    pub pfs_rate: Option<f64>,
    /// `-ln(eoc) / t`.
    pub eoc_rate: Option<f64>,
    /// `cr / t`.
    pub cr_per_t: Option<f64>,
    /// `cr / ln(t)`.
    pub cr_per_logt: Option<f64>,
}

impl MetricPoint {
    /// Builds a point and derives its rate transforms.
    pub fn new(t: u64, pfs: f64, eoc: f64, cr: f64, alloc_mean: Vec<f64>) -> Self {
        let tf = t as f64;
        let neg_log_rate = |v: f64| (v > 0.0 && t > 0).then(|| -libm::log(v) / tf);
        Self {
            t,
            pfs,
            eoc,
            cr,
            alloc_mean,
            pfs_rate: neg_log_rate(pfs),
            eoc_rate: neg_log_rate(eoc),
            cr_per_t: (t > 0).then(|| cr / tf),
            cr_per_logt: (t > 1).then(|| cr / libm::log(tf)),
        }
    }
}

/// Aggregated metrics over a checkpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    /// One point per checkpoint, in order.
    pub points: Vec<MetricPoint>,
    /// Number of replications aggregated.
    pub reps: usize,
}

impl MetricSeries {
    /// Last checkpoint.
    pub fn last(&self) -> Option<&MetricPoint> {
        self.points.last()
    }

    /// Index range from the first point whose `field` is at most `hi` to the
    /// last point whose `field` is at least `lo`. Useful for picking a slope
    /// window on a decaying metric.
    pub fn window_between(&self, field: MetricField, lo: f64, hi: f64) -> Range<usize> {
        let start = self.points.iter().position(|p| field.value(p) <= hi).unwrap_or(self.points.len());
        let end = self.points.iter().rposition(|p| field.value(p) >= lo).map_or(0, |i| i + 1);
        start..end.max(start)
    }
}

/// Reduces traces that share a checkpoint grid.
pub fn aggregate(traces: &[ReplicationTrace], instance: &ProblemInstance) -> Result<MetricSeries> {
    let first = traces.first().ok_or(Error::NoTraces)?;
    if traces.iter().any(|tr| !tr.grid().eq(first.grid())) {
        return Err(Error::MismatchedGrids);
    }
    let k = instance.k();
    let reps = traces.len() as f64;
    let mut points = Vec::with_capacity(first.snapshots.len());
    for (c, head) in first.snapshots.iter().enumerate() {
        let (mut wrong, mut loss, mut regret) = (0usize, 0.0, 0.0);
        let mut alloc = alloc::vec![0.0; k];
        for tr in traces {
            let snap = &tr.snapshots[c];
            if snap.counts.len() != k || snap.estimated_best >= k {
                return Err(Error::InvalidAllocation("snapshot does not match the instance"));
            }
            if snap.estimated_best != instance.best() {
                wrong += 1;
            }
            loss += instance.gap(snap.estimated_best);
            regret += snap.regret_sum;
            let total = snap.total as f64;
            for (a, &n) in alloc.iter_mut().zip(&snap.counts) {
                *a += n as f64 / total;
            }
        }
        alloc.iter_mut().for_each(|a| *a /= reps);
        points.push(MetricPoint::new(head.total, wrong as f64 / reps, loss / reps, regret / reps, alloc));
    }
    Ok(MetricSeries { points, reps: traces.len() })
}

/// Metric selectable for slope fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricField {
    /// `ln(pfs)` against `t`.
    Pfs,
    /// `ln(eoc)` against `t`.
    Eoc,
    /// `cr` against `ln(t)`.
    Cr,
}

impl MetricField {
    fn value(self, p: &MetricPoint) -> f64 {
        match self {
            MetricField::Pfs => p.pfs,
            MetricField::Eoc => p.eoc,
            MetricField::Cr => p.cr,
        }
    }

    /// `(x, y)` regression coordinates, if finite.
    fn coords(self, p: &MetricPoint) -> Option<(f64, f64)> {
        let t = p.t as f64;
        let (x, y) = match self {
            MetricField::Pfs | MetricField::Eoc => (t, libm::log(self.value(p))),
            MetricField::Cr => (libm::log(t), p.cr),
        };
        (x.is_finite() && y.is_finite()).then_some((x, y))
    }
}

/// Least-squares slope over `window`: `ln(metric)` against `t` for PFS and
/// EOC, `cr` against `ln(t)` for CR. Points with non-finite coordinates
/// (such as `pfs = 0`) are skipped; at least three must remain.
pub fn slope_fit(series: &MetricSeries, field: MetricField, window: Range<usize>) -> Result<f64> {
    let end = window.end.min(series.points.len());
    let start = window.start.min(end);
    let coords: Vec<(f64, f64)> = series.points[start..end].iter().filter_map(|p| field.coords(p)).collect();
    if coords.len() < 3 {
        return Err(Error::TooFewPoints(coords.len()));
    }
    let n = coords.len() as f64;
    let mx = coords.iter().map(|c| c.0).sum::<f64>() / n;
    let my = coords.iter().map(|c| c.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in &coords {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Ok(sxy / sxx)
}
