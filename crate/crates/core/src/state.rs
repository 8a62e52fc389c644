//! Per-replication allocation bookkeeping.

use alloc::vec;
use alloc::vec::Vec;

use crate::sampling::{draw_sample, SampleStream};
use crate::{argmax, Error, ProblemInstance, Result};

/// Smallest accepted number of initial samples per design.
pub const MIN_INITIAL_SAMPLES: u64 = 2;

/// Sample counts and running sums for every design, plus the iteration index.
///
/// Means are stored as `(count, sum)` so they never accumulate
/// incremental-update drift. The per-design sum of squares is only consumed
/// by UCB1-Normal.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationState {
    counts: Vec<u64>,
    sums: Vec<f64>,
    sum_squares: Vec<f64>,
    t: u64,
    total: u64,
}

impl AllocationState {
    /// Empty state for `k` designs.
    pub fn empty(k: usize) -> Self {
        Self { counts: vec![0; k], sums: vec![0.0; k], sum_squares: vec![0.0; k], t: 0, total: 0 }
    }

    /// Builds a state from per-design counts and sample means, as if every
    /// sample of design `i` had been exactly `means[i]`.
    ///
    /// Intended for fixtures; panics on length mismatch.
    pub fn from_counts_and_means(counts: &[u64], means: &[f64], t: u64) -> Self {
        assert_eq!(counts.len(), means.len(), "counts and means must align");
        let sums: Vec<f64> = counts.iter().zip(means).map(|(&n, &m)| n as f64 * m).collect();
        let sum_squares = counts.iter().zip(means).map(|(&n, &m)| n as f64 * m * m).collect();
        Self { counts: counts.to_vec(), sums, sum_squares, t, total: counts.iter().sum() }
    }

    /// Number of designs.
    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Per-design sample counts `N_i`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Per-design running sums of sample values.
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// Per-design running sums of squared sample values.
    pub fn sum_squares(&self) -> &[f64] {
        &self.sum_squares
    }

    /// Iteration index. Zero right after initialization; the driver bumps it
    /// with [`AllocationState::begin_iteration`] before each decision, so
    /// policies see `t = 1` on their first call.
    pub fn t(&self) -> u64 {
        self.t
    }

    /// Total number of samples taken, `sum_i N_i`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Sample mean of design `i`; an error if it has no samples.
    pub fn mean(&self, i: usize) -> Result<f64> {
        match self.counts.get(i) {
            None => Err(Error::DesignOutOfRange { index: i, k: self.k() }),
            Some(0) => Err(Error::NoSamples(i)),
            Some(&n) => Ok(self.sums[i] / n as f64),
        }
    }

    /// All sample means; an error if any design has no samples.
    pub fn means(&self) -> Result<Vec<f64>> {
        (0..self.k()).map(|i| self.mean(i)).collect()
    }

    /// Fraction of the samples allocated to each design, `N_i / total`.
    pub fn fractions(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts.iter().map(|&n| n as f64 / total).collect()
    }

    /// Design with the largest sample mean, lowest index on ties.
    pub fn estimated_best(&self) -> Result<usize> {
        let means = self.means()?;
        argmax(means).ok_or(Error::TooFewDesigns(0))
    }

    /// Records one observed sample value for `design`.
    pub fn record(&mut self, design: usize, value: f64) -> Result<()> {
        if design >= self.k() {
            return Err(Error::DesignOutOfRange { index: design, k: self.k() });
        }
        self.counts[design] += 1;
        self.sums[design] += value;
        self.sum_squares[design] += value * value;
        self.total += 1;
        Ok(())
    }

    /// Draws `batch` samples of `design` from `stream` and records them.
    pub fn sample(
        &mut self,
        instance: &ProblemInstance,
        design: usize,
        batch: u64,
        stream: &mut SampleStream,
    ) -> Result<()> {
        for _ in 0..batch {
            let x = draw_sample(instance, design, stream)?;
            self.record(design, x)?;
        }
        Ok(())
    }

    /// Advances the iteration index by one.
    pub fn begin_iteration(&mut self) {
        self.t += 1;
    }
}

/// Collects `n0` samples of every design, design 0 first, and returns the
/// resulting state with `t = 0`.
pub fn init_state(instance: &ProblemInstance, n0: u64, stream: &mut SampleStream) -> Result<AllocationState> {
    if n0 < MIN_INITIAL_SAMPLES {
        return Err(Error::InitialSamplesTooFew(n0));
    }
    let mut state = AllocationState::empty(instance.k());
    for design in 0..instance.k() {
        state.sample(instance, design, n0, stream)?;
    }
    Ok(state)
}
