//! Problem instances: true means and known standard deviations of k
//! Gaussian designs.

use alloc::vec::Vec;

use crate::{argmax, Error, Result};

/// Gaps between the best mean and any other mean below this are treated as
/// ties.
pub const MIN_GAP: f64 = 1e-12;

/// Ground truth for a selection problem with a unique best design.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProblemInstance {
    mu: Vec<f64>,
    sigma: Vec<f64>,
    best: usize,
}

impl ProblemInstance {
    /// Builds an instance, deriving the best design from `mu`.
    ///
    /// Rejects fewer than two designs, mismatched lengths, non-positive or
    /// non-finite standard deviations and a maximum mean that is tied (within
    /// [`MIN_GAP`]) with another design.
    pub fn new(mu: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if mu.len() != sigma.len() {
            return Err(Error::LengthMismatch { mu: mu.len(), sigma: sigma.len() });
        }
        if mu.len() < 2 {
            return Err(Error::TooFewDesigns(mu.len()));
        }
        if let Some((index, &value)) = mu.iter().enumerate().find(|(_, m)| !m.is_finite()) {
            return Err(Error::InvalidMean { index, value });
        }
        if let Some((index, &value)) =
            sigma.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s > 0.0))
        {
            return Err(Error::InvalidSigma { index, value });
        }
        let best = argmax(mu.iter().copied()).expect("non-empty");
        if let Some(second) =
            (0..mu.len()).find(|&i| i != best && mu[best] - mu[i] < MIN_GAP)
        {
            return Err(Error::TiedBest { first: best.min(second), second: best.max(second) });
        }
        Ok(Self { mu, sigma, best })
    }

    /// Number of designs.
    pub fn k(&self) -> usize {
        self.mu.len()
    }

    /// True means.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Known standard deviations.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Index of the unique best design.
    pub fn best(&self) -> usize {
        self.best
    }

    /// `mu[best] - mu[i]`; zero for the best design.
    pub fn gap(&self, i: usize) -> f64 {
        self.mu[self.best] - self.mu[i]
    }

    /// Smallest and largest gap over the non-best designs.
    pub fn gap_range(&self) -> (f64, f64) {
        self.non_best().map(|i| self.gap(i)).fold((f64::INFINITY, 0.0), |(lo, hi), g| {
            (lo.min(g), hi.max(g))
        })
    }

    /// Indices of every design except the best, in order.
    pub fn non_best(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k()).filter(move |&i| i != self.best)
    }
}

/// Convenience wrapper around [`ProblemInstance::new`].
pub fn make_instance(mu: Vec<f64>, sigma: Vec<f64>) -> Result<ProblemInstance> {
    ProblemInstance::new(mu, sigma)
}

/// Instance 1: `mu_i = i`, `sigma_i = i` for `i = 1..=10`.
pub fn increasing_variances() -> ProblemInstance {
    let mu: Vec<f64> = (1..=10).map(f64::from).collect();
    ProblemInstance::new(mu.clone(), mu).expect("valid built-in instance")
}

/// Instance 2: `mu_i = i`, `sigma_i = 11 - i` for `i = 1..=10`.
pub fn decreasing_variances() -> ProblemInstance {
    let mu = (1..=10).map(f64::from).collect();
    let sigma = (1..=10).map(|i| f64::from(11 - i)).collect();
    ProblemInstance::new(mu, sigma).expect("valid built-in instance")
}
