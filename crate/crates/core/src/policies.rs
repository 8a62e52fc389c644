//! Sequential sampling policies.
//!
//! Each step function is pure: it maps an [`AllocationState`] (plus any
//! uniform draws, supplied by the caller) to a [`StepDecision`]. The
//! [`PolicyConfig::decide`] dispatcher pulls those draws from a
//! [`SampleStream`] in a fixed order so whole replications stay
//! reproducible.
//!
//! Ties in every argmax/argmin resolve to the lowest design index.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::sampling::SampleStream;
use crate::theory::{kl_unchecked, ocba1_weights};
use crate::{argmax, argmin, AllocationState, Error, Result};

/// Default lower clamp for estimated gaps.
pub const DEFAULT_GAP_FLOOR: f64 = 1e-12;

/// Lower clamp for the plug-in KL divergence in the exploration schedule.
pub const KL_FLOOR: f64 = 1e-9;

/// The six supported policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PolicyKind {
    /// Track the closed-form OCBA-1 allocation at plug-in means.
    #[cfg_attr(feature = "serde", serde(rename = "ocba1"))]
    Ocba1,
    /// Balance test, then sample the design with the smallest pairwise rate.
    #[cfg_attr(feature = "serde", serde(rename = "ocba2"))]
    Ocba2,
    /// OCBA-1 with probability `epsilon_t`, otherwise the estimated best.
    #[cfg_attr(feature = "serde", serde(rename = "ocba1-um"))]
    Ocba1Um,
    /// OCBA-2 with probability `epsilon_t`, otherwise the estimated best.
    #[cfg_attr(feature = "serde", serde(rename = "ocba2-um"))]
    Ocba2Um,
    /// Uniform design with probability `epsilon_t`, otherwise the estimated best.
    #[cfg_attr(feature = "serde", serde(rename = "eps-greedy"))]
    EpsGreedy,
    /// UCB1-Normal index policy.
    #[cfg_attr(feature = "serde", serde(rename = "ucb1-normal"))]
    Ucb1Normal,
}

impl PolicyKind {
    /// Every kind, in canonical order.
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Ocba1,
        PolicyKind::Ocba2,
        PolicyKind::Ocba1Um,
        PolicyKind::Ocba2Um,
        PolicyKind::EpsGreedy,
        PolicyKind::Ucb1Normal,
    ];

    /// Lowercase name used in config files and output file names.
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Ocba1 => "ocba1",
            PolicyKind::Ocba2 => "ocba2",
            PolicyKind::Ocba1Um => "ocba1-um",
            PolicyKind::Ocba2Um => "ocba2-um",
            PolicyKind::EpsGreedy => "eps-greedy",
            PolicyKind::Ucb1Normal => "ucb1-normal",
        }
    }

    /// Whether the policy commits one sample per decision.
    pub fn requires_unit_delta(self) -> bool {
        !matches!(self, PolicyKind::Ocba1 | PolicyKind::Ocba2)
    }

    /// Whether the policy mixes an exploration branch with exploitation of
    /// the estimated best design.
    pub fn has_exploration_schedule(self) -> bool {
        matches!(self, PolicyKind::Ocba1Um | PolicyKind::Ocba2Um | PolicyKind::EpsGreedy)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}

/// A policy together with its batch size and gap clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConfig {
    kind: PolicyKind,
    delta: u64,
    gap_floor: f64,
}

impl PolicyConfig {
    /// Validated config with the default gap floor.
    ///
    /// `delta` must be at least 1, and exactly 1 for every policy other than
    /// OCBA-1 and OCBA-2.
    pub fn new(kind: PolicyKind, delta: u64) -> Result<Self> {
        Self::with_gap_floor(kind, delta, DEFAULT_GAP_FLOOR)
    }

    /// Validated config with an explicit gap floor.
    pub fn with_gap_floor(kind: PolicyKind, delta: u64, gap_floor: f64) -> Result<Self> {
        if delta == 0 {
            return Err(Error::ZeroDelta);
        }
        if kind.requires_unit_delta() && delta != 1 {
            return Err(Error::DeltaNotAllowed { kind: kind.as_str(), delta });
        }
        if !(gap_floor.is_finite() && gap_floor > 0.0) {
            return Err(Error::InvalidTolerance);
        }
        Ok(Self { kind, delta, gap_floor })
    }

    /// Policy kind.
    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    /// Samples committed per decision.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Lower clamp for estimated gaps.
    pub fn gap_floor(&self) -> f64 {
        self.gap_floor
    }

    /// Chooses the next design, drawing any randomness from `stream`.
    ///
    /// Draw order: the `-UM` policies take one uniform per call,
    /// Epsilon-Greedy takes two (branch, then design) on every call, and the
    /// deterministic policies take none.
    pub fn decide(&self, state: &AllocationState, sigma: &[f64], stream: &mut SampleStream) -> Result<StepDecision> {
        match self.kind {
            PolicyKind::Ocba1 => ocba1_step(state, sigma, self.delta, self.gap_floor),
            PolicyKind::Ocba2 => ocba2_step(state, sigma, self.delta),
            PolicyKind::Ocba1Um => ocba1um_step(state, sigma, self.gap_floor, stream.uniform()),
            PolicyKind::Ocba2Um => ocba2um_step(state, sigma, self.gap_floor, stream.uniform()),
            PolicyKind::EpsGreedy => {
                let u = stream.uniform();
                let v = stream.uniform();
                eps_greedy_step(state, sigma, self.gap_floor, u, v)
            }
            PolicyKind::Ucb1Normal => ucb1_normal_step(state),
        }
    }
}

/// Which rule produced a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// OCBA-1: largest deficit `N_hat_i - N_i`.
    Deficit,
    /// OCBA-2: balance test failed, sample the estimated best.
    Balance,
    /// OCBA-2: smallest estimated pairwise rate.
    Rate,
    /// Exploitation: the estimated best design.
    Exploit,
    /// Epsilon-Greedy exploration: a uniformly chosen design.
    Uniform,
    /// UCB1-Normal: a design below its forced-sampling quota.
    Forced,
    /// UCB1-Normal: largest upper confidence index.
    Index,
}

/// Outcome of one policy step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDecision {
    /// Design to sample, `I_t`.
    pub design: usize,
    /// Rule that fired.
    pub branch: Branch,
    /// Number of samples to collect for `design`.
    pub batch: u64,
    /// True when an exploration branch of a scheduled policy fired.
    pub explored: bool,
    /// Exploration probability used, for policies that have one.
    pub epsilon: Option<f64>,
}

impl StepDecision {
    fn plain(design: usize, branch: Branch, batch: u64) -> Self {
        Self { design, branch, batch, explored: false, epsilon: None }
    }
}

fn check_sigma(state: &AllocationState, sigma: &[f64]) -> Result<()> {
    if sigma.len() != state.k() {
        return Err(Error::LengthMismatch { mu: state.k(), sigma: sigma.len() });
    }
    Ok(())
}

/// OCBA-1 step: plug-in `alpha_hat` from the current means, target counts
/// `N_hat_i = alpha_hat_i (1 + total)`, then the design with the largest
/// `N_hat_i - N_i`.
pub fn ocba1_step(state: &AllocationState, sigma: &[f64], delta: u64, gap_floor: f64) -> Result<StepDecision> {
    check_sigma(state, sigma)?;
    let means = state.means()?;
    let best = argmax(means.iter().copied()).expect("k >= 1");
    let beta = ocba1_weights(&means, sigma, best, gap_floor);
    let beta_sum: f64 = beta.iter().sum();
    let scale = (1 + state.total()) as f64 / beta_sum;
    let deficits = beta.iter().zip(state.counts()).map(|(&b, &n)| b * scale - n as f64);
    let design = argmax(deficits).expect("k >= 1");
    Ok(StepDecision::plain(design, Branch::Deficit, delta))
}

/// `(N_b/sigma_b)^2 - sum_{i != b} (N_i/sigma_i)^2` at the estimated best `b`.
fn balance_excess(state: &AllocationState, sigma: &[f64], best: usize) -> f64 {
    let counts = state.counts();
    let term = |i: usize| {
        let r = counts[i] as f64 / sigma[i];
        r * r
    };
    let rest: f64 = (0..state.k()).filter(|&i| i != best).map(term).sum();
    term(best) - rest
}

/// OCBA-2 step: sample the estimated best while it is under-sampled
/// relative to the balance equation, otherwise the non-best design with the
/// smallest estimated pairwise rate.
pub fn ocba2_step(state: &AllocationState, sigma: &[f64], delta: u64) -> Result<StepDecision> {
    check_sigma(state, sigma)?;
    let means = state.means()?;
    let best = argmax(means.iter().copied()).expect("k >= 1");
    if balance_excess(state, sigma, best) < 0.0 {
        return Ok(StepDecision::plain(best, Branch::Balance, delta));
    }
    let counts = state.counts();
    let best_var = sigma[best] * sigma[best] / counts[best] as f64;
    let rates = (0..state.k()).map(|i| {
        if i == best {
            return f64::INFINITY;
        }
        let d = means[best] - means[i];
        d * d / (sigma[i] * sigma[i] / counts[i] as f64 + best_var)
    });
    let design = argmin(rates).expect("k >= 2");
    Ok(StepDecision::plain(design, Branch::Rate, delta))
}

/// Plug-in exploration scale `h_t`.
///
/// `h_t = (sum_{i != b} d_i / kl_i) * (sum_{i != b} N_i) / (sum_{i != b} d_i N_i)`
/// with estimated gaps `d_i`, the estimated best `b` and the plug-in KL
/// divergence `kl_i` computed from sample means and known sigmas. Gaps in
/// denominators are clamped below by `gap_floor` and `kl_i` by
/// [`KL_FLOOR`].
pub fn exploration_scale(state: &AllocationState, sigma: &[f64], gap_floor: f64) -> Result<f64> {
    check_sigma(state, sigma)?;
    let means = state.means()?;
    let best = argmax(means.iter().copied()).expect("k >= 1");
    let counts = state.counts();
    let (mut regret_per_kl, mut others, mut weighted) = (0.0, 0.0, 0.0);
    for i in (0..state.k()).filter(|&i| i != best) {
        let d = means[best] - means[i];
        let kl = kl_unchecked(means[i], sigma[i], means[best], sigma[best]).max(KL_FLOOR);
        let n = counts[i] as f64;
        regret_per_kl += d / kl;
        others += n;
        weighted += d.max(gap_floor) * n;
    }
    Ok(regret_per_kl * others / weighted)
}

/// Exploration probability `epsilon_t = min(h_t / t, 1)` at the state's
/// iteration index `t` (which must be at least 1).
pub fn exploration_prob(state: &AllocationState, sigma: &[f64], gap_floor: f64) -> Result<f64> {
    if state.t() == 0 {
        return Err(Error::IterationNotStarted);
    }
    let h = exploration_scale(state, sigma, gap_floor)?;
    Ok((h / state.t() as f64).min(1.0))
}

fn exploit(state: &AllocationState, epsilon: f64) -> Result<StepDecision> {
    Ok(StepDecision {
        design: state.estimated_best()?,
        branch: Branch::Exploit,
        batch: 1,
        explored: false,
        epsilon: Some(epsilon),
    })
}

fn explored(inner: StepDecision, epsilon: f64) -> StepDecision {
    StepDecision { explored: true, epsilon: Some(epsilon), batch: 1, ..inner }
}

/// OCBA-1-UM step: the OCBA-1 rule when `uniform_draw <= epsilon_t`,
/// otherwise the estimated best design.
pub fn ocba1um_step(state: &AllocationState, sigma: &[f64], gap_floor: f64, uniform_draw: f64) -> Result<StepDecision> {
    let epsilon = exploration_prob(state, sigma, gap_floor)?;
    if uniform_draw <= epsilon {
        Ok(explored(ocba1_step(state, sigma, 1, gap_floor)?, epsilon))
    } else {
        exploit(state, epsilon)
    }
}

/// OCBA-2-UM step: the OCBA-2 rule when `uniform_draw <= epsilon_t`,
/// otherwise the estimated best design.
pub fn ocba2um_step(state: &AllocationState, sigma: &[f64], gap_floor: f64, uniform_draw: f64) -> Result<StepDecision> {
    let epsilon = exploration_prob(state, sigma, gap_floor)?;
    if uniform_draw <= epsilon {
        Ok(explored(ocba2_step(state, sigma, 1)?, epsilon))
    } else {
        exploit(state, epsilon)
    }
}

/// Epsilon-Greedy step with the same `epsilon_t` schedule as the `-UM`
/// policies. The explore branch picks design `floor(uniform_design_draw * k)`
/// (clamped to `k - 1`).
pub fn eps_greedy_step(
    state: &AllocationState,
    sigma: &[f64],
    gap_floor: f64,
    uniform_draw: f64,
    uniform_design_draw: f64,
) -> Result<StepDecision> {
    let epsilon = exploration_prob(state, sigma, gap_floor)?;
    if uniform_draw <= epsilon {
        let k = state.k();
        let design = ((uniform_design_draw * k as f64) as usize).min(k - 1);
        Ok(explored(StepDecision::plain(design, Branch::Uniform, 1), epsilon))
    } else {
        exploit(state, epsilon)
    }
}

/// UCB1-Normal step.
///
/// With `n` the total number of samples so far: any design with fewer than
/// `ceil(8 ln n)` samples is sampled (lowest index first); otherwise the
/// design maximizing
/// `mean_i + sqrt(16 * (q_i - N_i mean_i^2) / (N_i - 1) * ln(n - 1) / N_i)`,
/// where `q_i` is the sum of squared samples.
pub fn ucb1_normal_step(state: &AllocationState) -> Result<StepDecision> {
    if state.t() == 0 {
        return Err(Error::IterationNotStarted);
    }
    let counts = state.counts();
    if let Some(i) = counts.iter().position(|&n| n < 2) {
        return Err(if counts[i] == 0 { Error::NoSamples(i) } else { Error::InitialSamplesTooFew(counts[i]) });
    }
    let n = state.total() as f64;
    let quota = libm::ceil(8.0 * libm::log(n));
    if let Some(i) = counts.iter().position(|&c| (c as f64) < quota) {
        return Ok(StepDecision::plain(i, Branch::Forced, 1));
    }
    let log_term = libm::log(n - 1.0);
    let index: Vec<f64> = (0..state.k())
        .map(|i| {
            let c = counts[i] as f64;
            let sum = state.sums()[i];
            let mean = sum / c;
            let spread = (state.sum_squares()[i] - sum * mean).max(0.0);
            mean + libm::sqrt(16.0 * spread / (c - 1.0) * log_term / c)
        })
        .collect();
    Ok(StepDecision::plain(argmax(index).expect("k >= 2"), Branch::Index, 1))
}
