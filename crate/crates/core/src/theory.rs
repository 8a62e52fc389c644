//! Optimal allocations and convergence-rate constants for Gaussian designs
//! with known variances.
//!
//! Two allocation targets are computed here:
//!
//! * `alpha_star` (OCBA-1): closed form `alpha_i = beta_i / sum_j beta_j` with
//!   `beta_j = sigma_j^2 / d_j^2` for non-best `j` and
//!   `beta_b = sigma_b * sqrt(sum_{j != b} sigma_j^2 / d_j^4)`, where `d_j` is
//!   the gap `mu_b - mu_j`.
//! * `alpha_star2` (OCBA-2): the unique allocation that balances
//!   `alpha_b^2 / sigma_b^2 = sum_{i != b} alpha_i^2 / sigma_i^2` and equalizes
//!   the pairwise rates `d_i^2 / (sigma_i^2 / alpha_i + sigma_b^2 / alpha_b)`.
//!   It has no closed form; see [`ocba2_allocation`] for the solver.
//!
//! Everything in this module is a pure function of its arguments.

use alloc::vec::Vec;

use crate::instance::MIN_GAP;
use crate::{Error, ProblemInstance, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Default residual tolerance for [`ocba2_allocation`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Outer (best-design share) bisection cap.
pub const OUTER_ITERATIONS: usize = 200;
/// Inner (common rate) bisection cap.
pub const INNER_ITERATIONS: usize = 100;

/// Standard normal CDF, computed as `erfc(-x / sqrt 2) / 2`.
///
/// `libm::erfc` is accurate to about one ulp, which keeps the absolute error
/// of the result below 1e-16 on the whole real line.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * core::f64::consts::FRAC_1_SQRT_2)
}

/// Gordon's bounds on the upper normal tail `1 - Phi(x) = Phi(-x)` for `x > 0`:
///
/// `x / ((1 + x^2) sqrt(2 pi)) e^{-x^2/2} <= Phi(-x) <= e^{-x^2/2} / (x sqrt(2 pi))`.
pub fn gordon_tail_bounds(x: f64) -> (f64, f64) {
    let density = libm::exp(-0.5 * x * x) / SQRT_2PI;
    (x / (1.0 + x * x) * density, density / x)
}

fn check_problem(mu: &[f64], sigma: &[f64], best: usize) -> Result<()> {
    if mu.len() != sigma.len() {
        return Err(Error::LengthMismatch { mu: mu.len(), sigma: sigma.len() });
    }
    if mu.len() < 2 {
        return Err(Error::TooFewDesigns(mu.len()));
    }
    if best >= mu.len() {
        return Err(Error::DesignOutOfRange { index: best, k: mu.len() });
    }
    if let Some((index, &value)) =
        sigma.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s > 0.0))
    {
        return Err(Error::InvalidSigma { index, value });
    }
    for (index, &m) in mu.iter().enumerate() {
        if index != best {
            let gap = mu[best] - m;
            if gap.is_nan() || gap < MIN_GAP {
                return Err(Error::GapTooSmall { index, gap });
            }
        }
    }
    Ok(())
}

/// Unnormalized OCBA-1 weights `beta_i`.
///
/// Callers must have validated the problem; gaps are used as given.
pub(crate) fn ocba1_weights(mu: &[f64], sigma: &[f64], best: usize, gap_floor: f64) -> Vec<f64> {
    let mut beta = Vec::with_capacity(mu.len());
    let mut quartic = 0.0;
    for (j, (&m, &s)) in mu.iter().zip(sigma).enumerate() {
        if j == best {
            beta.push(0.0);
            continue;
        }
        let gap = (mu[best] - m).max(gap_floor);
        let d2 = gap * gap;
        let s2 = s * s;
        beta.push(s2 / d2);
        quartic += s2 / (d2 * d2);
    }
    beta[best] = sigma[best] * libm::sqrt(quartic);
    beta
}

/// OCBA-1 target allocation (closed form).
pub fn ocba1_allocation(mu: &[f64], sigma: &[f64], best: usize) -> Result<Vec<f64>> {
    check_problem(mu, sigma, best)?;
    let beta = ocba1_weights(mu, sigma, best, 0.0);
    let total: f64 = beta.iter().sum();
    Ok(beta.into_iter().map(|b| b / total).collect())
}

/// Relative residuals of an allocation against the OCBA-1 conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ocba1Residuals {
    /// `|alpha_b^2/sigma_b^2 - sum alpha_i^2/sigma_i^2|`, relative to the first term.
    pub balance: f64,
    /// Spread of `alpha_i d_i^2 / sigma_i^2` over non-best designs, relative to
    /// its maximum. Zero iff every ratio equation `n_i/n_j = ...` holds.
    pub ratio: f64,
}

/// Substitutes `alpha` into both OCBA-1 optimality equations.
pub fn ocba1_residuals(mu: &[f64], sigma: &[f64], best: usize, alpha: &[f64]) -> Result<Ocba1Residuals> {
    check_problem(mu, sigma, best)?;
    check_alpha(alpha, mu.len())?;
    let (lo, hi) = non_best(mu.len(), best)
        .map(|i| {
            let d = mu[best] - mu[i];
            alpha[i] * d * d / (sigma[i] * sigma[i])
        })
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c), hi.max(c)));
    Ok(Ocba1Residuals { balance: balance_residual(sigma, best, alpha), ratio: (hi - lo) / hi })
}

fn balance_residual(sigma: &[f64], best: usize, alpha: &[f64]) -> f64 {
    let lead = alpha[best] * alpha[best] / (sigma[best] * sigma[best]);
    let rest: f64 = non_best(alpha.len(), best).map(|i| alpha[i] * alpha[i] / (sigma[i] * sigma[i])).sum();
    (lead - rest).abs() / lead
}

fn non_best(k: usize, best: usize) -> impl Iterator<Item = usize> {
    (0..k).filter(move |&i| i != best)
}

fn check_alpha(alpha: &[f64], k: usize) -> Result<()> {
    if alpha.len() != k {
        return Err(Error::InvalidAllocation("length differs from number of designs"));
    }
    if alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidAllocation("every component must be positive"));
    }
    Ok(())
}

/// Pairwise large-deviations rate of design `i` against the best design
/// under allocation `alpha`: `d_i^2 / (sigma_i^2/alpha_i + sigma_b^2/alpha_b)`.
fn pairwise_rate(mu: &[f64], sigma: &[f64], best: usize, alpha: &[f64], i: usize) -> f64 {
    let d = mu[best] - mu[i];
    d * d / (sigma[i] * sigma[i] / alpha[i] + sigma[best] * sigma[best] / alpha[best])
}

/// Relative residuals of an allocation against the OCBA-2 conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ocba2Residuals {
    /// Balance equation residual, relative to `alpha_b^2 / sigma_b^2`.
    pub balance: f64,
    /// Spread of the pairwise rates over non-best designs, relative to the
    /// largest rate.
    pub rate: f64,
    /// `|sum alpha - 1|`.
    pub sum: f64,
}

impl Ocba2Residuals {
    /// Largest of the three residuals.
    pub fn max(&self) -> f64 {
        self.balance.max(self.rate).max(self.sum)
    }
}

/// Substitutes `alpha` into the OCBA-2 optimality equations.
pub fn ocba2_residuals(mu: &[f64], sigma: &[f64], best: usize, alpha: &[f64]) -> Result<Ocba2Residuals> {
    check_problem(mu, sigma, best)?;
    check_alpha(alpha, mu.len())?;
    let (lo, hi) = non_best(mu.len(), best)
        .map(|i| pairwise_rate(mu, sigma, best, alpha, i))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    Ok(Ocba2Residuals {
        balance: balance_residual(sigma, best, alpha),
        rate: (hi - lo) / hi,
        sum: (alpha.iter().sum::<f64>() - 1.0).abs(),
    })
}

/// Non-best shares that equalize every pairwise rate at `rate` given the
/// best design's share `lead`. Each `alpha_i` is the explicit inverse of
/// the monotone map `alpha_i -> d_i^2 / (sigma_i^2/alpha_i + sigma_b^2/lead)`.
fn shares_at_rate(mu: &[f64], sigma: &[f64], best: usize, lead: f64, rate: f64, out: &mut [f64]) {
    let sb2 = sigma[best] * sigma[best];
    for i in non_best(mu.len(), best) {
        let d = mu[best] - mu[i];
        out[i] = sigma[i] * sigma[i] / (d * d / rate - sb2 / lead);
    }
    out[best] = lead;
}

/// Finds the common rate at which the non-best shares sum to `1 - lead`.
fn solve_rate(mu: &[f64], sigma: &[f64], best: usize, lead: f64, buf: &mut [f64]) -> f64 {
    let sb2 = sigma[best] * sigma[best];
    // Rates at or above this make some alpha_i infinite.
    let ceiling = non_best(mu.len(), best)
        .map(|i| {
            let d = mu[best] - mu[i];
            d * d * lead / sb2
        })
        .fold(f64::INFINITY, f64::min);
    let target = 1.0 - lead;
    let (mut lo, mut hi) = (0.0, ceiling);
    for _ in 0..INNER_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        shares_at_rate(mu, sigma, best, lead, mid, buf);
        let rest: f64 = non_best(mu.len(), best).map(|i| buf[i]).sum();
        if rest < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// OCBA-2 target allocation.
///
/// Parametrizes the solution by the best design's share `alpha_b` and the
/// common pairwise rate `gamma`. For fixed `alpha_b`, each non-best share is
/// increasing in `gamma`, so bisection on `gamma` makes the shares sum to
/// one; the balance residual then changes sign exactly once over
/// `alpha_b in (0, 1)`, and an outer bisection locates it. Both levels are
/// capped ([`OUTER_ITERATIONS`], [`INNER_ITERATIONS`]) and stop early once
/// the bracket can no longer shrink in double precision.
///
/// Returns [`Error::SolverDidNotConverge`] if the final residuals exceed
/// `tol`.
pub fn ocba2_allocation(mu: &[f64], sigma: &[f64], best: usize, tol: f64) -> Result<Vec<f64>> {
    check_problem(mu, sigma, best)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance);
    }
    let k = mu.len();
    let mut alpha = alloc::vec![0.0; k];
    let excess = |lead: f64, alpha: &mut [f64]| {
        let rate = solve_rate(mu, sigma, best, lead, alpha);
        shares_at_rate(mu, sigma, best, lead, rate, alpha);
        let rest: f64 = non_best(k, best).map(|i| alpha[i] * alpha[i] / (sigma[i] * sigma[i])).sum();
        lead * lead / (sigma[best] * sigma[best]) - rest
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..OUTER_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid, &mut alpha) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    excess(0.5 * (lo + hi), &mut alpha);
    // Uniform rescaling preserves both the balance and the rate equalities.
    let total: f64 = alpha.iter().sum();
    alpha.iter_mut().for_each(|a| *a /= total);

    let residual = match ocba2_residuals(mu, sigma, best, &alpha) {
        Ok(r) => r.max(),
        Err(_) => f64::INFINITY,
    };
    if residual < tol {
        Ok(alpha)
    } else {
        Err(Error::SolverDidNotConverge { residual })
    }
}

/// KL divergence between `N(mu_i, sigma_i^2)` and `N(mu_b, sigma_b^2)`:
/// `((mu_i - mu_b)^2 + sigma_i^2) / (2 sigma_b^2) + ln(sigma_b / sigma_i) - 1/2`.
pub fn gaussian_kl(mu_i: f64, sigma_i: f64, mu_b: f64, sigma_b: f64) -> Result<f64> {
    if !(sigma_i.is_finite() && sigma_i > 0.0) {
        return Err(Error::InvalidSigma { index: 0, value: sigma_i });
    }
    if !(sigma_b.is_finite() && sigma_b > 0.0) {
        return Err(Error::InvalidSigma { index: 1, value: sigma_b });
    }
    Ok(kl_unchecked(mu_i, sigma_i, mu_b, sigma_b))
}

pub(crate) fn kl_unchecked(mu_i: f64, sigma_i: f64, mu_b: f64, sigma_b: f64) -> f64 {
    let d = mu_i - mu_b;
    (d * d + sigma_i * sigma_i) / (2.0 * sigma_b * sigma_b) + libm::log(sigma_b / sigma_i) - 0.5
}

/// Exponential rate `eta = min_{i != b} d_i^2 Delta / (sigma_i^2/alpha_i + sigma_b^2/alpha_b)`.
///
/// `PFS_t` and `EOC_t` decay like `exp(-eta t / 2)` when the empirical
/// allocation converges to `alpha`.
pub fn rate_constant(instance: &ProblemInstance, alpha: &[f64], delta: u64) -> Result<f64> {
    check_alpha(alpha, instance.k())?;
    if delta == 0 {
        return Err(Error::ZeroDelta);
    }
    let (mu, sigma, best) = (instance.mu(), instance.sigma(), instance.best());
    let min = instance
        .non_best()
        .map(|i| pairwise_rate(mu, sigma, best, alpha, i))
        .fold(f64::INFINITY, f64::min);
    Ok(min * delta as f64)
}

/// Slope of the linear cumulative regret of a policy whose allocation
/// converges to `alpha`: `sum_{i != b} d_i alpha_i Delta`.
pub fn linear_regret_rate(instance: &ProblemInstance, alpha: &[f64], delta: u64) -> Result<f64> {
    check_alpha(alpha, instance.k())?;
    Ok(instance.non_best().map(|i| instance.gap(i) * alpha[i]).sum::<f64>() * delta as f64)
}

/// Constants governing the regret-oriented (`-UM`) policies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmConstants {
    /// `h* = (sum_{i != b} d_i / kl_{i,b}) / (sum_{i != b} alpha*_i d_i)`.
    pub h_star: f64,
    /// `rho* = h* / sum_i beta_i`; PFS decays like `t^{-rho*/2}`.
    pub rho_star: f64,
    /// Lai–Robbins constant `sum_{i != b} d_i / kl_{i,b}`.
    pub lai_robbins_const: f64,
}

/// Computes [`UmConstants`] for an instance.
pub fn um_constants(instance: &ProblemInstance) -> UmConstants {
    let (mu, sigma, best) = (instance.mu(), instance.sigma(), instance.best());
    let beta = ocba1_weights(mu, sigma, best, 0.0);
    let beta_sum: f64 = beta.iter().sum();
    let mut lai_robbins = 0.0;
    let mut weighted_gap = 0.0;
    for i in instance.non_best() {
        let d = instance.gap(i);
        lai_robbins += d / kl_unchecked(mu[i], sigma[i], mu[best], sigma[best]);
        weighted_gap += beta[i] / beta_sum * d;
    }
    let h_star = lai_robbins / weighted_gap;
    UmConstants { h_star, rho_star: h_star / beta_sum, lai_robbins_const: lai_robbins }
}

/// `P(sample mean of b < sample mean of i)` with `n_i`, `n_b` samples:
/// `Phi(-gap / sqrt(sigma_i^2/n_i + sigma_b^2/n_b))`.
pub fn pairwise_false_prob(gap: f64, sigma_i: f64, sigma_b: f64, n_i: u64, n_b: u64) -> Result<f64> {
    if n_i == 0 {
        return Err(Error::NoSamples(0));
    }
    if n_b == 0 {
        return Err(Error::NoSamples(1));
    }
    if !(sigma_i.is_finite() && sigma_i > 0.0) {
        return Err(Error::InvalidSigma { index: 0, value: sigma_i });
    }
    if !(sigma_b.is_finite() && sigma_b > 0.0) {
        return Err(Error::InvalidSigma { index: 1, value: sigma_b });
    }
    let scale = libm::sqrt(sigma_i * sigma_i / n_i as f64 + sigma_b * sigma_b / n_b as f64);
    Ok(normal_cdf(-gap / scale))
}

/// Bonferroni bounds on the false-selection probability of a static
/// allocation: `max_i p_i <= PFS <= (k - 1) max_i p_i`, where `p_i` is the
/// pairwise probability that design `i` beats the best design.
///
/// The upper bound is not clipped to 1.
pub fn pfs_bounds(instance: &ProblemInstance, counts: &[u64]) -> Result<(f64, f64)> {
    if counts.len() != instance.k() {
        return Err(Error::InvalidAllocation("counts length differs from number of designs"));
    }
    if let Some(i) = counts.iter().position(|&n| n == 0) {
        return Err(Error::NoSamples(i));
    }
    let (sigma, best) = (instance.sigma(), instance.best());
    let mut worst = 0.0f64;
    for i in instance.non_best() {
        let p = pairwise_false_prob(instance.gap(i), sigma[i], sigma[best], counts[i], counts[best])?;
        worst = worst.max(p);
    }
    Ok((worst, (instance.k() - 1) as f64 * worst))
}

/// Theoretical targets for one instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoryReport {
    /// OCBA-1 allocation.
    pub alpha_star: Vec<f64>,
    /// OCBA-2 (rate-optimal) allocation.
    pub alpha_star2: Vec<f64>,
    /// PFS/EOC rate constant of OCBA-1.
    pub eta_star: f64,
    /// PFS/EOC rate constant of OCBA-2.
    pub eta_star2: f64,
    /// `kl_{i,b}` for every non-best design, in index order.
    pub kl: Vec<f64>,
    /// Exploration scale of the `-UM` policies.
    pub h_star: f64,
    /// Polynomial PFS exponent of the `-UM` policies.
    pub rho_star: f64,
    /// Lai–Robbins regret constant.
    pub lai_robbins_const: f64,
}

impl TheoryReport {
    /// Evaluates every constant for `instance` with batch size `delta`.
    pub fn compute(instance: &ProblemInstance, delta: u64) -> Result<Self> {
        let (mu, sigma, best) = (instance.mu(), instance.sigma(), instance.best());
        let alpha_star = ocba1_allocation(mu, sigma, best)?;
        let alpha_star2 = ocba2_allocation(mu, sigma, best, DEFAULT_TOLERANCE)?;
        let eta_star = rate_constant(instance, &alpha_star, delta)?;
        let eta_star2 = rate_constant(instance, &alpha_star2, delta)?;
        let kl = instance
            .non_best()
            .map(|i| kl_unchecked(mu[i], sigma[i], mu[best], sigma[best]))
            .collect();
        let um = um_constants(instance);
        Ok(Self {
            alpha_star,
            alpha_star2,
            eta_star,
            eta_star2,
            kl,
            h_star: um.h_star,
            rho_star: um.rho_star,
            lai_robbins_const: um.lai_robbins_const,
        })
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::instance::{decreasing_variances, increasing_variances, make_instance};
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    /// Phi(x) values evaluated with 40-digit arithmetic.
    const PHI_FIXTURE: [(f64, f64); 11] = [
        (-8.0, 6.2209605742717841235e-16),
        (-5.0, 2.8665157187919391167e-7),
        (-3.0, 0.0013498980316300945267),
        (-1.0, 0.15865525393145705141),
        (-0.5, 0.30853753872598689636),
        (0.0, 0.5),
        (0.5, 0.69146246127401310364),
        (1.0, 0.84134474606854294859),
        (2.0, 0.9772498680518207928),
        (3.0, 0.99865010196836990547),
        (6.0, 0.99999999901341235496),
    ];

    #[test]
    fn normal_cdf_matches_high_precision() {
        for (x, want) in PHI_FIXTURE {
            let got = normal_cdf(x);
            assert!((got - want).abs() <= 1e-15, "Phi({x}) = {got}, want {want}");
            assert!(close(got, want, 1e-13), "relative error at {x}");
        }
    }

    #[test]
    fn gordon_bounds_sandwich_tail() {
        let mut x = 0.05;
        while x < 30.0 {
            let (lo, hi) = gordon_tail_bounds(x);
            let tail = normal_cdf(-x);
            assert!(lo <= tail && tail <= hi, "x = {x}: {lo} <= {tail} <= {hi}");
            x *= 1.1;
        }
    }

    #[test]
    fn ocba1_two_design_cases() {
        let a = ocba1_allocation(&[0.0, 1.0], &[1.0, 1.0], 1).unwrap();
        assert!(close(a[0], 0.5, 1e-15) && close(a[1], 0.5, 1e-15));
        let a = ocba1_allocation(&[0.0, 1.0], &[1.0, 2.0], 1).unwrap();
        assert!(close(a[0], 1.0 / 3.0, 1e-15) && close(a[1], 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn ocba1_instance1_fixture() {
        // Closed form evaluated with 40-digit arithmetic.
        let want = [
            6.20301090473082e-5,
            0.000314027427051998,
            0.00092285611215281,
            0.0022330839257031,
            0.00502443883283197,
            0.0113049873738719,
            0.0273552780898629,
            0.0803910213253115,
            0.406979545459389,
            0.465412731344777,
        ];
        let inst = increasing_variances();
        let a = ocba1_allocation(inst.mu(), inst.sigma(), inst.best()).unwrap();
        for (got, want) in a.iter().zip(want) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
        let r = ocba1_residuals(inst.mu(), inst.sigma(), inst.best(), &a).unwrap();
        assert!(r.balance < 1e-10 && r.ratio < 1e-10, "{r:?}");
    }

    #[test]
    fn ocba1_rejects_ties() {
        assert!(matches!(
            ocba1_allocation(&[1.0, 1.0], &[1.0, 1.0], 1),
            Err(Error::GapTooSmall { index: 0, .. })
        ));
        assert!(matches!(
            ocba1_allocation(&[0.0, 1.0, 1.0 - 1e-13], &[1.0; 3], 1),
            Err(Error::GapTooSmall { index: 2, .. })
        ));
    }

    #[test]
    fn ocba2_symmetric_two_designs() {
        let a = ocba2_allocation(&[0.0, 1.0], &[1.0, 1.0], 1, 1e-10).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-12 && (a[1] - 0.5).abs() < 1e-12, "{a:?}");
    }

    #[test]
    fn ocba2_instance_fixtures() {
        // Root of the optimality system found with a 40-digit Newton solve.
        let inst1 = [
            3.19223117301392e-5,
            0.000161886790241922,
            0.000476954642486864,
            0.00115863666114288,
            0.00262399177374565,
            0.00597597145001905,
            0.0148516249942597,
            0.0473022843775603,
            0.437320256927725,
            0.490096470071088,
        ];
        let inst2 = [
            0.0575186207178432,
            0.0590277092362383,
            0.0610102497489571,
            0.063729976155513,
            0.0676906062662329,
            0.0739881697976237,
            0.085538684568706,
            0.11348505328941,
            0.272869287857548,
            0.145141642361927,
        ];
        for (inst, want) in [(increasing_variances(), inst1), (decreasing_variances(), inst2)] {
            let a = ocba2_allocation(inst.mu(), inst.sigma(), inst.best(), 1e-10).unwrap();
            for (got, want) in a.iter().zip(want) {
                assert!(close(*got, want, 1e-10), "{got} vs {want}");
            }
            let r = ocba2_residuals(inst.mu(), inst.sigma(), inst.best(), &a).unwrap();
            assert!(r.max() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn ocba2_rejects_bad_tolerance() {
        assert_eq!(ocba2_allocation(&[0.0, 1.0], &[1.0, 1.0], 1, 0.0), Err(Error::InvalidTolerance));
    }

    #[test]
    fn kl_values() {
        assert_eq!(gaussian_kl(0.3, 1.7, 0.3, 1.7).unwrap(), 0.0);
        assert!(close(gaussian_kl(1.0, 1.0, 0.0, 1.0).unwrap(), 0.5, 1e-15));
        assert!(close(gaussian_kl(0.0, 2.0, 0.0, 1.0).unwrap(), 1.5 - core::f64::consts::LN_2, 1e-15));
        assert!(gaussian_kl(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(gaussian_kl(0.0, 1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn rate_constant_values() {
        let inst = make_instance(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(close(rate_constant(&inst, &[0.5, 0.5], 1).unwrap(), 0.25, 1e-15));
        assert!(close(rate_constant(&inst, &[0.5, 0.5], 4).unwrap(), 1.0, 1e-15));
        assert!(rate_constant(&inst, &[0.0, 1.0], 1).is_err());
        assert_eq!(rate_constant(&inst, &[0.5, 0.5], 0), Err(Error::ZeroDelta));
    }

    #[test]
    fn ocba2_rate_dominates_ocba1() {
        for inst in [increasing_variances(), decreasing_variances()] {
            let r = TheoryReport::compute(&inst, 1).unwrap();
            assert!(r.eta_star2 >= r.eta_star);
        }
    }

    #[test]
    fn um_constants_two_designs() {
        let inst = make_instance(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let c = um_constants(&inst);
        assert!(close(c.lai_robbins_const, 2.0, 1e-15));
        assert!(close(c.h_star, 4.0, 1e-15));
        // sum beta = 2
        assert!(close(c.rho_star, 2.0, 1e-15));
    }

    #[test]
    fn um_constants_instance1_fixture() {
        let c = um_constants(&increasing_variances());
        assert!(close(c.lai_robbins_const, 168.783207855524, 1e-12));
        assert!(close(c.h_star, 227.134351459726, 1e-12));
        assert!(close(c.rho_star, 1.14122265574435, 1e-12));
    }

    #[test]
    fn um_constants_shift_invariant() {
        let a = make_instance(vec![0.0, 0.7, 2.0], vec![1.0, 0.5, 2.0]).unwrap();
        let b = make_instance(vec![100.0, 100.7, 102.0], vec![1.0, 0.5, 2.0]).unwrap();
        let (ca, cb) = (um_constants(&a), um_constants(&b));
        assert!(close(ca.h_star, cb.h_star, 1e-9));
        assert!(close(ca.lai_robbins_const, cb.lai_robbins_const, 1e-9));
        assert!(close(ca.rho_star, cb.rho_star, 1e-9));
    }

    #[test]
    fn pairwise_probabilities() {
        assert_eq!(pairwise_false_prob(0.0, 1.0, 2.0, 3, 4).unwrap(), 0.5);
        assert!(pairwise_false_prob(1e3, 1.0, 1.0, 10, 10).unwrap() < 1e-300);
        let p = pairwise_false_prob(1.0, 1.0, 1.0, 2, 2).unwrap();
        assert!((p - 0.15865525393145705141).abs() < 1e-15);
        assert!(pairwise_false_prob(1.0, 1.0, 1.0, 0, 2).is_err());
    }

    #[test]
    fn pfs_bounds_values() {
        let two = make_instance(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let (lo, hi) = pfs_bounds(&two, &[2, 2]).unwrap();
        assert_eq!(lo, hi);

        let inst = increasing_variances();
        let (lo, hi) = pfs_bounds(&inst, &[100; 10]).unwrap();
        assert!(close(lo, 0.22865180742266353, 1e-13));
        assert!(close(hi, 2.0578662668039718, 1e-13));
        let (lo2, hi2) = pfs_bounds(&inst, &[200; 10]).unwrap();
        assert!(lo2 < lo && hi2 < hi);
        assert!(pfs_bounds(&inst, &[0; 10]).is_err());
    }
}
