//! Seeded random streams and Gaussian sample generation.
//!
//! Every replication owns one [`SampleStream`]: a ChaCha8 generator whose key
//! is expanded from the master seed (via `SeedableRng::seed_from_u64`) and
//! whose 64-bit stream id is the replication index. Streams for different
//! replications are therefore disjoint and each one is a pure function of
//! `(master_seed, replication_index)`.
//!
//! Call order within a stream:
//!
//! * [`SampleStream::uniform`] consumes one `u64` and returns
//!   `(x >> 11) * 2^-53`, a value in `[0, 1)`.
//! * [`SampleStream::standard_normal`] consumes two `u64` (`u1`, then `u2`,
//!   both mapped as above) and returns the Box–Muller cosine variate
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`. The sine partner is discarded so
//!   every draw costs the same amount of stream state.
//!
//! Transcendentals come from `libm`, a pure-Rust port of the FreeBSD math
//! library, so the variates do not depend on the platform C library.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, ProblemInstance, Result};

/// Identifies the random stream of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeedSpec {
    /// Experiment-wide seed.
    pub master_seed: u64,
    /// Replication number within the experiment.
    pub replication_index: u64,
}

impl SeedSpec {
    /// Seed for replication `replication_index` under `master_seed`.
    pub fn new(master_seed: u64, replication_index: u64) -> Self {
        Self { master_seed, replication_index }
    }
}

/// Deterministic source of uniforms and Gaussian variates.
#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

impl SampleStream {
    /// Opens the stream identified by `seed`.
    pub fn new(seed: SeedSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.replication_index);
        Self { rng }
    }

    /// Uniform variate in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Standard normal variate (Box–Muller, cosine branch).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(1.0 - u1)) * libm::cos(core::f64::consts::TAU * u2)
    }
}

/// One `N(mu[design], sigma[design]^2)` sample.
pub fn draw_sample(instance: &ProblemInstance, design: usize, stream: &mut SampleStream) -> Result<f64> {
    if design >= instance.k() {
        return Err(Error::DesignOutOfRange { index: design, k: instance.k() });
    }
    Ok(instance.mu()[design] + instance.sigma()[design] * stream.standard_normal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::make_instance;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_sequence() {
        let seed = SeedSpec::new(42, 7);
        let mut a = SampleStream::new(seed);
        let mut b = SampleStream::new(seed);
        let xs: Vec<f64> = (0..100).map(|_| a.standard_normal()).collect();
        let ys: Vec<f64> = (0..100).map(|_| b.standard_normal()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn replications_get_distinct_streams() {
        let mut a = SampleStream::new(SeedSpec::new(42, 0));
        let mut b = SampleStream::new(SeedSpec::new(42, 1));
        let mut c = SampleStream::new(SeedSpec::new(43, 0));
        let x = a.uniform();
        assert_ne!(x, b.uniform());
        assert_ne!(x, c.uniform());
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut s = SampleStream::new(SeedSpec::new(1, 0));
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn out_of_range_design() {
        let inst = make_instance(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let mut s = SampleStream::new(SeedSpec::new(1, 0));
        assert_eq!(draw_sample(&inst, 2, &mut s), Err(Error::DesignOutOfRange { index: 2, k: 2 }));
    }

    #[test]
    fn empirical_moments_match_instance() {
        // 1e6 draws per design: mean within 5 sigma / 1e3 (five standard errors).
        let inst = make_instance(vec![-3.0, 0.5, 10.0], vec![0.5, 2.0, 7.0]).unwrap();
        let mut s = SampleStream::new(SeedSpec::new(2024, 3));
        for design in 0..inst.k() {
            let n = 1_000_000;
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..n {
                let x = draw_sample(&inst, design, &mut s).unwrap();
                sum += x;
                sq += x * x;
            }
            let mean = sum / n as f64;
            let var = sq / n as f64 - mean * mean;
            let sigma = inst.sigma()[design];
            assert!((mean - inst.mu()[design]).abs() < 5.0 * sigma / 1e3, "design {design}: {mean}");
            assert!((var / (sigma * sigma) - 1.0).abs() < 0.01, "design {design}: var {var}");
        }
    }
}
