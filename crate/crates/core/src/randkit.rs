//! Seeded, splittable random streams and the scalar distributions the samplers
//! draw from.
//!
//! Reproducibility contract: the k-th draw from the stream identified by
//! `(master_seed, stream_id)` is the same in every run, regardless of worker
//! count or scheduling. Estimators derive one stream per Monte Carlo sample
//! (stream_id = sample index), so partial results merge into the same numbers
//! no matter how the budget was split across threads.
//!
//! Streams are ChaCha8 keystreams: the master seed is expanded into the cipher
//! key and the stream id is placed in the counter's stream word, so distinct
//! ids select disjoint portions of a single >= 2^128 period.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Generator family recorded in run manifests.
pub const GENERATOR: &str = "chacha8";

#[derive(Debug, PartialEq, thiserror::Error)]
pub enum RandError {
    #[error("standard deviation must be finite and nonnegative, got {0}")]
    BadStdDev(f64),
    #[error("chi parameter must be finite and positive, got {0}")]
    BadChiParameter(f64),
}

/// One independent substream of the master generator.
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self { master_seed, stream_id, rng }
    }

    #[must_use]
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    #[must_use]
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform draw on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Standard normal draw (ziggurat).
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// N(mean, sd²). `sd = 0` returns `mean` exactly.
    pub fn sample_gaussian(&mut self, mean: f64, sd: f64) -> Result<f64, RandError> {
        if !(sd.is_finite() && sd >= 0.0) {
            return Err(RandError::BadStdDev(sd));
        }
        Ok(mean + sd * self.standard_normal())
    }

    /// Chi draw with parameter `r > 0` (not necessarily an integer): the square
    /// root of a gamma(r/2, scale 2) variate. Small shapes r/2 < 1 are handled
    /// by the sampler's shape-boost path, so arbitrarily small r is fine.
    pub fn sample_chi(&mut self, r: f64) -> Result<f64, RandError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(RandError::BadChiParameter(r));
        }
        let gamma = Gamma::new(0.5 * r, 2.0).map_err(|_| RandError::BadChiParameter(r))?;
        Ok(gamma.sample(&mut self.rng).sqrt())
    }
}
