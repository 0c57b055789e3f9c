//! Seedable deterministic randomness with named substreams.
//!
//! Every random decision in this crate flows through [`Rng`], keyed by a
//! `(seed, stream)` pair. Two generators built with the same pair emit the
//! same sequence forever, which is what makes datasets, training runs and
//! samplers reproducible sample-by-sample.

use crate::error::{Error, Result};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic PRNG: a ChaCha8 generator on a dedicated stream.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    /// Generator for the given `(seed, stream)` pair.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        // 53 mantissa bits of a u64, standard float-in-unit-interval trick.
        (self.inner.gen::<u64>() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn index(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::EmptySelectionSet);
        }
        Ok(self.inner.gen_range(0..n))
    }

    /// Standard normal draw.
    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform draw from `[-bound, bound)`.
    pub fn uniform_symmetric(&mut self, bound: f64) -> f64 {
        (self.uniform() * 2.0 - 1.0) * bound
    }

    /// Uniform choice from a candidate set of sample indices.
    ///
    /// The candidates are sorted before drawing so the outcome does not
    /// depend on the order the caller assembled them in.
    pub fn choice(&mut self, candidates: &[usize]) -> Result<usize> {
        if candidates.is_empty() {
            return Err(Error::EmptySelectionSet);
        }
        let mut sorted = candidates.to_vec();
        sorted.sort_unstable();
        let idx = self.index(sorted.len())?;
        Ok(sorted[idx])
    }
}
