//! Reproducible random streams.
//!
//! Every sampler draws from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`; independent substreams select the ChaCha stream id.
//! The generator is platform independent, so a `(seed, stream)` pair always
//! yields the same sequence.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::special::norm_quantile_unchecked;

/// Seeded uniform / normal source.
#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha20Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent substream `index` of `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { inner }
    }

    /// Uniform on the open interval `(0, 1)`, 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by inversion.
    pub fn normal(&mut self) -> f64 {
        norm_quantile_unchecked(self.uniform())
    }
}

/// A reproducible batch of draws.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn new(seed: u64, values: Vec<f64>) -> Self {
        Self {
            seed,
            count: values.len(),
            values,
        }
    }
}
