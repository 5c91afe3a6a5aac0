//! Counter-based random substreams.
//!
//! Every random quantity is addressed by `(seed, purpose, trial, index)`.
//! A ChaCha8 stream is selected by `(purpose, trial)` and the index fixes
//! the word position, so a draw never depends on evaluation order or on how
//! trials are split across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 32-bit words reserved per index (two `u64` draws).
const WORDS_PER_INDEX: u128 = 4;

/// Separates unrelated consumers of the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Coefficients = 0,
    Angles = 1,
    Vectors = 2,
    Auxiliary = 3,
}

/// One substream: a fixed `(seed, purpose, trial)`.
#[derive(Clone)]
pub struct Substream {
    rng: ChaCha8Rng,
}

impl Substream {
    pub fn new(seed: u64, purpose: Purpose, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((purpose as u64) << 56) ^ trial);
        Self { rng }
    }

    /// Positions the stream at `index`; subsequent `pair` calls read
    /// `index, index + 1, ...` in order.
    pub fn seek(&mut self, index: u64) {
        self.rng.set_word_pos(index as u128 * WORDS_PER_INDEX);
    }

    /// The two uniforms in `(0, 1]` owned by the current index, then advances.
    pub fn pair(&mut self) -> (f64, f64) {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        (unit_open0(a), unit_open0(b))
    }

    /// The raw first word of the current index, then advances.
    pub fn raw_pair(&mut self) -> (u64, u64) {
        (self.rng.next_u64(), self.rng.next_u64())
    }

    /// Uniforms of a single index, independent of stream position.
    pub fn pair_at(&mut self, index: u64) -> (f64, f64) {
        self.seek(index);
        self.pair()
    }
}

/// Maps 53 high bits to `(0, 1]`.
fn unit_open0(x: u64) -> f64 {
    ((x >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
}
