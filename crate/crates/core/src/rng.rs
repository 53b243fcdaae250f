//! Reproducible random streams.
//!
//! Every random choice in the crate is drawn from ChaCha8 keyed by a master
//! seed (expanded with `SeedableRng::seed_from_u64`) and a 64-bit stream id.
//! Trial `t` of a run always uses stream `t`, so any trial can be replayed on
//! its own.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A `(master seed, stream)` pair naming one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    /// The stream used for trial `index` of a multi-trial run.
    pub fn trial(master: u64, index: u64) -> Self {
        Seed { master, stream: index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Uniform draw from `[0, 1)` using the top 53 bits of one `u64`.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw from `[0, bound)` by rejection, `bound >= 1`.
pub fn below(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}
