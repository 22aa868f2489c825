use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A 64-bit seed. Expanded to a ChaCha8 key as its little-endian bytes
/// followed by 24 zero bytes, so streams are fixed across platforms and
/// crate versions that keep the ChaCha8 output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed for sub-run `k`, via one SplitMix64 step from the master seed.
    pub fn derive(self, k: u64) -> RngSeed {
        let mut z = self.0.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }
}

/// Uniform draws in `[0, 1)` with 53-bit resolution: `(next_u64 >> 11)·2⁻⁵³`.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: RngSeed) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.0.to_le_bytes());
        RngStream { rng: ChaCha8Rng::from_seed(key), draws: 0 }
    }

    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// How many uniforms have been drawn so far.
    pub fn position(&self) -> u64 {
        self.draws
    }
}
