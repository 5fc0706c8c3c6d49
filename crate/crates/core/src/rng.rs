//! Seeded random streams.
//!
//! Every consumer of randomness draws from its own ChaCha stream keyed by
//! the user seed and a fixed stream id, so adding draws to one consumer never
//! shifts the values another consumer sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_LOCATION: u64 = 1;
pub const STREAM_LABEL: u64 = 2;
pub const STREAM_METADATA: u64 = 3;
pub const STREAM_SWING: u64 = 4;
pub const STREAM_START_JITTER: u64 = 16;
pub const STREAM_BOOTSTRAP: u64 = 32;

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// SplitMix64 finalizer; derives well-separated child seeds from
/// `(seed, index)` pairs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
