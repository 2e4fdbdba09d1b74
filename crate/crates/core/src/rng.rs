//! Seeded random streams.
//!
//! Every consumer derives its generator from a `(seed, stream)` pair, so runs
//! are reproducible regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream ids used inside a single solver run.
pub const STREAM_GRADIENT: u64 = 1;
pub const STREAM_PROX: u64 = 2;

pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for trial `index` of a Monte-Carlo batch rooted at `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
