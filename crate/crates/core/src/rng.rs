//! Seed derivation. Every stochastic component draws from its own ChaCha
//! stream keyed by `(global seed, labels...)`, so results do not depend on
//! the order in which parallel work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a global seed with a path of stream labels into a child seed.
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(splitmix64(seed), |acc, &l| splitmix64(acc ^ splitmix64(l)))
}

pub fn rng_for(seed: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, labels))
}

/// Stream labels, kept in one place so no two components collide.
pub mod stream {
    pub const MODEL_INIT: u64 = 1;
    pub const PARTITION: u64 = 2;
    pub const POISON: u64 = 3;
    pub const LOCAL_SHUFFLE: u64 = 4;
    pub const CLIENT_SAMPLING: u64 = 5;
    pub const AUXILIARY: u64 = 6;
    pub const DATA_TRAIN: u64 = 7;
    pub const DATA_TEST: u64 = 8;
    pub const DATA_CENTERS: u64 = 9;
}
