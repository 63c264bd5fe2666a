//! Seeded randomness.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded through
//! `seed_from_u64`. ChaCha is counter based and its output is specified
//! independently of platform and word size, so traces recorded on one
//! machine replay bit for bit on another. Independent replicas draw their
//! seeds from [`derive_seed`], a SplitMix64 mix of the parent seed and the
//! replica index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for the `stream`-th independent replica of a run seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5851_f42d_4c95_7f2d)))
}
