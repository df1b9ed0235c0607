//! Seeded randomness shared by every sampler in the crate.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded through `SeedableRng::seed_from_u64`.
//! A given seed reproduces the same stream on every platform for a fixed
//! version of `rand_chacha`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
