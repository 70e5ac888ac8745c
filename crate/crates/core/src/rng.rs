//! Seed plumbing. Every random stream is a ChaCha8 generator keyed by the
//! master seed, with an independent stream per sub-task index, so results
//! do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for sub-task `index` of the run seeded by `master`.
pub fn sub_rng(master: u64, index: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(index.wrapping_add(1));
    r
}

/// A plain `u64` seed for sub-task `index`: the first output of
/// `sub_rng(master, index)`. For APIs that take a seed rather than a stream.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    use rand::RngCore;
    sub_rng(master, index).next_u64()
}
