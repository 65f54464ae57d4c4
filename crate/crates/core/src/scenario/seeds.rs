//! Reproducible random streams.
//!
//! Every `(run, node)` pair gets its own stream, derived from the master seed
//! by chaining the splitmix64 finalizer over the coordinates. Streams do not
//! depend on scheduling, so parallel and serial executions agree bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The splitmix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `(run, node)` under `master`.
pub fn derive_seed(master: u64, run: u64, node: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ run) ^ node)
}

/// Stream reserved for ground truth.
pub const TRUTH_STREAM: u64 = u64::MAX;

pub fn stream(master: u64, run: u64, node: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, run, node))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_stable() {
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
        assert_ne!(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
        // Reference value of the splitmix64 sequence seeded with 0.
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }
}
