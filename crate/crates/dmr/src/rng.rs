//! Deterministic seed derivation and random streams.
//!
//! Every source of randomness in this crate is a [`ChaCha8Rng`] stream whose
//! seed is derived from a master seed plus a list of integer tags (block
//! index, site index, trial number, ...). Reruns with the same master seed
//! replay bit-for-bit, and adding new tagged streams never perturbs existing
//! ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a tag path.
///
/// The chain is order-sensitive: `derive(s, &[1, 2]) != derive(s, &[2, 1])`.
/// This mapping is part of the reproducibility contract; changing it would
/// invalidate any recorded seeds.
pub fn derive(master: u64, tags: &[u64]) -> u64 {
    let mut h = mix64(master);
    for &t in tags {
        h = mix64(h ^ mix64(t ^ 0xa076_1d64_78bd_642f));
    }
    h
}

/// A seeded ChaCha8 stream for the given tag path under `master`.
pub fn stream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, tags))
}

/// Folds an `f64` parameter (e.g. alpha) into a tag without precision loss.
pub fn tag_f64(x: f64) -> u64 {
    x.to_bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derive_is_deterministic_and_tag_sensitive() {
        assert_eq!(derive(42, &[1, 2, 3]), derive(42, &[1, 2, 3]));
        assert_ne!(derive(42, &[1, 2]), derive(42, &[2, 1]));
        assert_ne!(derive(42, &[1]), derive(43, &[1]));
        assert_ne!(derive(42, &[]), derive(42, &[0]));
    }

    #[test]
    fn streams_replay() {
        let a: Vec<u64> = (0..8).map(|_| stream(7, &[3, 1]).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut s1 = stream(7, &[3, 1]);
        let mut s2 = stream(7, &[3, 2]);
        assert_ne!(s1.next_u64(), s2.next_u64());
    }
}
