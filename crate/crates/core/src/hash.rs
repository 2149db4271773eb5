//! Bit-exact key mixing.
//!
//! Both per-key hashes and the workload PRNG are built on the splitmix64
//! finalizer so that every implementation of this tool chain produces
//! identical probe paths and identical synthetic datasets for a given seed.

/// Weyl-sequence increment used by splitmix64 (2^64 / golden ratio).
pub const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;

/// splitmix64 finalizer. `mix64(0) == 0`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// The two per-key hashes a probe sequence is derived from: `h1` picks the
/// home slot, `h2` the base step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashPair {
    pub h1: u64,
    pub h2: u64,
}

/// Derives both hashes for a key under a table seed.
///
/// `h1 = mix64(key ^ seed)`, `h2 = mix64(key ^ seed ^ GOLDEN_GAMMA)`.
#[inline]
pub fn derive_hashes(key: u64, seed: u64) -> HashPair {
    HashPair {
        h1: mix64(key ^ seed),
        h2: mix64(key ^ seed ^ GOLDEN_GAMMA),
    }
}
