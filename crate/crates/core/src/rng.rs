//! Counter-based random number streams.
//!
//! Every random draw in the crate flows from a ChaCha stream keyed by
//! `(seed, domain, a, b)`. Distinct keys yield independent streams, so
//! per-particle work can run on any number of threads without changing
//! the realized randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub const DOMAIN_INIT: u64 = 1;
pub const DOMAIN_RESAMPLE: u64 = 2;
pub const DOMAIN_PROPAGATE: u64 = 3;
pub const DOMAIN_REPLICATE: u64 = 4;
pub const DOMAIN_SELECT_PATH: u64 = 5;
pub const DOMAIN_DATA: u64 = 6;

/// Independent stream for the key `(seed, domain, a, b)`.
pub fn substream(seed: u64, domain: u64, a: u64, b: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    key[16..24].copy_from_slice(&a.to_le_bytes());
    key[24..32].copy_from_slice(&b.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Derive a fresh 64-bit seed, e.g. one per replicate of an experiment.
pub fn derive_seed(seed: u64, domain: u64, a: u64) -> u64 {
    use rand_chacha::rand_core::RngCore;
    substream(seed, domain, a, 0).next_u64()
}
