//! Seed derivation.
//!
//! Every random structure (an edge set, a node subset, a sample stream, ...)
//! draws from its own stream, keyed by the master seed and a fixed tag. Adding
//! a draw to one structure therefore never perturbs another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Tag recorded in run manifests.
pub const GENERATOR_TAG: &str = "chacha8/splitmix64";

pub type StreamRng = ChaCha8Rng;

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines two 64-bit values into one well-mixed value.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.rotate_left(23))
}

/// Stable 64-bit digest of a string (first eight bytes of SHA-256).
pub fn hash_str(s: &str) -> u64 {
    let digest = Sha256::digest(s.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn stream_seed(seed: u64, tag: &str) -> u64 {
    mix(seed, hash_str(tag))
}

pub fn stream(seed: u64, tag: &str) -> StreamRng {
    StreamRng::seed_from_u64(stream_seed(seed, tag))
}
