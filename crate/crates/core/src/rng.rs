//! Reproducible randomness.
//!
//! Every stochastic operation takes an explicit `u64` seed and draws from
//! [`ChaCha8Rng`]. Dataset-level operations derive one seed per item with
//! [`split_seed`], so results do not depend on scheduling.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Odd 64-bit multiplier (2^64 / golden ratio).
pub const SPLIT_MULTIPLIER: u64 = 0x9E37_79B9_7F4A_7C15;

/// Per-item seed: `base XOR (index * 0x9E3779B97F4A7C15) mod 2^64`.
///
/// The multiplier is odd, hence invertible modulo 2^64, so distinct indices map
/// to distinct seeds for a fixed base.
pub fn split_seed(base: u64, index: u64) -> u64 {
    base ^ index.wrapping_mul(SPLIT_MULTIPLIER)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `floor(ratio * size)` with the ratio clamped to `[0, 1]`.
///
/// A relative slack of 1e-9 absorbs products such as `0.29 * 100 =
/// 28.999999999999996` that land just below an integer.
pub fn scaled_count(ratio: f64, size: usize) -> usize {
    let ratio = if ratio.is_nan() { 0.0 } else { ratio.clamp(0.0, 1.0) };
    let product = ratio * size as f64;
    let count = (product + 1e-9 * product.max(1.0)).floor() as usize;
    count.min(size)
}
