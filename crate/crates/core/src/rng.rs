//! Counter-based deterministic sampling.
//!
//! Sample `i` under seed `s` draws from a SplitMix64 generator whose state
//! starts at `mix64(s) ^ mix64(i + 0x9E3779B97F4A7C15)`. Each sample's
//! stream depends only on `(s, i)`, so any partition of the index range
//! across workers draws the same matrices.
//!
//! Integers uniform on `[-B, B)` use Lemire's multiply-and-reject method on
//! the width `2B`.

/// SplitMix64 increment (the 64-bit golden ratio).
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Generator for sample `index` under `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix64(seed) ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, width)`, `width > 0`, without modulo bias.
    pub fn below(&mut self, width: u64) -> u64 {
        assert!(width > 0);
        let mut m = u128::from(self.next_u64()) * u128::from(width);
        if (m as u64) < width {
            let threshold = width.wrapping_neg() % width;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(width);
            }
        }
        (m >> 64) as u64
    }

    /// Uniform on the half-open box `[-bound, bound)`.
    pub fn in_box(&mut self, bound: u64) -> i64 {
        self.below(2 * bound) as i64 - bound as i64
    }
}

/// Derives an independent seed for a labelled sub-experiment.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    mix64(seed ^ mix64(label.wrapping_add(GOLDEN_GAMMA)))
}
