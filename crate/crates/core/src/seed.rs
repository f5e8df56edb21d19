//! Deterministic seed derivation so every pipeline stage and every episode
//! owns an independent random stream.

/// SplitMix64 step; good avalanche, stable across platforms.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a stream label. Labels are
/// small structured integers (purpose tag in the high bits, index below).
pub fn derive_seed(base: u64, label: u64) -> u64 {
    splitmix64(base ^ splitmix64(label))
}

/// Stream labels for the pipeline stages.
pub mod stream {
    pub const TRAJECTORY: u64 = 1 << 32;
    pub const NOISE: u64 = 2 << 32;
    pub const TRAIN: u64 = 3 << 32;
    pub const EPISODE: u64 = 4 << 32;
    pub const START_POSE: u64 = 5 << 32;
    pub const OFFSETS: u64 = 6 << 32;
    pub const CORRUPTION: u64 = 7 << 32;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_deterministic_and_label_sensitive() {
        assert_eq!(derive_seed(42, 1), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 1), derive_seed(42, 2));
        assert_ne!(derive_seed(42, 1), derive_seed(43, 1));
    }
}
