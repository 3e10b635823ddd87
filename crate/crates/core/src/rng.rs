//! The single seedable generator family used everywhere.
//!
//! All randomness flows through ChaCha8 seeded with `seed_from_u64`, so any
//! experiment is reproducible from its configuration and seed. Distinct
//! purposes derive distinct streams from the same user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags keep independent uses of one seed from sharing draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Split = 1,
    Balance = 2,
    Generate = 3,
    Calibrate = 4,
}

pub fn seeded(seed: u64, stream: Stream) -> Rng {
    // splitmix64 finalizer over (seed, stream)
    let mut z = seed ^ (stream as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a = seeded(42, Stream::Split).next_u64();
        let b = seeded(42, Stream::Balance).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, seeded(42, Stream::Split).next_u64());
    }
}
