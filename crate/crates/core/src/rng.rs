//! Deterministic randomness.
//!
//! All sampling goes through ChaCha8 seeded from a `u64`. Per-challenge seeds
//! are split off a master seed with SplitMix64, keyed by the algorithm's name
//! rather than its position in a list, so adding or reordering algorithms
//! never changes another algorithm's challenges.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recorded in reports for provenance.
pub const RNG_DESCRIPTION: &str = "ChaCha8Rng::seed_from_u64; seeds split with SplitMix64";

pub type GameRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One SplitMix64 output step.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed for challenge `index` of `stream` (typically "game/algorithm/params").
pub fn challenge_seed(master: u64, stream: &str, index: u64) -> u64 {
    let base = splitmix64(master ^ splitmix64(fnv1a(stream)));
    splitmix64(base.wrapping_add(splitmix64(index)))
}

/// Seed for the random playout of a challenge, independent of its generation seed.
pub fn playout_seed(challenge_seed: u64, attempt: u64) -> u64 {
    splitmix64(challenge_seed ^ 0x005E_ED0F_9A1A_u64.wrapping_add(attempt))
}
