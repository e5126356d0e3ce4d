//! Random streams and seed derivation.
//!
//! Every replication of an experiment gets its own stream seeded from
//! `derive_seed(master, &[..])`. The derivation is a chain of SplitMix64
//! finalizers, so seeds depend only on the master seed and the index path,
//! never on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random stream used throughout the crate.
pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `master` with an index path: `h = splitmix64(master)`, then
/// `h = splitmix64(h ^ splitmix64(part))` for each part in order.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |h, &part| splitmix64(h ^ splitmix64(part)))
}

pub fn stream_from_seed(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on (0, 1].
#[inline]
pub fn unit_open_closed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // gen::<f64>() is uniform on [0, 1)
    1.0 - rng.gen::<f64>()
}

/// `Exp(rate)` by inversion: `-ln(U) / rate`.
#[inline]
pub fn sample_exp<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    -unit_open_closed(rng).ln() / rate
}
