//! Seed derivation for reproducible, independent random streams.
//!
//! Every consumer of randomness gets its own ChaCha8 generator keyed by
//! `(seed, label)`. Labels are fixed constants so adding a new consumer never
//! shifts the draws of an existing one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Innovations shared by all models of a stream.
pub const LABEL_INNOVATIONS: u64 = 0x696e_6e6f_7661_7465;
/// Burn-in draws used to warm model recursions before the stream starts.
pub const LABEL_BURN_IN: u64 = 0x6275_726e_5f69_6e00;
/// Transition map generation.
pub const LABEL_MAP: u64 = 0x7472_616e_5f6d_6170;
/// k-means++ seeding.
pub const LABEL_KMEANS: u64 = 0x6b6d_6561_6e73_2b2b;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives the seed of stream `index` in a batch started from `base`.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ splitmix64(index.wrapping_add(0xD1B5_4A32_D192_ED03)))
}

/// A generator dedicated to one labelled consumer of `seed`.
pub fn substream(seed: u64, label: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, label))
}

/// One standard-normal draw.
#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}
