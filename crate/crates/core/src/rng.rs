//! Seeded, counter-based random streams.
//!
//! Every unit of parallel work (a Monte Carlo batch, a matrix sample) owns a
//! ChaCha stream selected by `(seed, stream index)`. Results are gathered in
//! stream order, so they do not depend on how rayon schedules the work or on
//! the size of the thread pool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Split `total` work items into consecutive batches of at most `batch`.
pub(crate) fn batches(total: u64, batch: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let n = total.div_ceil(batch);
    (0..n).map(move |i| (i, batch.min(total - i * batch)))
}

/// Derive an independent seed for a sub-computation.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
