//! Seeded random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Root generator for a run.
pub fn root(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of `seed` (e.g. one per buoy).
pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
