use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Trials per independently seeded chunk in parallel Monte Carlo loops.
///
/// Chunking is fixed, not tied to the worker count, so results are
/// identical however many threads run them.
pub const CHUNK_TRIALS: u64 = 1 << 14;

/// Identifies one reproducible random stream: a ChaCha8 generator keyed by
/// `seed` and positioned on stream `stream_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed for one sweep point (e.g. one SNR value) from a run seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

/// Seed for the sweep point at `snr_db`.
pub fn point_seed(seed: u64, snr_db: f64) -> u64 {
    derive_seed(seed, snr_db.to_bits())
}

/// Run `work(chunk_index, trials_in_chunk)` for chunks `first..` covering
/// `trials` trials, in parallel, returning the per-chunk results in order.
pub(crate) fn run_chunks<A, F>(first_chunk: u64, trials: u64, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(u64, u64) -> A + Sync,
{
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = CHUNK_TRIALS.min(trials - i * CHUNK_TRIALS);
            work(first_chunk + i, len)
        })
        .collect()
}
