//! Stream derivation for reproducible Monte Carlo runs.
//!
//! Every trial owns an independent ChaCha20 stream: the key comes from the
//! master seed (`ChaCha20Rng::seed_from_u64`) and the 64-bit stream id is
//! `(experiment_index << 32) | trial_index`. Results therefore do not depend
//! on thread count or scheduling, and ChaCha output is identical on every
//! platform.

use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

/// Stream used for per-experiment setup draws (e.g. a Haar-random target).
pub const SETUP_TRIAL: u32 = u32::MAX;

pub fn trial_rng(master_seed: u64, experiment_index: u32, trial_index: u32) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(((experiment_index as u64) << 32) | trial_index as u64);
    rng
}
