//! Deterministic per-trial random streams.
//!
//! Trial `i` of a run seeded with `master` draws from a ChaCha8 stream keyed
//! by `master` (little-endian in the first eight key bytes) on stream `i`.
//! Trials are independent of scheduling, so parallel runs with the same seed
//! reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Runs `trials` independent trials in parallel and folds their results with
/// `combine`. `combine` must be associative and commutative for the result
/// to be independent of thread scheduling; integer counters satisfy this.
pub fn run_trials<T, F, C>(master: u64, trials: u64, identity: T, trial: F, combine: C) -> T
where
    T: Send + Sync + Clone,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(master, i);
            trial(i, &mut rng)
        })
        .reduce(|| identity.clone(), &combine)
}

/// Counts trials for which `hit` returns true.
pub fn count_hits<F>(master: u64, trials: u64, hit: F) -> u64
where
    F: Fn(u64, &mut ChaCha8Rng) -> bool + Sync + Send,
{
    run_trials(master, trials, 0u64, |i, r| hit(i, r) as u64, |a, b| a + b)
}
