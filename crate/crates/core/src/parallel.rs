//! Deterministic fan-out: worker `w` draws from stream `w` of a seeded ChaCha
//! generator, and results come back in worker order, so output depends only on
//! `(seed, workers)` and not on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Sample count for worker `w`: the first `total % workers` workers take one extra.
pub(crate) fn share(total: u64, workers: usize, w: usize) -> u64 {
    let workers = workers as u64;
    total / workers + u64::from((w as u64) < total % workers)
}

pub(crate) fn worker_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `job(rng, count)` once per worker and returns the results in worker order.
pub(crate) fn fan_out<T, F>(total: u64, seed: u64, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let workers = workers.max(1);
    (0..workers).into_par_iter().map(|w| job(&mut worker_rng(seed, w as u64), share(total, workers, w))).collect()
}
