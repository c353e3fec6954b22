//! Seeded random streams.
//!
//! Every stream is a ChaCha20 generator keyed by a 64-bit seed through
//! `SeedableRng::seed_from_u64`, so a seed pins the sample sequence bit for
//! bit on every platform.
//!
//! Batch samplers split work across a fixed number of workers: worker `k`
//! draws from `RngStream::new(base_seed + k)` and produces a contiguous block
//! of the output. The block sizes depend only on the batch size and worker
//! count, never on the thread pool, so parallel results are reproducible.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

/// Identifier of the generator behind [`RngStream`].
pub const ALGORITHM: &str = "chacha20/seed_from_u64";

/// Number of workers used by batch samplers unless told otherwise.
pub const DEFAULT_WORKERS: usize = 8;

/// A reproducible pseudorandom stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Stream for worker `k` of a batch seeded with `base_seed`.
    pub fn worker(base_seed: u64, k: usize) -> Self {
        Self::new(base_seed.wrapping_add(k as u64))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        ALGORITHM
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Sizes of the contiguous blocks handed to each worker.
pub fn worker_blocks(n: usize, workers: usize) -> Vec<usize> {
    let workers = workers.max(1);
    let (q, r) = (n / workers, n % workers);
    (0..workers).map(|k| q + usize::from(k < r)).collect()
}

/// Draws `n` items in parallel following the worker-splitting contract.
///
/// The output is ordered by worker index, then by draw index within the worker.
pub fn par_sample<T, F>(n: usize, base_seed: u64, workers: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync,
{
    let blocks = worker_blocks(n, workers);
    let parts: Vec<Vec<T>> = blocks
        .par_iter()
        .enumerate()
        .map(|(k, &len)| {
            let mut rng = RngStream::worker(base_seed, k);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Fallible variant of [`par_sample`]; the first error in output order wins.
pub fn try_par_sample<T, E, F>(n: usize, base_seed: u64, workers: usize, draw: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut RngStream) -> Result<T, E> + Sync,
{
    par_sample(n, base_seed, workers, draw).into_iter().collect()
}
