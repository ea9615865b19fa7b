//! Deterministic worker pool: replicas are keyed by index, results are
//! collected in index order, so the output stream is independent of the
//! thread count.

use rayon::prelude::*;

use crate::errors::CliError;

pub fn build_pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))
}

/// Map `f` over `0..count` on the pool, preserving index order.
pub fn parallel_map<T, F>(pool: &rayon::ThreadPool, count: u64, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync,
{
    pool.install(|| (0..count).into_par_iter().map(&f).collect())
}
