use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Runs `job(i)` for `i in 0..n` on `workers` threads (all cores when
/// `None`) and returns the results in index order, so output never depends
/// on scheduling. The first failing index wins.
pub fn par_map<T, F>(workers: Option<usize>, n: u64, job: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> CliResult<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Runtime(format!("worker pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&job).collect::<Vec<_>>())
        .into_iter()
        .collect()
}
