//! Parallel evaluation of scan samples.
//!
//! Samples are pure functions of `(seed, index)` and the fold is
//! order-independent, so results do not depend on the thread count.

use kdq_core::oracle::{Observation, ScanResult};
use rayon::prelude::*;

use crate::error::CliError;

/// Thread pool capped by `KDQ_THREADS` when set (0 or unset means rayon's
/// default).
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("KDQ_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("KDQ_THREADS must be a non-negative integer, got {s:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

pub fn par_scan<F>(samples: u64, seed: u64, sample: F) -> kdq_core::Result<ScanResult>
where
    F: Fn(u64) -> kdq_core::Result<Observation> + Sync + Send,
{
    (0..samples)
        .into_par_iter()
        .map(sample)
        .try_fold(
            || ScanResult::empty(seed),
            |mut acc, obs| {
                acc.push(obs?);
                Ok(acc)
            },
        )
        .try_reduce(|| ScanResult::empty(seed), |a, b| Ok(a.merge(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kdq_core::oracle::{bound_sample, bound_scan};

    #[test]
    fn parallel_matches_sequential() {
        let seq = bound_scan(3, 3, 500, 21).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let par = pool
                .install(|| par_scan(500, 21, |i| bound_sample(3, 3, 21, i)))
                .unwrap();
            assert_eq!(par, seq);
        }
    }
}
