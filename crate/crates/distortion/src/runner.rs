//! Concurrent execution of scenario batches.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::verify::{verify, VerificationReport};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "POTLAB_WORKERS";

/// Worker count from `POTLAB_WORKERS`, else the number of CPUs.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Outcome of one scenario.
#[derive(Debug, Clone)]
pub struct RunItem {
    pub id: String,
    pub result: Result<VerificationReport>,
}

/// Verify every scenario on a pool of `workers` threads; results come back
/// sorted by scenario id whatever the completion order.
pub fn run_all(scenarios: &[Scenario], workers: usize) -> Result<Vec<RunItem>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(format!("worker pool: {e}")))?;
    let mut items: Vec<RunItem> = pool.install(|| {
        scenarios
            .par_iter()
            .map(|s| RunItem {
                id: s.id.clone(),
                result: verify(s),
            })
            .collect()
    });
    items.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(items)
}
