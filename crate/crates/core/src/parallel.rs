//! Worker-pool control. Output never depends on the worker count.

use rayon::ThreadPoolBuilder;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "BACKLIMIT_THREADS";

/// Worker count from `BACKLIMIT_THREADS`, or the available cores.
pub fn configured_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs `op` inside a dedicated pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(op)
}
