//! Degreewise data parallelism.
//!
//! With the `parallel` feature, independent per-degree (or per-cell) work is
//! spread over rayon's pool; without it, or after [`set_parallel`]`(false)`,
//! the same closures run in order on the calling thread. Results are always
//! returned in index order, so output never depends on the schedule.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GALOIS_EXT_THREADS";

pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// Configures the global pool from [`THREADS_ENV`]; later calls are no-ops.
pub fn init_from_env() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        if n <= 1 {
            set_parallel(false);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_range(items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_both_ways() {
        let par = map_range(100, |i| i * i);
        set_parallel(false);
        let seq = map_range(100, |i| i * i);
        set_parallel(true);
        assert_eq!(par, seq);
        assert_eq!(par[7], 49);
    }
}
