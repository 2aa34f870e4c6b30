//! Batch-dimension parallelism with a sequential fallback.
//!
//! Built with the `parallel` feature (default), heavy kernels fan out over
//! the batch dimension on the rayon pool; without it they run sequentially.
//! A runtime switch covers both deterministic mode and like-for-like
//! benchmarking. Results are bit-identical either way: work items write to
//! disjoint outputs and every reduction runs in a fixed order.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enable or disable parallel inner loops at runtime.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Run `f(i, item)` for every item, in parallel when enabled.
pub(crate) fn indexed_for_each<T, F>(items: Vec<T>, f: F)
where
    T: Send,
    F: Fn(usize, T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if PARALLEL.load(Ordering::Relaxed) && items.len() > 1 {
            use rayon::prelude::*;
            items.into_par_iter().enumerate().for_each(|(i, t)| f(i, t));
            return;
        }
    }
    for (i, t) in items.into_iter().enumerate() {
        f(i, t);
    }
}

/// Map every item, preserving order, in parallel when enabled.
pub(crate) fn indexed_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(usize, T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if PARALLEL.load(Ordering::Relaxed) && items.len() > 1 {
            use rayon::prelude::*;
            return items.into_par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
        }
    }
    items.into_iter().enumerate().map(|(i, t)| f(i, t)).collect()
}
