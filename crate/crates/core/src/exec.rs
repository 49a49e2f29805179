//! Sequential or data-parallel evaluation of independent work items.
//!
//! Only the bounded oracles and the randomized harnesses fan out; every
//! construction stays single-threaded. Results always come back in input
//! order, so the choice of strategy never changes an answer.

/// How to evaluate a batch of independent items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is on and falls
    /// back to sequential evaluation otherwise.
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this strategy actually runs on several threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy == Strategy::Parallel {
        use rayon::prelude::*;
        // Oracle items are small; batching keeps scheduling overhead down.
        return items.par_iter().with_min_len(8).map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}
