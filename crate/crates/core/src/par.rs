//! Execution strategy for the data-parallel kernels.
//!
//! Every pairwise scan and per-point evaluation in this crate goes through
//! the helpers below. With the `parallel` feature enabled (the default) they
//! fan out over rayon's global pool; without it, or when a caller asks for
//! [`Execution::Sequential`], they run as plain iterator loops. Reductions are
//! either `max` (order-insensitive) or index-ordered collects, so both paths
//! return bit-identical results.

/// How a kernel should schedule its outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Single-threaded iteration in index order.
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    /// Work-stealing over rayon's global thread pool.
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        !matches!(self, Execution::Sequential)
    }
}

/// Maximum of `row(i)` over `0..n`, or `init` when `n == 0`.
///
/// `row` must not return NaN; `f64::max` would silently drop it.
pub(crate) fn max_over<F>(exec: Execution, n: usize, init: f64, row: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(row).fold(init, f64::max),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map(row)
                .reduce(|| init, f64::max)
        }
    }
}

/// `(0..n).map(f).collect()`, preserving index order.
pub(crate) fn map_indices<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
    }
}

/// First `Some` produced by `f` in index order.
pub(crate) fn find_first<T, F>(exec: Execution, n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).find_map(f),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().find_map_first(f)
        }
    }
}
