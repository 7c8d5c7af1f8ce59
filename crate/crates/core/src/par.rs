//! Thin switch between rayon and plain iterators.

use crate::config::Execution;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps every element and keeps the results in input order.
pub(crate) fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// The first `Some` in index order of `f(i)` over `0..n`.
pub(crate) fn find_map_first<R, F>(exec: Execution, n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..n).find_map(f)
}

/// Keeps the elements satisfying `pred`, preserving order.
pub(crate) fn filter<T, F>(exec: Execution, items: Vec<T>, pred: F) -> Vec<T>
where
    T: Send + Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        return items.into_par_iter().filter(|t| pred(t)).collect();
    }
    let _ = exec;
    items.into_iter().filter(|t| pred(t)).collect()
}
