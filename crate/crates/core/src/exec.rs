//! Grid evaluation with an optional rayon backend.
//!
//! Results always come back in input order, so sequential and parallel
//! runs of a deterministic function are identical element for element.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Data-parallel over grid points. Without the `parallel` feature this
    /// falls back to sequential evaluation.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Applies `f` to every item.
pub fn map_grid<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Fallible [`map_grid`]; the error reported is the first in input order.
pub fn try_map_grid<T, R, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    map_grid(exec, items, f).into_iter().collect()
}

/// Runs `f` inside a thread pool of `workers` threads (rayon's default
/// when `None`). Sequential builds ignore the worker count.
pub fn with_workers<R, F>(workers: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if workers == Some(0) {
        return Err(Error::domain("worker count must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::model(format!("cannot start worker pool: {e}")))?;
        return Ok(pool.install(f));
    }
    Ok(f())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_grid(Execution::Sequential, &xs, |x| x * x);
        let par = map_grid(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 998_001);
    }

    #[test]
    fn first_error_in_input_order() {
        let xs: Vec<i32> = (0..100).collect();
        let r = try_map_grid(Execution::Parallel, &xs, |&x| {
            if x >= 40 {
                Err(Error::domain(format!("{x}")))
            } else {
                Ok(x)
            }
        });
        assert_eq!(r, Err(Error::Domain("40".into())));
    }

    #[test]
    fn worker_pool() {
        assert_eq!(with_workers(Some(2), || 7).unwrap(), 7);
        assert!(with_workers(Some(0), || 7).is_err());
    }
}
