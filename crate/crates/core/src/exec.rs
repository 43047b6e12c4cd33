//! Data-parallel execution of independent checks.

/// How a batch of independent jobs is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is on, and falls back
    /// to sequential execution otherwise.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// `items.map(f)` with results in input order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Whether `f` holds for every index in `0..n`.
pub fn all<F>(strategy: Strategy, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(strategy, &idx, |&i| f(i)).into_iter().all(|b| b)
}
