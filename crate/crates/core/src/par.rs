//! Data-parallel helpers. With the `parallel` feature the `Parallel` mode
//! runs on the rayon pool that is current at the call site; without it every
//! mode runs sequentially and produces identical results.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// Whether this mode actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `(0..n).map(f).collect()`, order preserved.
pub fn map_collect<R, F>(mode: ExecMode, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Maps every index and folds the results with an associative `op`.
pub fn map_reduce<R, F, I, O>(mode: ExecMode, n: usize, f: F, identity: I, op: O) -> R
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
    O: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).reduce(identity, op);
    }
    let _ = mode;
    (0..n).map(f).fold(identity(), op)
}
