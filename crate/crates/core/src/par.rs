//! Deterministic sweeps over the symmetric group.
//!
//! `S_m` is cut into fixed rank ranges independent of the thread count; each
//! range is walked lexicographically and the partial results are reduced in
//! rank order. With the `parallel` feature the ranges run on rayon,
//! otherwise sequentially. Both paths give identical results for any
//! associative `reduce`.

use crate::count::factorial;
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


const CHUNK: u64 = 5040;

/// Default cap on `m` for exhaustive sweeps over `S_m`.
pub const DEFAULT_PERM_LIMIT: usize = 10;

pub fn check_limit(m: usize, limit: usize) -> Result<()> {
    if m > limit {
        return Err(Error::LimitExceeded { size: m, limit });
    }
    Ok(())
}

/// Folds `fold(acc, rank, sigma)` over all of `S_m`.
pub fn sweep<T, I, F, R>(m: usize, exec: Execution, init: I, fold: F, reduce: R) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, u64, &Permutation) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let total = factorial(m as u64)?;
    let total = u64::try_from(total).map_err(|_| Error::Overflow("sweep size"))?;
    let chunks = total.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> T {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut sigma = Permutation::unrank(m, start).expect("rank in range");
        let mut acc = init();
        for rank in start..end {
            acc = fold(acc, rank, &sigma);
            sigma.advance();
        }
        acc
    };
    let out = match exec {
        Execution::Sequential => (0..chunks).map(run_chunk).fold(init(), &reduce),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(run_chunk).reduce(&init, &reduce)
        }
    };
    Ok(out)
}

/// Maps every element of `items` and collects in input order.
pub fn map_collect<A, B, F>(items: &[A], exec: Execution, f: F) -> Vec<B>
where
    A: Sync,
    B: Send,
    F: Fn(&A) -> B + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}
