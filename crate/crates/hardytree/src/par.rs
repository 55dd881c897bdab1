//! Order-preserving map helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over the global rayon
//! pool; without it they run sequentially. Results are collected in input
//! order either way, so outputs are identical across both builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn par_map<I, O, F>(input: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        input.par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        input.iter().map(&f).collect()
    }
}

pub fn par_map_idx<O, F>(n: usize, f: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(&f).collect()
    }
}
