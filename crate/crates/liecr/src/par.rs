//! Data-parallel execution of embarrassingly parallel sweeps.
//!
//! With the `parallel` feature (default) the `Auto` strategy fans work out
//! over rayon; without it everything runs sequentially. Results are always
//! collected in index order, so reports are byte-identical across strategies
//! and thread counts. `Sequential` stays available in either build for
//! baseline comparisons.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Parallel when the `parallel` feature is enabled, sequential otherwise.
    Auto,
    /// Force single-threaded execution.
    Sequential,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Auto
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).map(f).collect(),
        Strategy::Auto => map_indexed_auto(n, f),
    }
}

#[cfg(feature = "parallel")]
fn map_indexed_auto<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indexed_auto<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_preserve_order() {
        let seq = map_indexed(Strategy::Sequential, 100, |i| i * i);
        let auto = map_indexed(Strategy::Auto, 100, |i| i * i);
        assert_eq!(seq, auto);
        assert_eq!(seq[7], 49);
    }
}
