//! Execution strategy for the data-parallel loops (Monte Carlo, worker
//! gradients, direction sweeps, privacy audits).
//!
//! Every parallel loop in this crate maps an index range (or a slice of
//! per-shard state) to an ordered `Vec` and reduces it sequentially, so the
//! sequential and parallel strategies produce bit-identical results.
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when loops will actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `0..n` through `f`, preserving index order in the output.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps each element of `items` mutably, preserving order.
    pub fn map_mut<T, R, F>(self, items: &mut [T], f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, &mut T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return items
                .par_iter_mut()
                .enumerate()
                .map(|(i, t)| f(i, t))
                .collect();
        }
        items.iter_mut().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

/// Splits `total` work items into contiguous chunks of at most `chunk` items.
pub(crate) fn chunk_bounds(total: usize, chunk: usize) -> Vec<(usize, usize)> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk))
        .map(|c| (c * chunk, ((c + 1) * chunk).min(total)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_on_order() {
        let a = Execution::Sequential.map_range(1000, |i| (i as f64).sqrt());
        let b = Execution::Parallel.map_range(1000, |i| (i as f64).sqrt());
        assert_eq!(a, b);
    }

    #[test]
    fn chunking_covers_range() {
        let c = chunk_bounds(10, 4);
        assert_eq!(c, vec![(0, 4), (4, 8), (8, 10)]);
        assert!(chunk_bounds(0, 4).is_empty());
    }
}
