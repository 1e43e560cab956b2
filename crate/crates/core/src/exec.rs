//! Serial / data-parallel execution policy.
//!
//! Kernels take an [`Exec`] so that both paths stay reachable from the same
//! binary (the benchmarks compare them). Without the `parallel` feature,
//! [`Exec::Parallel`] silently runs the serial path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Work items per chunk for reductions. Fixed so that results never depend on
/// the number of worker threads.
pub const REDUCTION_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Serial,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Applies `f(index, &mut item)` to every element.
    pub fn for_each_mut<T, F>(self, data: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            data.par_iter_mut().enumerate().for_each(|(i, v)| f(i, v));
            return;
        }
        data.iter_mut().enumerate().for_each(|(i, v)| f(i, v));
    }

    /// Applies `f(offset, chunk)` to consecutive chunks of `data`.
    pub fn for_each_chunk_mut<T, F>(self, data: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            data.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(c, s)| f(c * chunk, s));
            return;
        }
        data.chunks_mut(chunk).enumerate().for_each(|(c, s)| f(c * chunk, s));
    }

    /// Maps `0..n` through `f`, preserving order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps a slice through `f`, preserving order.
    pub fn map<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Compensated sum of `f(i)` over `0..n` for `WIDTH` independent channels.
    ///
    /// Chunk boundaries are fixed by [`REDUCTION_CHUNK`] and chunk partials are
    /// combined in index order, so serial and parallel runs agree bitwise.
    pub fn sum_range<const WIDTH: usize, F>(self, n: usize, f: F) -> [f64; WIDTH]
    where
        F: Fn(usize) -> [f64; WIDTH] + Sync + Send,
    {
        let chunks = n.div_ceil(REDUCTION_CHUNK);
        let partial = |c: usize| {
            let mut acc = [crate::sum::Neumaier::default(); WIDTH];
            let end = ((c + 1) * REDUCTION_CHUNK).min(n);
            for i in c * REDUCTION_CHUNK..end {
                let v = f(i);
                for (a, x) in acc.iter_mut().zip(v) {
                    a.add(x);
                }
            }
            acc
        };
        let partials = self.map_range(chunks, partial);
        let mut total = [crate::sum::Neumaier::default(); WIDTH];
        for p in partials {
            for (t, x) in total.iter_mut().zip(p) {
                t.merge(x);
            }
        }
        total.map(|t| t.value())
    }
}

/// Configures the global worker pool. Only the first call has an effect.
pub fn init_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
