//! Order-preserving data-parallel map over independent oracle calls.
//!
//! With the `parallel` feature, [`map`] runs on the rayon pool; without it, it runs
//! sequentially. Both variants are always available under explicit names for benchmarks.

/// Sequential map.
pub fn map_seq<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Parallel map; output order equals input order.
#[cfg(feature = "parallel")]
pub fn map_par<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_par<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_seq(items, f)
}

/// The crate-wide default: parallel when the feature is enabled.
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_par(items, f)
}

/// Like [`map`] for fallible `f`; returns the error of the lowest failing index.
pub fn try_map<T: Sync, R: Send, E: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R, E> + Sync + Send,
) -> Result<Vec<R>, E> {
    map(items, f).into_iter().collect()
}
