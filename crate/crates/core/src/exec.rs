//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! pool; without it they are plain sequential loops. Results are identical
//! either way: every helper preserves input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the helpers stay sequential.
pub const PAR_THRESHOLD: usize = 64;

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= PAR_THRESHOLD {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= PAR_THRESHOLD {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Like [`map`] but always fans out when parallel, for coarse-grained work
/// such as one task per protein.
pub fn map_coarse<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    items.iter().map(f).collect()
}

/// Element with the smallest key. Keys must be totally ordered and distinct
/// for the result to be independent of evaluation order.
pub fn min_by_key<T, K, F>(items: &[T], key: F) -> Option<&T>
where
    T: Sync,
    K: Ord + Send,
    F: Fn(&T) -> K + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= PAR_THRESHOLD {
        return items.par_iter().min_by_key(|t| key(t));
    }
    items.iter().min_by_key(|t| key(t))
}
