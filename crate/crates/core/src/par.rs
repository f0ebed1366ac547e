//! Thin dispatch layer between rayon and sequential execution.
//!
//! Every data-parallel loop in the crate goes through these helpers, so the
//! `parallel` feature toggles one module instead of scattering `cfg` blocks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Map `f` over an index range, preserving order.
pub fn map_range<U, F>(range: std::ops::Range<usize>, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Minimum of `f` over an index range with a deterministic tie-break on the
/// smaller index. Returns `None` for an empty range or if `f` never yields
/// a finite value.
pub fn min_over_range<F>(range: std::ops::Range<usize>, f: F) -> Option<(f64, usize)>
where
    F: Fn(usize) -> Option<f64> + Sync + Send,
{
    let pick = |a: Option<(f64, usize)>, b: Option<(f64, usize)>| match (a, b) {
        (Some((va, ia)), Some((vb, ib))) => {
            if vb < va || (vb == va && ib < ia) {
                Some((vb, ib))
            } else {
                Some((va, ia))
            }
        }
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };

    #[cfg(feature = "parallel")]
    {
        range
            .into_par_iter()
            .map(|i| f(i).map(|v| (v, i)))
            .reduce(|| None, pick)
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(|i| f(i).map(|v| (v, i))).fold(None, pick)
    }
}
