//! Data-parallel execution helpers.
//!
//! With the `parallel` feature (the default) the indexed maps fan out over
//! rayon's global pool; without it they run sequentially. Results are always
//! collected in index order, so reductions downstream are deterministic and
//! bit-identical across thread counts. The `_seq` variants are always
//! sequential and exist so callers can cross-check or benchmark both paths.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential reference for [`map_indexed`].
pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, collecting results in order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential reference for [`map_slice`].
pub fn map_slice_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sums a slice by pairwise splitting. Order-independent of any parallel
/// schedule by construction (the input order is fixed) and more accurate
/// than a running sum on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise sum of `f` applied to each element.
pub fn pairwise_sum_by<T>(items: &[T], f: impl Fn(&T) -> f64 + Copy) -> f64 {
    const BASE: usize = 32;
    if items.len() <= BASE {
        return items.iter().map(f).sum();
    }
    let mid = items.len() / 2;
    pairwise_sum_by(&items[..mid], f) + pairwise_sum_by(&items[mid..], f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let par = map_indexed(1000, |i| (i as f64).sqrt());
        let seq = map_indexed_seq(1000, |i| (i as f64).sqrt());
        assert_eq!(par, seq);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (0..257).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert!((pairwise_sum_by(&xs, |x| 2.0 * x) - 2.0 * naive).abs() < 1e-12);
    }
}
