//! Data-parallel helpers. With the `parallel` feature the loops run on the rayon
//! pool; without it they run sequentially. Every helper writes disjoint outputs
//! or reduces with an order-independent operation, so results do not depend on
//! the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Run `f(chunk_index, chunk)` over consecutive chunks of `data`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Run `f(index, item)` over every element of a mutable slice.
pub fn for_each_mut<T, F>(data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
    #[cfg(not(feature = "parallel"))]
    data.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Map `0..n` through a fallible function and return the first error by index.
pub fn try_for_each_chunk_mut<T, F, E>(data: &mut [T], chunk: usize, f: F) -> Result<(), E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut [T]) -> Result<(), E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        // collect all failures and keep the lowest index so the reported error is deterministic
        let first = data
            .par_chunks_mut(chunk)
            .enumerate()
            .filter_map(|(i, c)| f(i, c).err().map(|e| (i, e)))
            .min_by_key(|(i, _)| *i);
        match first {
            Some((_, e)) => Err(e),
            None => Ok(()),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, c) in data.chunks_mut(chunk).enumerate() {
            f(i, c)?;
        }
        Ok(())
    }
}

/// Maximum of `f(i)` over `0..n` (NaN-propagating: any NaN makes the result NaN).
pub fn max_over(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    let combine = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) };
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).reduce(|| f64::NEG_INFINITY, combine)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(f64::NEG_INFINITY, combine)
    }
}

/// Map `0..n` to a vector, preserving order.
pub fn map_collect<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_writes_are_disjoint() {
        let mut v = vec![0usize; 10];
        for_each_chunk_mut(&mut v, 3, |ci, c| {
            for (k, x) in c.iter_mut().enumerate() {
                *x = ci * 3 + k;
            }
        });
        assert_eq!(v, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn first_error_is_lowest_index() {
        let mut v = vec![0u8; 8];
        let r: Result<(), usize> = try_for_each_chunk_mut(&mut v, 1, |i, _| if i >= 3 { Err(i) } else { Ok(()) });
        assert_eq!(r, Err(3));
    }

    #[test]
    fn max_reduction() {
        assert_eq!(max_over(5, |i| (i as f64 - 2.0).abs()), 2.0);
        assert!(max_over(3, |i| if i == 1 { f64::NAN } else { 0.0 }).is_nan());
        assert_eq!(max_over(0, |_| 1.0), f64::NEG_INFINITY);
    }
}
