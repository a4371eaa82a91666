//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature every helper fans out over rayon; without it
//! the same closures run on the calling thread. Results are always returned
//! in index order so floating-point reductions performed by the caller are
//! bit-identical at any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f(0..len)` and returns the outputs in index order.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Fills `out[i] = f(i)` for every slot.
pub fn fill_indexed<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
    }
}

/// Splits `0..len` into contiguous chunks of at most `chunk` indices.
pub(crate) fn chunks(len: usize, chunk: usize) -> Vec<std::ops::Range<usize>> {
    let chunk = chunk.max(1);
    (0..len.div_ceil(chunk))
        .map(|c| c * chunk..((c + 1) * chunk).min(len))
        .collect()
}

/// Runs `f` with at most `threads` workers. `None` keeps the global pool.
///
/// Without the `parallel` feature this simply calls `f`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

/// Number of workers the current context would use.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v = map_indexed(1000, |i| i * 3);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 3 * i));
    }

    #[test]
    fn chunking_covers_range() {
        let c = chunks(10, 3);
        assert_eq!(c, vec![0..3, 3..6, 6..9, 9..10]);
        assert!(chunks(0, 4).is_empty());
    }

    #[test]
    fn thread_cap_gives_same_sum() {
        let one = with_threads(Some(1), || map_indexed(500, |i| (i as f64).sqrt()).iter().sum::<f64>());
        let all = with_threads(None, || map_indexed(500, |i| (i as f64).sqrt()).iter().sum::<f64>());
        assert_eq!(one.to_bits(), all.to_bits());
    }
}
