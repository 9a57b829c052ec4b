//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the point loops run on the rayon pool. Every
//! reduction is computed over fixed-size chunks whose partial results are then
//! combined in index order, so the floating-point result is the same bit
//! pattern for any thread count and for the sequential build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used for ordered reductions.
pub const CHUNK: usize = 4096;

/// `(0..len).map(f).collect()`.
pub fn fill<F>(len: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
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

/// Maps over an index range and keeps the results in order.
pub fn map<T, F>(len: usize, f: F) -> Vec<T>
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

fn chunk_sums<F>(len: usize, f: &F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    map(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(len);
        (lo..hi).map(f).sum::<f64>()
    })
}

/// Deterministic `sum_{i < len} f(i)`.
pub fn sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    chunk_sums(len, &f).into_iter().sum()
}

/// `max_{i < len} f(i)`, or `-inf` for an empty range.
pub fn max<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    map(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(len);
        (lo..hi).map(&f).fold(f64::NEG_INFINITY, f64::max)
    })
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max)
}

/// True when `pred` holds for every index.
pub fn all<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).all(pred)
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly.
///
/// `data.len()` must be a power of two. Each output entry sees the same
/// sequence of additions in the parallel and the sequential build.
pub fn walsh_hadamard(data: &mut [f64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        let block = 2 * half;
        let butterfly = |blk: &mut [f64]| {
            let (lo, hi) = blk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        #[cfg(feature = "parallel")]
        {
            if half >= CHUNK {
                for blk in data.chunks_mut(block) {
                    let (lo, hi) = blk.split_at_mut(half);
                    lo.par_chunks_mut(CHUNK)
                        .zip(hi.par_chunks_mut(CHUNK))
                        .for_each(|(l, h)| {
                            for (a, b) in l.iter_mut().zip(h.iter_mut()) {
                                let (x, y) = (*a, *b);
                                *a = x + y;
                                *b = x - y;
                            }
                        });
                }
            } else if len >= 2 * CHUNK {
                data.par_chunks_mut(block).for_each(butterfly);
            } else {
                data.chunks_mut(block).for_each(butterfly);
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            data.chunks_mut(block).for_each(butterfly);
        }
        half = block;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_sum_is_chunk_stable() {
        let n = 3 * CHUNK + 17;
        let s = sum(n, |i| 1.0 / (i as f64 + 1.0));
        let mut expect = 0.0;
        for c in 0..n.div_ceil(CHUNK) {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            expect += (lo..hi).map(|i| 1.0 / (i as f64 + 1.0)).sum::<f64>();
        }
        assert_eq!(s.to_bits(), expect.to_bits());
    }

    #[test]
    fn max_of_empty_is_neg_inf() {
        assert_eq!(max(0, |_| 1.0), f64::NEG_INFINITY);
        assert_eq!(max(5, |i| i as f64), 4.0);
    }

    #[test]
    fn wht_of_delta_is_all_ones() {
        let mut v = vec![0.0; 1 << 14];
        v[0] = 1.0;
        walsh_hadamard(&mut v);
        assert!(v.iter().all(|&x| x == 1.0));
        walsh_hadamard(&mut v);
        assert_eq!(v[0], (1 << 14) as f64);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }
}
