//! Seeded generator of bounded low-degree functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cube::{CubeFunction, FourierExpansion};
use crate::error::{Error, Result};
use crate::par;

/// Largest `n` accepted by [`random_bounded`].
pub const MAX_RANDOM_VARS: usize = 12;

/// Independent standard-normal coefficients on every `|S| <= d`, synthesized
/// and divided by the exact sup over the cube. Bit-reproducible per seed.
pub fn random_bounded(n: usize, d: usize, seed: u64) -> Result<CubeFunction> {
    if n == 0 || n > MAX_RANDOM_VARS {
        return Err(Error::SizeError(format!("random functions need 1 <= n <= {MAX_RANDOM_VARS}, got {n}")));
    }
    if d > n {
        return Err(Error::DegreeTooHigh { degree: d, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..1usize << n)
        .map(|m| {
            if m.count_ones() as usize <= d {
                rng.sample(StandardNormal)
            } else {
                0.0
            }
        })
        .collect();
    let f = FourierExpansion::from_dense(n, coeffs)?.synthesize()?;
    let sup = f.sup_norm();
    let v = f.values();
    CubeFunction::from_fn(n, |i| v[i] / sup)
}

/// One member of a random corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub index: usize,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub f: CubeFunction,
}

/// `count` functions with `n` uniform on `1..=max_n` and `d` uniform on
/// `0..=min(n, max_d)`. Each trial draws its parameters from its own ChaCha
/// stream, so the corpus is identical regardless of thread count.
pub fn random_corpus(count: usize, max_n: usize, max_d: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    if max_n == 0 || max_n > MAX_RANDOM_VARS {
        return Err(Error::SizeError(format!("corpus needs 1 <= max_n <= {MAX_RANDOM_VARS}")));
    }
    par::map(count, |index| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64 + 1);
        let n = rng.random_range(1..=max_n);
        let d = rng.random_range(0..=n.min(max_d));
        let fseed: u64 = rng.random();
        random_bounded(n, d, fseed).map(|f| CorpusEntry { index, n, d, seed: fseed, f })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_sign() {
        for seed in 0..5 {
            let f = random_bounded(4, 0, seed).unwrap();
            let v = f.value(0);
            assert!(v == 1.0 || v == -1.0);
            assert!(f.values().iter().all(|&x| x == v));
        }
    }

    #[test]
    fn normalized_and_degree_bounded() {
        for seed in 0..20 {
            let f = random_bounded(6, 3, seed).unwrap();
            let flags = f.classify(1e-9);
            assert!(flags.degree <= 3);
            assert!((flags.sup_norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reproducible() {
        let a = random_bounded(6, 3, 42).unwrap();
        let b = random_bounded(6, 3, 42).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), random_bounded(6, 3, 43).unwrap().values());
        let c1 = random_corpus(30, 8, 4, 7).unwrap();
        let c2 = random_corpus(30, 8, 4, 7).unwrap();
        for (x, y) in c1.iter().zip(&c2) {
            assert_eq!((x.n, x.d, x.seed), (y.n, y.d, y.seed));
            assert_eq!(x.f.values(), y.f.values());
            assert!(x.d <= x.n.min(4) && x.n <= 8);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(random_bounded(13, 2, 0).is_err());
        assert!(random_bounded(3, 4, 0).is_err());
    }
}
