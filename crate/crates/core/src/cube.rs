//! Dense functions on `{-1,1}^n` and their Fourier expansions.
//!
//! Index convention (shared by every module): bit `k` of a point index is 0
//! when `x_{k+1} = +1` and 1 when `x_{k+1} = -1`. Index 0 is the all-ones
//! point and flipping variable `i` is `index ^ (1 << (i - 1))`. A Fourier
//! character is addressed by the bitmask of its variable set, so
//! `chi_S(x) = (-1)^{popcount(S & x)}`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 24;

/// Default coefficient threshold for degree and homogeneity decisions.
pub const DEG_TOL: f64 = 1e-9;

/// Value of variable `var` (0-based) at point `index`: +1 or -1.
#[inline]
pub fn coord(index: usize, var: usize) -> f64 {
    if index >> var & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `chi_S(x)` for a subset mask and a point index.
#[inline]
pub fn character_sign(mask: usize, index: usize) -> f64 {
    if (mask & index).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Real-valued function on the Boolean cube, stored as a dense truth table.
#[derive(Debug, Clone)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
    fourier_cache: OnceLock<FourierExpansion>,
}

impl PartialEq for CubeFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.values == other.values
    }
}

impl CubeFunction {
    /// Builds a function from its truth table.
    pub fn from_truth_table(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::TooLarge(n));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                n,
                expected,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            n,
            values,
            fourier_cache: OnceLock::new(),
        })
    }

    /// Tabulates `f` at every point. The closure receives the point index.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        if n == 0 || n > MAX_VARS {
            return Err(Error::TooLarge(n));
        }
        Self::from_truth_table(n, par::fill(1 << n, f))
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Value at a point given as a slice of signs `x_1..x_n`.
    pub fn at(&self, x: &[i8]) -> f64 {
        let index = x
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &s)| if s < 0 { acc | 1 << k } else { acc });
        self.values[index]
    }

    /// Fourier expansion, computed once and cached.
    pub fn fourier(&self) -> &FourierExpansion {
        self.fourier_cache.get_or_init(|| {
            let mut coeffs = self.values.clone();
            par::walsh_hadamard(&mut coeffs);
            let scale = 1.0 / self.values.len() as f64;
            coeffs.iter_mut().for_each(|c| *c *= scale);
            FourierExpansion { n: self.n, coeffs }
        })
    }

    /// `max_x |f(x)|`.
    pub fn sup_norm(&self) -> f64 {
        let v = &self.values;
        par::max(v.len(), |i| v[i].abs())
    }

    /// `E|f|^p`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        let v = &self.values;
        let len = v.len();
        par::sum(len, |i| v[i].abs().powf(p)) / len as f64
    }

    /// `E|f|`.
    pub fn l1_norm(&self) -> f64 {
        let v = &self.values;
        let len = v.len();
        par::sum(len, |i| v[i].abs()) / len as f64
    }

    pub fn mean(&self) -> f64 {
        let v = &self.values;
        let len = v.len();
        par::sum(len, |i| v[i]) / len as f64
    }

    /// Pointwise linear combination `a*self + b*other`.
    pub fn combine(&self, a: f64, other: &CubeFunction, b: f64) -> Result<CubeFunction> {
        if other.n != self.n {
            return Err(Error::SizeError(format!(
                "variable counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        let (u, v) = (&self.values, &other.values);
        CubeFunction::from_fn(self.n, |i| a * u[i] + b * v[i])
    }

    /// Pointwise product, with the variable sets placed side by side:
    /// `self` on variables `1..=n`, `other` on `n+1..=n+m`.
    pub fn tensor(&self, other: &CubeFunction) -> Result<CubeFunction> {
        let n = self.n + other.n;
        if n > MAX_VARS {
            return Err(Error::TooLarge(n));
        }
        let low = (1usize << self.n) - 1;
        let (u, v, shift) = (&self.values, &other.values, self.n);
        CubeFunction::from_fn(n, |i| u[i & low] * v[i >> shift])
    }

    /// Structural classification with coefficient/value tolerance `tol`.
    pub fn classify(&self, tol: f64) -> PropertyFlags {
        let v = &self.values;
        let len = v.len();
        let sup_norm = self.sup_norm();
        let boolean_valued = par::all(len, |i| (v[i].abs() - 1.0).abs() <= tol);
        let bounded_by_one = sup_norm <= 1.0 + tol;

        let mut level_value: Vec<Option<f64>> = vec![None; self.n + 1];
        let mut symmetric = true;
        for (i, &x) in v.iter().enumerate() {
            let w = i.count_ones() as usize;
            match level_value[w] {
                None => level_value[w] = Some(x),
                Some(y) if (x - y).abs() > tol => {
                    symmetric = false;
                    break;
                }
                _ => {}
            }
        }

        let monotone = (0..self.n).all(|var| {
            let bit = 1usize << var;
            par::all(len, |i| i & bit != 0 || v[i] >= v[i | bit] - tol)
        });

        let e = self.fourier();
        PropertyFlags {
            boolean_valued,
            bounded_by_one,
            homogeneous: e.is_homogeneous(tol),
            symmetric,
            monotone,
            degree: e.degree(tol),
            sup_norm,
        }
    }

    pub fn degree(&self) -> usize {
        self.fourier().degree(DEG_TOL)
    }
}

/// Fourier coefficients `f^(S)` for every subset mask `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierExpansion {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierExpansion {
    /// Dense coefficient vector indexed by subset mask.
    pub fn from_dense(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::TooLarge(n));
        }
        if coeffs.len() != 1 << n {
            return Err(Error::LengthMismatch {
                n,
                expected: 1 << n,
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n, coeffs })
    }

    /// Sparse construction from `(mask, coefficient)` pairs; repeated masks add.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        if n == 0 || n > MAX_VARS {
            return Err(Error::TooLarge(n));
        }
        let mut coeffs = vec![0.0; 1 << n];
        for (mask, c) in pairs {
            if mask >> n != 0 {
                return Err(Error::IndexOutOfRange {
                    index: usize::BITS as usize - mask.leading_zeros() as usize,
                    n,
                });
            }
            coeffs[mask] += c;
        }
        Self::from_dense(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nonzero coefficients above `tol`, in mask order.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.abs() > tol)
            .map(|(m, &c)| (m, c))
    }

    /// Largest `|S|` carrying a coefficient above `tol` (0 for the zero function).
    pub fn degree(&self, tol: f64) -> usize {
        self.support(tol)
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// All coefficients above `tol` sit on sets of one size.
    pub fn is_homogeneous(&self, tol: f64) -> bool {
        let d = self.degree(tol);
        self.support(tol).all(|(m, _)| m.count_ones() as usize == d)
    }

    /// `sum_S f^(S)^2`.
    pub fn energy(&self) -> f64 {
        let c = &self.coeffs;
        par::sum(c.len(), |m| c[m] * c[m])
    }

    /// `sum_i f^({i})`, which equals `E[(x_1+...+x_n) f]`.
    pub fn first_level_sum(&self) -> f64 {
        (0..self.n).map(|k| self.coeffs[1 << k]).sum()
    }

    /// `sum_S |S| f^(S)^2`.
    pub fn spectral_influence(&self) -> f64 {
        let c = &self.coeffs;
        par::sum(c.len(), |m| m.count_ones() as f64 * c[m] * c[m])
    }

    /// Scales every coefficient by `g(|S|)`.
    pub fn scale_by_level<G>(&self, g: G) -> FourierExpansion
    where
        G: Fn(usize) -> f64 + Sync + Send,
    {
        let c = &self.coeffs;
        FourierExpansion {
            n: self.n,
            coeffs: par::fill(c.len(), |m| g(m.count_ones() as usize) * c[m]),
        }
    }

    /// Evaluates the multilinear polynomial at every cube point.
    pub fn synthesize(&self) -> Result<CubeFunction> {
        if self.n > MAX_VARS {
            return Err(Error::TooLarge(self.n));
        }
        let mut values = self.coeffs.clone();
        par::walsh_hadamard(&mut values);
        CubeFunction::from_truth_table(self.n, values)
    }

    /// Evaluates the multilinear extension at an arbitrary real point.
    pub fn eval_real(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        // prod_{i in S} x_i for all S, built by doubling.
        let mut monos = vec![1.0; 1 << self.n];
        for (k, &xk) in x.iter().enumerate() {
            let bit = 1 << k;
            for m in bit..(bit << 1) {
                monos[m] = monos[m - bit] * xk;
            }
        }
        self.coeffs.iter().zip(&monos).map(|(c, m)| c * m).sum()
    }
}

/// Structural properties of a cube function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyFlags {
    pub boolean_valued: bool,
    pub bounded_by_one: bool,
    pub homogeneous: bool,
    pub symmetric: bool,
    pub monotone: bool,
    pub degree: usize,
    pub sup_norm: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3() -> CubeFunction {
        CubeFunction::from_fn(3, |i| {
            let s: f64 = (0..3).map(|k| coord(i, k)).sum();
            s.signum()
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(
            CubeFunction::from_truth_table(2, vec![1.0; 3]),
            Err(Error::LengthMismatch { n: 2, expected: 4, got: 3 })
        );
        assert_eq!(
            CubeFunction::from_truth_table(1, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert_eq!(CubeFunction::from_truth_table(25, vec![]), Err(Error::TooLarge(25)));
        assert_eq!(CubeFunction::from_truth_table(0, vec![1.0]), Err(Error::TooLarge(0)));
    }

    #[test]
    fn index_convention() {
        // x1 x2 enumerated by hand: (+,+), (-,+), (+,-), (-,-)
        let f = CubeFunction::from_truth_table(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        for i in 0..4 {
            assert_eq!(f.value(i), coord(i, 0) * coord(i, 1));
        }
        assert_eq!(f.at(&[1, 1]), 1.0);
        assert_eq!(f.at(&[-1, 1]), -1.0);
        let dictator = CubeFunction::from_truth_table(1, vec![1.0, -1.0]).unwrap();
        assert_eq!(dictator.at(&[1]), 1.0);
    }

    #[test]
    fn character_spectrum() {
        let f = CubeFunction::from_truth_table(2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        assert_eq!(f.fourier().coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        let c = CubeFunction::constant(3, 0.7).unwrap();
        assert!((c.fourier().coeff(0) - 0.7).abs() < 1e-15);
        assert!(c.fourier().coeffs()[1..].iter().all(|&x| x.abs() < 1e-15));
    }

    #[test]
    fn majority_spectrum_matches_inner_products() {
        let f = maj3();
        let e = f.fourier();
        for mask in 0..8usize {
            // brute force E[f chi_S]
            let ip: f64 = (0..8).map(|i| f.value(i) * character_sign(mask, i)).sum::<f64>() / 8.0;
            assert!((e.coeff(mask) - ip).abs() < 1e-15);
        }
        assert_eq!(e.coeff(0b001), 0.5);
        assert_eq!(e.coeff(0b010), 0.5);
        assert_eq!(e.coeff(0b100), 0.5);
        assert_eq!(e.coeff(0b111), -0.5);
        assert_eq!(e.coeff(0b011), 0.0);
    }

    #[test]
    fn synthesize_examples() {
        let e = FourierExpansion::from_pairs(3, [(0, 0.5)]).unwrap();
        assert_eq!(e.synthesize().unwrap().values(), &[0.5; 8]);
        let e = FourierExpansion::from_pairs(1, [(1, 1.0)]).unwrap();
        assert_eq!(e.synthesize().unwrap().values(), &[1.0, -1.0]);
        let maj = maj3();
        let back = maj.fourier().synthesize().unwrap();
        for (a, b) in back.values().iter().zip(maj.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let chi = CubeFunction::from_fn(4, |i| character_sign(0b0111, i)).unwrap();
        let flags = chi.classify(1e-9);
        assert!(flags.boolean_valued && flags.homogeneous && !flags.monotone);
        assert_eq!(flags.degree, 3);

        let flags = maj3().classify(1e-9);
        assert!(flags.boolean_valued && flags.symmetric && flags.monotone);
        assert!(!flags.homogeneous);
        assert_eq!(flags.degree, 3);

        let dictator = CubeFunction::from_fn(3, |i| coord(i, 0)).unwrap();
        let flags = dictator.classify(1e-9);
        assert!(flags.monotone && flags.homogeneous && !flags.symmetric);
        assert_eq!(flags.degree, 1);
    }

    #[test]
    fn eval_real_matches_table_on_cube() {
        let f = maj3();
        for i in 0..8 {
            let x: Vec<f64> = (0..3).map(|k| coord(i, k)).collect();
            assert!((f.fourier().eval_real(&x) - f.value(i)).abs() < 1e-15);
        }
        // MAJ3 multilinear extension at (t,t,t) = 3t/2 - t^3/2
        let t = 0.3;
        let expect = 1.5 * t - 0.5 * t * t * t;
        assert!((f.fourier().eval_real(&[t, t, t]) - expect).abs() < 1e-15);
    }

    #[test]
    fn tensor_places_variables_side_by_side() {
        let x1 = CubeFunction::from_fn(1, |i| coord(i, 0)).unwrap();
        let chi = CubeFunction::from_fn(2, |i| character_sign(0b11, i)).unwrap();
        let t = x1.tensor(&chi).unwrap();
        assert_eq!(t.n(), 3);
        for i in 0..8 {
            assert_eq!(t.value(i), character_sign(0b111, i));
        }
    }
}
