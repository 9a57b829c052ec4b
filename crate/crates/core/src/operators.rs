//! Noise operator, symmetrization, and collapse of a cube function onto a
//! bivariate polynomial along a variable partition.

use serde::{Deserialize, Serialize};

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::par;
use crate::poly::UniPoly;
use crate::symmetric::LevelProfile;

/// Largest `m` accepted by [`symmetrize_m`].
pub const MAX_SYM_M: usize = 1_000_000;

/// `T_rho f`: each coefficient `f^(S)` scaled by `rho^|S|`.
pub fn noise(f: &CubeFunction, rho: f64) -> Result<CubeFunction> {
    if !rho.is_finite() {
        return Err(Error::BadParam(format!("noise rate must be finite, got {rho}")));
    }
    f.fourier()
        .scale_by_level(|k| rho.powi(k as i32))
        .synthesize()
}

/// Means of `f` over each Hamming level of `{-1,1}^n`.
fn level_means(f: &CubeFunction) -> Vec<f64> {
    let n = f.n();
    let mut sums = vec![0.0; n + 1];
    let mut counts = vec![0usize; n + 1];
    for (i, &v) in f.values().iter().enumerate() {
        let w = i.count_ones() as usize;
        sums[w] += v;
        counts[w] += 1;
    }
    sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect()
}

/// `Sym(f)` as a level profile: level `k` is the mean of `f` over points with
/// `k` coordinates equal to -1.
pub fn symmetrize(f: &CubeFunction) -> LevelProfile {
    LevelProfile::new(f.n(), level_means(f)).expect("n + 1 finite levels")
}

/// Probability that `w` of the `j` minus-ones among `m` coordinates land in a
/// fixed block of `n`, as a product of ratios each at most one.
fn hypergeometric(m: usize, n: usize, j: usize, w: usize, binom_n_w: f64) -> f64 {
    if w > j || n - w > m - j {
        return 0.0;
    }
    let mut p = binom_n_w;
    for t in 0..w {
        p *= (j - t) as f64 / (m - t) as f64;
    }
    for t in 0..n - w {
        p *= (m - j - t) as f64 / (m - w - t) as f64;
    }
    p
}

/// `Sym_m(f)` for `m >= n`, viewing `f` as a function of the first `n` of `m`
/// coordinates. Runs in `O(2^n + m n)`.
pub fn symmetrize_m(f: &CubeFunction, m: usize) -> Result<LevelProfile> {
    let n = f.n();
    if m < n || m > MAX_SYM_M {
        return Err(Error::BadM { m, n });
    }
    if m == n {
        return Ok(symmetrize(f));
    }
    let avg = level_means(f);
    let mut binom = vec![1.0; n + 1];
    for w in 1..=n {
        binom[w] = binom[w - 1] * (n - w + 1) as f64 / w as f64;
    }
    let levels = par::fill(m + 1, |j| {
        (0..=n)
            .map(|w| hypergeometric(m, n, j, w, binom[w]) * avg[w])
            .sum()
    });
    LevelProfile::new(m, levels)
}

/// Bivariate polynomial `sum a[j][k] x^j y^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiPoly {
    coeffs: Vec<Vec<f64>>,
}

/// Substitution used by [`diag_line`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagMode {
    /// `h(e) = g(1 + e, 1 - e)`
    PlusMinus,
    /// `h(e) = g(e, 1)`
    XLine,
    /// `h(e) = g(1, e)`
    YLine,
}

impl BiPoly {
    /// Rows indexed by the power of `x`, columns by the power of `y`.
    pub fn new(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let width = coeffs.first().map_or(0, Vec::len);
        if width == 0 || coeffs.iter().any(|r| r.len() != width) {
            return Err(Error::BadParam("bivariate coefficients must be a non-empty rectangle".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        self.coeffs.get(j).and_then(|r| r.get(k)).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |a, &c| a * y + c)
        })
    }

    /// Largest `j + k` over coefficients with `|a_jk| > tol`.
    pub fn total_degree(&self, tol: f64) -> usize {
        let mut d = 0;
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if c.abs() > tol {
                    d = d.max(j + k);
                }
            }
        }
        d
    }
}

/// `g(x, y) = f(x on S, y off S)` where `S` is a 0-based variable mask:
/// each character `chi_T` becomes `x^|T & S| y^|T \ S|`.
pub fn collapse_partition(f: &CubeFunction, s: usize) -> Result<BiPoly> {
    let n = f.n();
    if s >> n != 0 {
        return Err(Error::IndexOutOfRange { index: s, n });
    }
    let ns = s.count_ones() as usize;
    let mut coeffs = vec![vec![0.0; n - ns + 1]; ns + 1];
    for (t, &c) in f.fourier().coeffs().iter().enumerate() {
        let j = (t & s).count_ones() as usize;
        let k = (t & !s).count_ones() as usize;
        coeffs[j][k] += c;
    }
    BiPoly::new(coeffs)
}

/// Variables `i` with `f_i(1) >= 0`, as a 0-based mask. Collapsing onto this
/// partition makes `h'(0)` under [`DiagMode::PlusMinus`] equal `Delta(f)(1)`.
pub fn sign_partition(f: &CubeFunction) -> usize {
    let v = f.values();
    (0..f.n())
        .filter(|&k| v[0] - v[1 << k] >= 0.0)
        .fold(0, |m, k| m | 1 << k)
}

/// Restricts `g` to a line, expanding binomially into monomial coefficients.
pub fn diag_line(g: &BiPoly, mode: DiagMode) -> UniPoly {
    let (one_plus, one_minus) = (UniPoly::linear(1.0, 1.0), UniPoly::linear(1.0, -1.0));
    let mut h = UniPoly::zero();
    for (j, row) in g.coeffs.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let term = match mode {
                DiagMode::PlusMinus => one_plus.powi(j).mul(&one_minus.powi(k)),
                DiagMode::XLine => UniPoly::x().powi(j),
                DiagMode::YLine => UniPoly::x().powi(k),
            };
            h = h.add(&term.scale(c));
        }
    }
    h
}
