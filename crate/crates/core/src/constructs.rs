//! Tight and near-tight examples: characters, `f4` and its products with
//! characters, the quadratics `s` and `t`, the two-block homogeneous
//! quadratic whose sensitivity approaches 4, Chebyshev-lifted symmetric
//! functions and the extremal monotone polynomials built from Jacobi kernels.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cube::{character_sign, coord, CubeFunction, MAX_VARS};
use crate::error::{Error, Result};
use crate::poly::{chebyshev, jacobi_kernel, KlurmanKind, UniPoly, SUP_TOL};
use crate::symmetric::{from_univariate, LevelProfile};

/// `chi_S` on `n` variables, `S` a 0-based variable mask.
pub fn character(mask: usize, n: usize) -> Result<CubeFunction> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::TooLarge(n));
    }
    if mask >> n != 0 {
        return Err(Error::IndexOutOfRange { index: mask, n });
    }
    CubeFunction::from_fn(n, |i| character_sign(mask, i))
}

/// Named constructions accepted by [`named_example`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedExample {
    F4,
    QuadS,
    QuadT,
    /// `f4(x_1..x_4) x_5 ... x_{d+2}`, degree `d`.
    F4TimesCharacter(usize),
    /// Difference of squared block means over two blocks of the given size.
    HomogeneousCounterexample(usize),
}

impl NamedExample {
    pub fn n(self) -> usize {
        match self {
            NamedExample::F4 | NamedExample::QuadS | NamedExample::QuadT => 4,
            NamedExample::F4TimesCharacter(d) => d + 2,
            NamedExample::HomogeneousCounterexample(b) => 2 * b,
        }
    }

    /// Exact degree of the construction.
    pub fn degree(self) -> usize {
        match self {
            NamedExample::F4TimesCharacter(d) => d,
            _ => 2,
        }
    }
}

impl fmt::Display for NamedExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedExample::F4 => write!(f, "f4"),
            NamedExample::QuadS => write!(f, "quad_s"),
            NamedExample::QuadT => write!(f, "quad_t"),
            NamedExample::F4TimesCharacter(d) => write!(f, "f4_times_character({d})"),
            NamedExample::HomogeneousCounterexample(b) => write!(f, "homogeneous_counterexample({b})"),
        }
    }
}

impl FromStr for NamedExample {
    type Err = Error;

    /// Accepts `name`, `name(k)` and `name:k`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(pos) => {
                let rest = s[pos + 1..].trim_end_matches(')').trim();
                let k = rest
                    .parse::<usize>()
                    .map_err(|_| Error::UnknownName(s.to_string()))?;
                (&s[..pos], Some(k))
            }
            None => (s, None),
        };
        match (name, arg) {
            ("f4", None) => Ok(NamedExample::F4),
            ("quad_s", None) => Ok(NamedExample::QuadS),
            ("quad_t", None) => Ok(NamedExample::QuadT),
            ("f4_times_character", Some(d)) => Ok(NamedExample::F4TimesCharacter(d)),
            ("homogeneous_counterexample", Some(b)) => Ok(NamedExample::HomogeneousCounterexample(b)),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

fn f4_at(x: &[f64]) -> f64 {
    (x[0] * (x[2] + x[3]) + x[1] * (x[2] - x[3])) / 2.0
}

fn quad_s_at(x: &[f64]) -> f64 {
    (x[0] * x[1] - x[2] * x[3]) / 2.0 + (SQRT_2 - 1.0) / 8.0 * (x[0] * x[2] + x[1] * x[3])
}

fn quad_t_at(x: &[f64]) -> f64 {
    (x[0] * x[1] - x[2] * x[3]) / 2.0 + (SQRT_2 - 1.0) / 16.0 * (x[0] + x[1]) * (x[2] + x[3])
}

/// Counterexample value from the number of -1 coordinates in each block:
/// `u^2 - v^2` with `u`, `v` the block means.
pub fn counterexample_value(block: usize, minus_first: usize, minus_second: usize) -> f64 {
    let b = block as f64;
    let u = (b - 2.0 * minus_first as f64) / b;
    let v = (b - 2.0 * minus_second as f64) / b;
    u * u - v * v
}

/// `Delta(f)` of the two-block counterexample at a point with the given
/// per-block counts of -1 coordinates, without building the truth table.
pub fn counterexample_sensitivity(block: usize, minus_first: usize, minus_second: usize) -> f64 {
    let g = |a: usize, c: usize| counterexample_value(block, a, c);
    let here = g(minus_first, minus_second);
    let (a, c, b) = (minus_first, minus_second, block);
    let mut total = 0.0;
    if a < b {
        total += (b - a) as f64 * (here - g(a + 1, c)).abs() / 2.0;
    }
    if a > 0 {
        total += a as f64 * (here - g(a - 1, c)).abs() / 2.0;
    }
    if c < b {
        total += (b - c) as f64 * (here - g(a, c + 1)).abs() / 2.0;
    }
    if c > 0 {
        total += c as f64 * (here - g(a, c - 1)).abs() / 2.0;
    }
    total
}

/// Truth table of a named construction.
pub fn named_example(which: NamedExample) -> Result<CubeFunction> {
    let n = which.n();
    match which {
        NamedExample::F4TimesCharacter(d) if d < 2 => {
            return Err(Error::SizeError(format!("f4_times_character needs d >= 2, got {d}")))
        }
        NamedExample::HomogeneousCounterexample(0) => {
            return Err(Error::SizeError("counterexample block must be >= 1".into()))
        }
        _ if n > MAX_VARS => {
            return Err(Error::SizeError(format!(
                "{which} needs {n} variables, more than the {MAX_VARS} supported"
            )))
        }
        _ => {}
    }
    let point = |i: usize| -> [f64; 4] { [coord(i, 0), coord(i, 1), coord(i, 2), coord(i, 3)] };
    match which {
        NamedExample::F4 => CubeFunction::from_fn(4, |i| f4_at(&point(i))),
        NamedExample::QuadS => CubeFunction::from_fn(4, |i| quad_s_at(&point(i))),
        NamedExample::QuadT => CubeFunction::from_fn(4, |i| quad_t_at(&point(i))),
        NamedExample::F4TimesCharacter(_) => {
            let tail = ((1usize << n) - 1) & !0xf;
            CubeFunction::from_fn(n, |i| f4_at(&point(i)) * character_sign(tail, i))
        }
        NamedExample::HomogeneousCounterexample(b) => {
            let low = (1usize << b) - 1;
            CubeFunction::from_fn(n, |i| {
                let a = (i & low).count_ones() as usize;
                let c = (i >> b).count_ones() as usize;
                counterexample_value(b, a, c)
            })
        }
    }
}

/// Lift of `T_d` to `n` variables through the mean coordinate. Odd `d` only;
/// see [`chebyshev_symmetric_any`] for even degrees.
pub fn chebyshev_symmetric(d: usize, n: usize) -> Result<LevelProfile> {
    if d % 2 == 0 {
        return Err(Error::BadDegree(d));
    }
    chebyshev_symmetric_any(d, n).map(|(lp, _)| lp)
}

/// As [`chebyshev_symmetric`] but accepting even `d`; the flag is true when
/// the degree is even, where the influence need not stay below `d`.
pub fn chebyshev_symmetric_any(d: usize, n: usize) -> Result<(LevelProfile, bool)> {
    if n < d * d {
        return Err(Error::SizeError(format!("need n >= d^2 = {}, got n = {n}", d * d)));
    }
    Ok((from_univariate(&chebyshev(d), n)?, d % 2 == 0))
}

/// One extremal monotone polynomial and the density it integrates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneExtremal {
    pub kind: KlurmanKind,
    /// Centered and scaled so that `p(-1) = -1`, `p(1) = 1`.
    pub poly: UniPoly,
    pub derivative_at_zero: f64,
}

/// Monotone polynomials of degree `d` maximizing `p'(0) / ||p||_inf` within
/// each Klurman branch: `p' = w K(x, 0)^2` where `w` is the branch weight and
/// `K` the Jacobi reproducing kernel of matching index. Even `d` gives one
/// (`S`) candidate; odd `d` gives `F` and, for `d >= 3`, `H`.
pub fn klurman_monotone_extremal(d: usize) -> Result<Vec<MonotoneExtremal>> {
    if d == 0 {
        return Err(Error::BadDegree(0));
    }
    let branches: Vec<(KlurmanKind, usize, f64, f64)> = if d % 2 == 0 {
        vec![(KlurmanKind::S, (d - 2) / 2, 0.0, 1.0)]
    } else {
        let k = (d - 1) / 2;
        let mut v = vec![(KlurmanKind::F, k, 0.0, 0.0)];
        if k >= 1 {
            v.push((KlurmanKind::H, k - 1, 1.0, 1.0));
        }
        v
    };
    branches
        .into_iter()
        .map(|(kind, k, a, b)| {
            let kern = jacobi_kernel(k, a, b, 0.0)?;
            let dp = kind.weight().mul(&kern.mul(&kern));
            let prim = dp.antiderivative();
            let (lo, hi) = (prim.eval(-1.0), prim.eval(1.0));
            let scale = 2.0 / (hi - lo);
            let poly = prim.add(&UniPoly::constant(-(hi + lo) / 2.0)).scale(scale);
            let derivative_at_zero = poly.derivative().eval(0.0);
            Ok(MonotoneExtremal {
                kind,
                poly,
                derivative_at_zero,
            })
        })
        .collect()
}

/// Best `p'(0)` over the candidates of [`klurman_monotone_extremal`].
pub fn klurman_reference(d: usize) -> Result<f64> {
    Ok(klurman_monotone_extremal(d)?
        .iter()
        .map(|c| c.derivative_at_zero / c.poly.sup_norm(SUP_TOL))
        .fold(f64::NEG_INFINITY, f64::max))
}
