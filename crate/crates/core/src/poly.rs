//! Univariate polynomials in the monomial basis: Chebyshev and Jacobi
//! families, the Klurman sum-of-squares densities, derivative bounds and
//! certified extrema on intervals.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Real polynomial `c_0 + c_1 x + ... + c_d x^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<f64>,
}

impl UniPoly {
    /// Trailing exact zeros are dropped, so a nonzero polynomial always has a
    /// nonzero leading coefficient.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `(x - root)`-style linear factor `a + b x`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree after dropping trailing coefficients with `|c| <= tol`.
    pub fn effective_degree(&self, tol: f64) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.abs() > tol)
            .unwrap_or(0)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Compensated Horner evaluation; accurate to a few ulps times the
    /// condition number squared, which keeps degree-20 Chebyshev values near
    /// `+-1` correct to ~1e-15.
    pub fn eval(&self, x: f64) -> f64 {
        let mut iter = self.coeffs.iter().rev();
        let Some(&lead) = iter.next() else {
            return 0.0;
        };
        let (mut s, mut err) = (lead, 0.0f64);
        for &c in iter {
            let p = s * x;
            let pe = s.mul_add(x, -p);
            let t = p + c;
            let bp = t - p;
            let se = (p - (t - bp)) + (c - bp);
            err = err.mul_add(x, pe + se);
            s = t;
        }
        s + err
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> UniPoly {
        let mut out = vec![0.0];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        UniPoly::new(out)
    }

    pub fn scale(&self, s: f64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn powi(&self, k: usize) -> UniPoly {
        (0..k).fold(UniPoly::constant(1.0), |acc, _| acc.mul(self))
    }

    /// `int_a^b p(x) dx`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Real roots in `[a, b]` where the polynomial changes sign, located by a
    /// Chebyshev-node scan of `32 * degree` cells followed by bisection to `tol`.
    /// Roots of even multiplicity are not reported.
    pub fn sign_change_roots(&self, a: f64, b: f64, tol: f64) -> Vec<f64> {
        if self.degree() == 0 || !(a < b) {
            return Vec::new();
        }
        let grid = scan_grid(a, b, 32 * self.degree());
        let mut roots = Vec::new();
        let mut prev = (grid[0], self.eval(grid[0]));
        if prev.1 == 0.0 {
            roots.push(prev.0);
        }
        for &x in &grid[1..] {
            let fx = self.eval(x);
            if fx == 0.0 {
                roots.push(x);
            } else if prev.1 != 0.0 && (prev.1 < 0.0) != (fx < 0.0) {
                roots.push(self.bisect(prev.0, x, prev.1, tol));
            }
            prev = (x, fx);
        }
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> f64 {
        let width = tol * (hi - lo).abs().max(1.0).max(lo.abs()).max(hi.abs());
        for _ in 0..200 {
            if hi - lo <= width {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(argmax, max)` of the polynomial on `[a, b]`: endpoints, the scan
    /// grid, and every sign-change root of the derivative are examined.
    pub fn max_on(&self, a: f64, b: f64, tol: f64) -> (f64, f64) {
        let mut best = (a, self.eval(a));
        let mut consider = |x: f64| {
            let v = self.eval(x);
            if v > best.1 {
                best = (x, v);
            }
        };
        consider(b);
        let d = self.derivative();
        for r in d.sign_change_roots(a, b, tol) {
            consider(r);
        }
        for x in scan_grid(a, b, 32 * self.degree().max(1)) {
            consider(x);
        }
        best
    }

    /// `(argmin, min)` on `[a, b]`.
    pub fn min_on(&self, a: f64, b: f64, tol: f64) -> (f64, f64) {
        let (x, v) = self.scale(-1.0).max_on(a, b, tol);
        (x, -v)
    }

    /// `max |p|` on `[-1, 1]`.
    pub fn sup_norm(&self, tol: f64) -> f64 {
        self.sup_norm_on(-1.0, 1.0, tol)
    }

    pub fn sup_norm_on(&self, a: f64, b: f64, tol: f64) -> f64 {
        let hi = self.max_on(a, b, tol).1;
        let lo = self.min_on(a, b, tol).1;
        hi.abs().max(lo.abs())
    }

    /// Converts Chebyshev-basis coefficients `sum_k a_k T_k(x)` to monomials.
    pub fn from_chebyshev(cheb: &[f64]) -> UniPoly {
        let mut out = UniPoly::zero();
        let mut t_prev = UniPoly::constant(1.0);
        let mut t_cur = UniPoly::x();
        for (k, &a) in cheb.iter().enumerate() {
            let tk = match k {
                0 => UniPoly::constant(1.0),
                1 => UniPoly::x(),
                _ => {
                    let next = UniPoly::x().scale(2.0).mul(&t_cur).sub(&t_prev);
                    t_prev = std::mem::replace(&mut t_cur, next);
                    t_cur.clone()
                }
            };
            out = out.add(&tk.scale(a));
        }
        out
    }
}

/// Default relative tolerance of [`UniPoly::sup_norm`].
pub const SUP_TOL: f64 = 1e-12;

/// Chebyshev nodes of the first kind mapped to `[a, b]`, sorted, endpoints added.
pub fn scan_grid(a: f64, b: f64, cells: usize) -> Vec<f64> {
    let cells = cells.max(2);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut g: Vec<f64> = (0..cells)
        .map(|j| {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / cells as f64;
            mid - half * theta.cos()
        })
        .collect();
    g.insert(0, a);
    g.push(b);
    g
}

/// Chebyshev polynomial of the first kind via `T_{d+1} = 2x T_d - T_{d-1}`.
pub fn chebyshev(d: usize) -> UniPoly {
    let mut prev = UniPoly::constant(1.0);
    if d == 0 {
        return prev;
    }
    let mut cur = UniPoly::x();
    for _ in 1..d {
        let next = UniPoly::x().scale(2.0).mul(&cur).sub(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Generalized binomial coefficient `C(a, j)` for real `a`.
pub fn binom_real(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, k| acc * (a - k as f64) / (k as f64 + 1.0))
}

fn check_jacobi_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::BadParam(format!(
            "Jacobi parameters must exceed -1 (alpha = {alpha}, beta = {beta})"
        )));
    }
    Ok(())
}

/// Jacobi polynomial `J_d^{alpha,beta}` from the explicit sum
/// `2^-d sum_j C(d+alpha, j) C(d+beta, d-j) (x-1)^(d-j) (x+1)^j`.
pub fn jacobi(d: usize, alpha: f64, beta: f64) -> Result<UniPoly> {
    check_jacobi_params(alpha, beta)?;
    let minus = UniPoly::linear(-1.0, 1.0);
    let plus = UniPoly::linear(1.0, 1.0);
    let df = d as f64;
    let mut out = UniPoly::zero();
    for j in 0..=d {
        let c = binom_real(df + alpha, j) * binom_real(df + beta, d - j);
        out = out.add(&minus.powi(d - j).mul(&plus.powi(j)).scale(c));
    }
    Ok(out.scale(0.5f64.powi(d as i32)))
}

/// Value of `J_d^{alpha,beta}(x)` by the three-term recurrence.
pub fn jacobi_eval(d: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_jacobi_params(alpha, beta)?;
    Ok(jacobi_values(d, alpha, beta, x).pop().unwrap_or(1.0))
}

/// `[J_0(x), ..., J_d(x)]` by the three-term recurrence.
fn jacobi_values(d: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(1.0);
    if d == 0 {
        return out;
    }
    out.push((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0);
    for n in 2..=d {
        let nf = n as f64;
        let c = 2.0 * nf + a + b;
        let a1 = 2.0 * nf * (nf + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * c;
        let next = ((a2 + a3 * x) * out[n - 1] - a4 * out[n - 2]) / a1;
        out.push(next);
    }
    out
}

/// `h_i = int_{-1}^1 (1-x)^alpha (1+x)^beta J_i(x)^2 dx`.
pub fn jacobi_norm_sq(i: usize, alpha: f64, beta: f64) -> f64 {
    let s = alpha + beta;
    if i == 0 {
        return ((s + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
            - ln_gamma(s + 2.0))
        .exp();
    }
    let fi = i as f64;
    let log = (s + 1.0) * std::f64::consts::LN_2 - (2.0 * fi + s + 1.0).ln()
        + ln_gamma(fi + alpha + 1.0)
        + ln_gamma(fi + beta + 1.0)
        - ln_gamma(fi + s + 1.0)
        - ln_gamma(fi + 1.0);
    log.exp()
}

/// Reproducing kernel `K_k(x, x0) = sum_{i<=k} q_i(x) q_i(x0)` of the
/// orthonormal Jacobi polynomials `q_i = J_i / sqrt(h_i)`.
pub fn jacobi_kernel(k: usize, alpha: f64, beta: f64, x0: f64) -> Result<UniPoly> {
    check_jacobi_params(alpha, beta)?;
    let at = jacobi_values(k, alpha, beta, x0);
    let mut out = UniPoly::zero();
    for (i, v) in at.iter().enumerate() {
        let q = jacobi(i, alpha, beta)?;
        out = out.add(&q.scale(v / jacobi_norm_sq(i, alpha, beta)));
    }
    Ok(out)
}

/// Which Klurman density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KlurmanKind {
    /// `(1+x) sum_{i<=k} J_i^{(0,1)}(x)^2`
    S,
    /// `(1-x^2) sum_{i<k} J_i^{(1,1)}(x)^2`
    H,
    /// `sum_{i<=k} J_i^{(0,0)}(x)^2`
    F,
}

impl KlurmanKind {
    fn params(self) -> (f64, f64) {
        match self {
            KlurmanKind::S => (0.0, 1.0),
            KlurmanKind::H => (1.0, 1.0),
            KlurmanKind::F => (0.0, 0.0),
        }
    }

    /// Polynomial weight multiplying the sum of squares.
    pub fn weight(self) -> UniPoly {
        match self {
            KlurmanKind::S => UniPoly::linear(1.0, 1.0),
            KlurmanKind::H => UniPoly::new(vec![1.0, 0.0, -1.0]),
            KlurmanKind::F => UniPoly::constant(1.0),
        }
    }

    /// Number of squared terms for index `k`.
    fn terms(self, k: usize) -> usize {
        match self {
            KlurmanKind::H => k,
            _ => k + 1,
        }
    }
}

/// Scaling of the Jacobi polynomials inside the Klurman sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `J_i` exactly as given by the explicit sum.
    Standard,
    /// `J_i / sqrt(h_i)`, orthonormal for the Jacobi weight. This is the scaling
    /// under which `2 max(...)` is the sharp derivative bound for monotone
    /// polynomials.
    Orthonormal,
}

/// Klurman density `S_k`, `H_k` or `F_k` expanded to monomials.
pub fn klurman_family(kind: KlurmanKind, k: usize, norm: Normalization) -> Result<UniPoly> {
    if kind == KlurmanKind::H && k == 0 {
        return Err(Error::BadParam("H_k requires k >= 1".into()));
    }
    let (a, b) = kind.params();
    let mut sum = UniPoly::zero();
    for i in 0..kind.terms(k) {
        let j = jacobi(i, a, b)?;
        let w = match norm {
            Normalization::Standard => 1.0,
            Normalization::Orthonormal => 1.0 / jacobi_norm_sq(i, a, b),
        };
        sum = sum.add(&j.mul(&j).scale(w));
    }
    Ok(kind.weight().mul(&sum))
}

/// Orthonormal Klurman density evaluated pointwise by recurrence; usable for
/// indices far beyond what the monomial expansion tolerates.
pub fn klurman_value(kind: KlurmanKind, k: usize, x: f64) -> Result<f64> {
    if kind == KlurmanKind::H && k == 0 {
        return Err(Error::BadParam("H_k requires k >= 1".into()));
    }
    let (a, b) = kind.params();
    let terms = kind.terms(k);
    let vals = jacobi_values(terms - 1, a, b, x);
    let sum: f64 = vals
        .iter()
        .enumerate()
        .map(|(i, v)| v * v / jacobi_norm_sq(i, a, b))
        .sum();
    Ok(kind.weight().eval(x) * sum)
}

/// Klurman's bound on `|p'(x0)| / ||p||_inf` over monotone polynomials of degree `d`:
/// `2 max(S_k(x0), S_k(-x0))` for `d = 2k+2` and `2 max(F_k(x0), H_k(x0))` for `d = 2k+1`.
pub fn klurman_bound(d: usize, x0: f64) -> Result<f64> {
    if d == 0 {
        return Ok(0.0);
    }
    if d % 2 == 0 {
        let k = (d - 2) / 2;
        let s = klurman_value(KlurmanKind::S, k, x0)?.max(klurman_value(KlurmanKind::S, k, -x0)?);
        Ok(2.0 * s)
    } else {
        let k = (d - 1) / 2;
        let f = klurman_value(KlurmanKind::F, k, x0)?;
        let h = if k >= 1 {
            klurman_value(KlurmanKind::H, k, x0)?
        } else {
            0.0
        };
        Ok(2.0 * f.max(h))
    }
}

/// `min(d^2, d / sqrt(1 - x^2))`, equal to `d^2` at `|x| = 1`.
pub fn bernstein_markov_bound(d: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::BadParam(format!("x = {x} outside [-1, 1]")));
    }
    let df = d as f64;
    let markov = df * df;
    let r = 1.0 - x * x;
    if r <= 0.0 {
        return Ok(markov);
    }
    Ok(markov.min(df / r.sqrt()))
}
