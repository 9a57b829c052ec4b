//! Numerical estimators for the extremal constants `K_d`, `M_d` and
//! `C_{d, alpha}`.
//!
//! `K_d` and `M_d` are linear programs over polynomial coefficients with a
//! continuum of constraints. Each is solved on a finite point set, the
//! continuous constraint is checked exactly on the result, the worst points
//! are added as cuts and the program is re-solved. The LP value on any finite
//! point set is an upper bound; rescaling the final polynomial until it is
//! feasible gives a certified lower bound.

use serde::{Deserialize, Serialize};

use super::lp::{DenseLP, Sense};
use super::random::{random_bounded, MAX_RANDOM_VARS};
use crate::constructs::{character, klurman_reference, named_example, NamedExample};
use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::operators::noise;
use crate::par;
use crate::poly::{klurman_bound, scan_grid, UniPoly};

/// Largest degree accepted by [`estimate_k`].
pub const MAX_K_DEGREE: usize = 8;
/// Largest degree accepted by [`estimate_m`].
pub const MAX_M_DEGREE: usize = 20;
/// Violation at which cutting stops.
const CUT_TOL: f64 = 1e-11;
/// Violation beyond which the result is not certified.
pub const CERT_TOL: f64 = 1e-6;
/// Relative gap between the LP bound and the certified value that ends cutting.
const GAP_TOL: f64 = 1e-8;
const MAX_ROUNDS: usize = 80;
const EXTREMUM_TOL: f64 = 1e-13;
/// Box on Chebyshev coefficients in the `M_d` program (twice the true bound).
const COEFF_BOX: f64 = 4.0;

/// Result of [`estimate_k`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimate {
    pub d: usize,
    /// Certified lower bound: `h'(1)` of a feasible polynomial.
    pub value: f64,
    /// LP optimum over the final point set, an upper bound on `K_d`.
    pub upper: f64,
    /// Monomial coefficients of the final LP polynomial.
    pub coeffs: Vec<f64>,
    /// Relative violation of the continuous constraint before rescaling.
    pub violation: f64,
    pub rounds: usize,
    pub certified: bool,
}

/// `v^d h(1/v)`: coefficients reversed after padding to degree `d`.
fn reversed(h: &UniPoly, d: usize) -> UniPoly {
    let mut c = h.coeffs().to_vec();
    c.resize(d + 1, 0.0);
    c.reverse();
    UniPoly::new(c)
}

/// Largest `|p|` on `[-1, 1]` and where it occurs.
fn abs_peak(p: &UniPoly) -> (f64, f64) {
    let (xa, va) = p.max_on(-1.0, 1.0, EXTREMUM_TOL);
    let (xb, vb) = p.min_on(-1.0, 1.0, EXTREMUM_TOL);
    if va >= -vb {
        (xa, va)
    } else {
        (xb, -vb)
    }
}

/// Critical points and endpoints of `p` on `[-1, 1]` where `|p| > 1 + CUT_TOL`.
fn violating_extrema(p: &UniPoly) -> Vec<f64> {
    let mut xs = p.derivative().sign_change_roots(-1.0, 1.0, EXTREMUM_TOL);
    xs.push(-1.0);
    xs.push(1.0);
    xs.retain(|&x| p.eval(x).abs() > 1.0 + CUT_TOL);
    xs
}

/// Critical points of `p'` and endpoints where `p' < -CUT_TOL`.
fn negative_slopes(dp: &UniPoly) -> Vec<f64> {
    let mut xs = dp.derivative().sign_change_roots(-1.0, 1.0, EXTREMUM_TOL);
    xs.push(-1.0);
    xs.push(1.0);
    xs.retain(|&x| dp.eval(x) < -CUT_TOL);
    xs
}

/// `K_d = sup h'(1)` over real polynomials with `|h(e)| <= max(1, |e|^d)`.
///
/// The constraint splits exactly into `|h| <= 1` on `[-1, 1]` and
/// `|v^d h(1/v)| <= 1` on `[-1, 1]`, the second covering `|e| >= 1` with the
/// point `v = 0` being the leading-coefficient box `|c_d| <= 1`. The initial
/// point set is a Chebyshev grid of `grid_size` points on `[-R, R]` (each
/// point routed to whichever form covers it) plus a grid on `|v| <= 1/R`.
pub fn estimate_k(d: usize, grid_radius: f64, grid_size: usize) -> Result<KEstimate> {
    if d == 0 || d > MAX_K_DEGREE {
        return Err(Error::BadParam(format!("K_d needs 1 <= d <= {MAX_K_DEGREE}, got {d}")));
    }
    if !(grid_radius >= 4.0) {
        return Err(Error::BadParam(format!("grid radius must be >= 4, got {grid_radius}")));
    }
    let size = grid_size.max(2 * d + 4);
    let mut inner: Vec<f64> = vec![-1.0, 0.0, 1.0];
    let mut outer: Vec<f64> = vec![0.0];
    for e in scan_grid(-grid_radius, grid_radius, size) {
        if e.abs() <= 1.0 {
            inner.push(e);
        } else {
            outer.push(1.0 / e);
        }
    }
    outer.extend(scan_grid(-1.0 / grid_radius, 1.0 / grid_radius, size / 4 + 4));

    let objective: Vec<f64> = (0..=d).map(|j| j as f64).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut lp = DenseLP::new(objective.clone());
        for &x in &inner {
            let row: Vec<f64> = (0..=d).map(|j| x.powi(j as i32)).collect();
            lp.add_row(row.clone(), Sense::Le, 1.0);
            lp.add_row(row.iter().map(|v| -v).collect(), Sense::Le, 1.0);
        }
        for &v in &outer {
            let row: Vec<f64> = (0..=d).map(|j| v.powi((d - j) as i32)).collect();
            lp.add_row(row.clone(), Sense::Le, 1.0);
            lp.add_row(row.iter().map(|v| -v).collect(), Sense::Le, 1.0);
        }
        let sol = lp.solve()?;
        let h = UniPoly::new(sol.x.clone());
        let rev = reversed(&h, d);
        let (xi, pi) = abs_peak(&h);
        let (xo, po) = abs_peak(&rev);
        let violation = (pi.max(po) - 1.0).max(0.0);
        if violation <= CUT_TOL || rounds >= MAX_ROUNDS {
            let slope = h.derivative().eval(1.0);
            if violation > CERT_TOL {
                return Err(Error::CertificationFailed { violation });
            }
            return Ok(KEstimate {
                d,
                value: slope / (1.0 + violation),
                upper: sol.objective,
                coeffs: sol.x,
                violation,
                rounds,
                certified: true,
            });
        }
        if pi > 1.0 + CUT_TOL {
            inner.push(xi);
            inner.extend(violating_extrema(&h));
        }
        if po > 1.0 + CUT_TOL {
            outer.push(xo);
            outer.extend(violating_extrema(&rev));
        }
    }
}

/// Default `K_d` estimate: `R = max(4, 2d)`, 64 initial points.
pub fn estimate_k_default(d: usize) -> Result<KEstimate> {
    estimate_k(d, (2.0 * d as f64).max(4.0), 64)
}

/// Result of [`estimate_m`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MEstimate {
    pub d: usize,
    /// Certified lower bound: `p'(0) / ||p||_inf` of a monotone polynomial.
    pub value: f64,
    /// LP optimum over the final point set.
    pub upper: f64,
    /// `p'(0)` of the Jacobi-kernel construction.
    pub klurman_reference: f64,
    /// `2 max(family(0))`, the proved upper bound at `x0 = 0`.
    pub klurman_bound: f64,
    pub violation: f64,
    pub rounds: usize,
    pub certified: bool,
    /// Monomial coefficients of the certified polynomial.
    pub coeffs: Vec<f64>,
}

/// `[T_0(x), ..., T_d(x)]` and `[T_0'(x), ..., T_d'(x)]`.
fn chebyshev_rows(x: f64, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![1.0, x];
    // U_{k-1}, with T_k' = k U_{k-1}
    let mut u = vec![1.0, 2.0 * x];
    for k in 2..=d {
        t.push(2.0 * x * t[k - 1] - t[k - 2]);
        u.push(2.0 * x * u[k - 1] - u[k - 2]);
    }
    t.truncate(d + 1);
    let dt = (0..=d).map(|k| if k == 0 { 0.0 } else { k as f64 * u[k - 1] }).collect();
    (t, dt)
}

/// `M_d = max p'(0) / ||p||_inf` over polynomials of degree `d` that are
/// non-decreasing on `[-1, 1]`, with `p` in the Chebyshev basis.
pub fn estimate_m(d: usize, grid_size: usize) -> Result<MEstimate> {
    if d == 0 || d > MAX_M_DEGREE {
        return Err(Error::BadParam(format!("M_d needs 1 <= d <= {MAX_M_DEGREE}, got {d}")));
    }
    let grid = scan_grid(-1.0, 1.0, grid_size.max(4 * d + 8));
    let mut value_pts = grid.clone();
    let mut slope_pts = grid;
    let (_, objective) = chebyshev_rows(0.0, d);
    let dscale = 1.0 / (d * d) as f64;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut lp = DenseLP::new(objective.clone());
        // Chebyshev coefficients of a polynomial bounded by 1 lie in [-2, 2];
        // the box keeps every variable nonnegative after a shift.
        for k in 0..=d {
            lp.set_bounds(k, -COEFF_BOX, COEFF_BOX);
        }
        for &x in &value_pts {
            let (t, _) = chebyshev_rows(x, d);
            lp.add_row(t.clone(), Sense::Le, 1.0);
            lp.add_row(t.iter().map(|v| -v).collect(), Sense::Le, 1.0);
        }
        for &x in &slope_pts {
            let (_, dt) = chebyshev_rows(x, d);
            lp.add_row(dt.iter().map(|v| -v * dscale).collect(), Sense::Le, 0.0);
        }
        let sol = lp.solve()?;
        let p = UniPoly::from_chebyshev(&sol.x);
        let dp = p.derivative();
        let (xm, dmin) = dp.min_on(-1.0, 1.0, EXTREMUM_TOL);
        let (xs, peak) = abs_peak(&p);
        let dip = (-dmin).max(0.0);
        let violation = dip.max(peak - 1.0).max(0.0);
        // Adding dip * x restores monotonicity; dividing by the sup restores the bound.
        let fixed = p.add(&UniPoly::linear(0.0, dip));
        let value = fixed.derivative().eval(0.0) / abs_peak(&fixed).1;
        let closed = sol.objective - value <= GAP_TOL * sol.objective.abs().max(1.0);
        if violation <= CUT_TOL || closed || rounds >= MAX_ROUNDS {
            if violation > CERT_TOL {
                return Err(Error::CertificationFailed { violation });
            }
            return Ok(MEstimate {
                d,
                value,
                upper: sol.objective,
                klurman_reference: klurman_reference(d)?,
                klurman_bound: klurman_bound(d, 0.0)?,
                violation,
                rounds,
                certified: true,
                coeffs: fixed.coeffs().to_vec(),
            });
        }
        if dmin < -CUT_TOL {
            slope_pts.push(xm);
            slope_pts.extend(negative_slopes(&dp));
        }
        if peak > 1.0 + CUT_TOL {
            value_pts.push(xs);
            value_pts.extend(violating_extrema(&p));
        }
    }
}

/// Default `M_d` estimate with a 16d-point initial grid.
pub fn estimate_m_default(d: usize) -> Result<MEstimate> {
    estimate_m(d, 16 * d)
}

/// `p'(0) / d` of the extremal monotone construction, from Jacobi values at 0
/// by recurrence; usable for `d` in the hundreds.
pub fn monotone_ratio(d: usize) -> Result<f64> {
    Ok(klurman_bound(d, 0.0)? / d as f64)
}

/// Result of [`estimate_c`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CEstimate {
    pub d: usize,
    pub alpha: f64,
    pub n: usize,
    /// Best `||f||_1 / ||T_alpha f||_1` found.
    pub value: f64,
    /// `alpha^-min(d^2, n)`.
    pub cap: f64,
    /// Which candidate attained the value.
    pub source: String,
}

/// Ratio `||f||_1 / ||T_alpha f||_1`, `None` for the zero function.
pub fn noise_ratio(f: &CubeFunction, alpha: f64) -> Result<Option<f64>> {
    let num = f.l1_norm();
    if num == 0.0 {
        return Ok(None);
    }
    Ok(Some(num / noise(f, alpha)?.l1_norm()))
}

/// Pads a function with dummy variables up to `n`.
fn embed(f: CubeFunction, n: usize) -> Result<CubeFunction> {
    if f.n() == n {
        return Ok(f);
    }
    f.tensor(&CubeFunction::constant(n - f.n(), 1.0)?)
}

/// Empirical lower bound on `C_{d, alpha}` over `n`-variable functions of
/// degree at most `d`: constants, characters up to degree `d`, the named
/// constructions that fit, and `trials` random bounded functions.
pub fn estimate_c(d: usize, alpha: f64, n: usize, trials: usize, seed: u64) -> Result<CEstimate> {
    if n == 0 || n > MAX_RANDOM_VARS {
        return Err(Error::SizeError(format!("C estimate needs 1 <= n <= {MAX_RANDOM_VARS}, got {n}")));
    }
    if d > n {
        return Err(Error::DegreeTooHigh { degree: d, n });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::BadParam(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let mut candidates: Vec<(String, CubeFunction)> = vec![("constant".into(), CubeFunction::constant(n, 1.0)?)];
    for k in 1..=d {
        candidates.push((format!("character({k})"), character((1 << k) - 1, n)?));
    }
    let mut named = vec![NamedExample::F4, NamedExample::QuadS, NamedExample::QuadT];
    named.extend((2..=d).map(NamedExample::F4TimesCharacter));
    named.extend((1..=n / 2).map(NamedExample::HomogeneousCounterexample));
    for e in named {
        if e.degree() <= d && e.n() <= n {
            candidates.push((e.to_string(), embed(named_example(e)?, n)?));
        }
    }
    let mut best = ("constant".to_string(), 1.0);
    for (name, f) in &candidates {
        if let Some(r) = noise_ratio(f, alpha)? {
            if r > best.1 {
                best = (name.clone(), r);
            }
        }
    }
    let random: Vec<Result<Option<f64>>> = par::map(trials, |t| {
        let s = seed.wrapping_add(t as u64);
        noise_ratio(&random_bounded(n, d, s)?, alpha)
    });
    for (t, r) in random.into_iter().enumerate() {
        if let Some(r) = r? {
            if r > best.1 {
                best = (format!("random(seed={})", seed.wrapping_add(t as u64)), r);
            }
        }
    }
    Ok(CEstimate {
        d,
        alpha,
        n,
        value: best.1,
        cap: alpha.powi((d * d).min(n) as i32).recip(),
        source: best.0,
    })
}
