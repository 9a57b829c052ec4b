//! Symmetric functions as level profiles, and the reduction
//! `f(x) = p((x_1 + ... + x_n) / n)` to a univariate polynomial.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::cube::{CubeFunction, DEG_TOL, MAX_VARS};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::{UniPoly, SUP_TOL};
use crate::report::BoundReport;

/// Maximum residual at the nodes tolerated by [`to_univariate`], relative to
/// `max(1, max |level|)`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Highest degree [`to_univariate`] will search.
pub const MAX_FIT_DEGREE: usize = 64;

/// Values of a symmetric function on each Hamming level:
/// `levels[k]` is the value at points with exactly `k` coordinates equal to -1,
/// i.e. at mean-coordinate abscissa `t_k = (n - 2k) / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelProfile {
    n: usize,
    levels: Vec<f64>,
}

/// Binomial(n, 1/2) probabilities, computed in log space and renormalized.
pub fn binomial_pmf(n: usize) -> Vec<f64> {
    let ln2 = std::f64::consts::LN_2;
    let nn = n as u64;
    let raw = par::fill(n + 1, |k| (ln_binomial(nn, k as u64) - n as f64 * ln2).exp());
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

impl LevelProfile {
    pub fn new(n: usize, levels: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParam("level profile needs n >= 1".into()));
        }
        if levels.len() != n + 1 {
            return Err(Error::LengthMismatch {
                n,
                expected: n + 1,
                got: levels.len(),
            });
        }
        if let Some(index) = levels.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Mean-coordinate value of level `k`.
    pub fn abscissa(&self, k: usize) -> f64 {
        (self.n as f64 - 2.0 * k as f64) / self.n as f64
    }

    /// Dense truth table, for `n <= 24`.
    pub fn to_cube(&self) -> Result<CubeFunction> {
        if self.n > MAX_VARS {
            return Err(Error::TooLarge(self.n));
        }
        let levels = &self.levels;
        CubeFunction::from_fn(self.n, |i| levels[i.count_ones() as usize])
    }

    /// `E f` under the uniform measure.
    pub fn mean(&self) -> f64 {
        binomial_pmf(self.n)
            .iter()
            .zip(&self.levels)
            .map(|(w, l)| w * l)
            .sum()
    }

    /// `max_k |levels[k]|`.
    pub fn sup_norm(&self) -> f64 {
        self.levels.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sum_i f^({i}) = E[(x_1 + ... + x_n) f]`.
    pub fn first_level_sum(&self) -> f64 {
        let n = self.n as f64;
        binomial_pmf(self.n)
            .iter()
            .zip(&self.levels)
            .enumerate()
            .map(|(k, (w, l))| w * (n - 2.0 * k as f64) * l)
            .sum()
    }

    /// Levels non-increasing in `k`, which makes the lifted function monotone increasing.
    pub fn is_monotone_increasing(&self, tol: f64) -> bool {
        self.levels.windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

/// Result of recovering the univariate polynomial behind a level profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Univariate {
    pub poly: UniPoly,
    pub degree: usize,
    /// Max deviation at the `n + 1` nodes.
    pub residual: f64,
}

fn chebyshev_row(t: f64, deg: usize) -> impl Iterator<Item = f64> {
    let mut prev = 1.0;
    let mut cur = t;
    (0..=deg).map(move |j| match j {
        0 => 1.0,
        1 => t,
        _ => {
            let next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
            next
        }
    })
}

/// Recovers `p` with `levels[k] = p(t_k)` at all `n + 1` nodes.
///
/// Candidate degrees are tried in increasing order; each is a least-squares fit
/// in the Chebyshev basis over every node, and the first whose residual is
/// within [`RESIDUAL_TOL`] is accepted. Trailing monomial coefficients at or
/// below `deg_tol` are then dropped.
pub fn to_univariate(lp: &LevelProfile, deg_tol: f64) -> Result<Univariate> {
    let n = lp.n;
    let scale = lp.sup_norm().max(1.0);
    let nodes: Vec<f64> = (0..=n).map(|k| lp.abscissa(k)).collect();
    let y = DVector::from_column_slice(&lp.levels);
    let mut best = f64::INFINITY;
    for deg in 0..=n.min(MAX_FIT_DEGREE) {
        let a = DMatrix::from_fn(n + 1, deg + 1, |r, c| {
            chebyshev_row(nodes[r], deg).nth(c).unwrap_or(0.0)
        });
        let qr = a.clone().qr();
        let qty = qr.q().transpose() * &y;
        let Some(sol) = qr.r().solve_upper_triangular(&qty) else {
            continue;
        };
        let fitted = &a * &sol;
        let residual = (&fitted - &y).amax();
        best = best.min(residual);
        if residual <= RESIDUAL_TOL * scale {
            let mono = UniPoly::from_chebyshev(sol.as_slice());
            let degree = mono.effective_degree(deg_tol);
            let poly = UniPoly::new(mono.coeffs()[..=degree.min(mono.degree())].to_vec());
            let residual = nodes
                .iter()
                .zip(&lp.levels)
                .fold(0.0f64, |m, (&t, &l)| m.max((poly.eval(t) - l).abs()));
            if residual > RESIDUAL_TOL * scale {
                return Err(Error::InconsistentProfile { residual });
            }
            return Ok(Univariate {
                poly,
                degree,
                residual,
            });
        }
    }
    Err(Error::InconsistentProfile { residual: best })
}

/// Levels of `p((x_1 + ... + x_n) / n)`.
pub fn from_univariate(p: &UniPoly, n: usize) -> Result<LevelProfile> {
    if p.degree() > n {
        return Err(Error::DegreeTooHigh {
            degree: p.degree(),
            n,
        });
    }
    let nf = n as f64;
    let levels = par::fill(n + 1, |k| p.eval((nf - 2.0 * k as f64) / nf));
    LevelProfile::new(n, levels)
}

/// Exact L1 total influence of a symmetric function in `O(n)`:
/// `n E_{x in {-1,1}^{n-1}} |f(x, 1) - f(x, -1)| / 2`.
pub fn symmetric_total_influence(lp: &LevelProfile) -> f64 {
    let n = lp.n;
    let w = binomial_pmf(n - 1);
    let l = &lp.levels;
    let nf = n as f64;
    par::sum(n, |k| w[k] * nf * (l[k] - l[k + 1]).abs() / 2.0)
}

/// `Delta(f)(1) = n |p(1) - p(1 - 2/n)| / 2` for the lift of `p` to `n` variables.
pub fn symmetric_delta_at_one(p: &UniPoly, n: usize) -> Result<f64> {
    if p.degree() > n {
        return Err(Error::DegreeTooHigh {
            degree: p.degree(),
            n,
        });
    }
    let nf = n as f64;
    Ok(nf * (p.eval(1.0) - p.eval(1.0 - 2.0 / nf)).abs() / 2.0)
}

/// `n / (n - d^2)`, the sup-norm bound on `p` for bounded symmetric `f`.
pub fn norm_lemma_bound(n: usize, d: usize) -> Result<f64> {
    if n <= d * d {
        return Err(Error::Regime { n, d });
    }
    Ok(n as f64 / (n - d * d) as f64)
}

/// Measures a bounded symmetric function against the symmetric-function bounds.
///
/// Two reports: the sup-norm lemma for the recovered polynomial (skipped when
/// `n <= d^2`), and the measured influence against the reference value `d`.
/// The context records the strong-regime flag `n >= 64 d^4 ln d`, the
/// threshold `t = sqrt(n) (1/(4d^2) - 2/n)`, whether `p` is monotone on
/// `[-1/(4d^2), 1/(4d^2)]`, and the Cauchy–Schwarz fallback `sqrt(d n)`.
pub fn symmetric_bound_report(lp: &LevelProfile) -> Result<Vec<BoundReport>> {
    let inf = symmetric_total_influence(lp);
    let uni = to_univariate(lp, DEG_TOL)?;
    let (n, d) = (lp.n, uni.degree);
    let (nf, df) = (n as f64, d as f64);

    let norm = match norm_lemma_bound(n, d) {
        Ok(bound) => BoundReport::at_most("symmetric_norm_lemma", uni.poly.sup_norm(SUP_TOL), bound),
        Err(e) => BoundReport::skipped("symmetric_norm_lemma", e.to_string()),
    }
    .with("n", nf)
    .with("d", df);

    let strong = d <= 1 || nf >= 64.0 * df.powi(4) * df.ln();
    let t = nf.sqrt() * (1.0 / (4.0 * df * df) - 2.0 / nf);
    let central = if d == 0 {
        true
    } else {
        let half = 1.0 / (4.0 * df * df);
        let dp = uni.poly.derivative();
        let xs = (0..1000).map(|j| -half + 2.0 * half * j as f64 / 999.0);
        let signs: Vec<f64> = xs.map(|x| dp.eval(x)).collect();
        signs.iter().all(|&v| v >= 0.0) || signs.iter().all(|&v| v <= 0.0)
    };
    let mut inf_report = BoundReport::at_most("symmetric_influence_vs_degree", inf, df)
        .with("n", nf)
        .with("d", df)
        .with("strong_regime", f64::from(u8::from(strong)))
        .with("t", t)
        .with("monotone_on_central_interval", f64::from(u8::from(central)))
        .with("cauchy_schwarz_bound", (df * nf).sqrt())
        .with("residual", uni.residual);
    if let Ok(b) = norm_lemma_bound(n, d) {
        inf_report = inf_report.with("leading_term_n_over_n_minus_d2_times_d", b * df);
    }
    if df * df >= nf {
        inf_report = inf_report.with_note("d >= sqrt(n): only the sqrt(dn) bound is available");
    }
    Ok(vec![norm, inf_report])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::total_influence_p;
    use crate::poly::chebyshev;

    #[test]
    fn from_univariate_examples() {
        let lp = from_univariate(&UniPoly::constant(1.0), 5).unwrap();
        assert_eq!(lp.levels(), &[1.0; 6]);
        let lp = from_univariate(&UniPoly::x(), 2).unwrap();
        assert_eq!(lp.levels(), &[1.0, 0.0, -1.0]);
        let lp = from_univariate(&chebyshev(3), 4).unwrap();
        let expect = [1.0, -1.0, 0.0, 1.0, -1.0];
        for (a, b) in lp.levels().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(
            from_univariate(&chebyshev(5), 4),
            Err(Error::DegreeTooHigh { degree: 5, n: 4 })
        );
    }

    #[test]
    fn to_univariate_examples() {
        let lp = LevelProfile::new(7, vec![2.5; 8]).unwrap();
        let u = to_univariate(&lp, DEG_TOL).unwrap();
        assert_eq!(u.degree, 0);
        assert!((u.poly.eval(0.3) - 2.5).abs() < 1e-12);

        let lp = from_univariate(&UniPoly::x(), 6).unwrap();
        let u = to_univariate(&lp, DEG_TOL).unwrap();
        assert_eq!(u.degree, 1);
        assert!((u.poly.coeffs()[1] - 1.0).abs() < 1e-12);

        let lp = from_univariate(&chebyshev(3), 20).unwrap();
        let u = to_univariate(&lp, DEG_TOL).unwrap();
        assert_eq!(u.degree, 3);
        for (a, b) in u.poly.coeffs().iter().zip(chebyshev(3).coeffs()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn influence_examples() {
        let parity = LevelProfile::new(3, vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!((symmetric_total_influence(&parity) - 3.0).abs() < 1e-12);
        let maj = LevelProfile::new(3, vec![1.0, 1.0, -1.0, -1.0]).unwrap();
        assert!((symmetric_total_influence(&maj) - 1.5).abs() < 1e-12);
        let full = total_influence_p(&maj.to_cube().unwrap(), 1.0).unwrap();
        assert!((full - 1.5).abs() < 1e-12);
        let t3 = from_univariate(&chebyshev(3), 10_000).unwrap();
        let inf = symmetric_total_influence(&t3);
        assert!(inf < 3.0 && 3.0 - inf < 0.01, "{inf}");
    }

    #[test]
    fn delta_at_one_examples() {
        assert!((symmetric_delta_at_one(&UniPoly::x(), 37).unwrap() - 1.0).abs() < 1e-12);
        // T2 = 2x^2 - 1, T2(0.8) = 0.28
        assert!((symmetric_delta_at_one(&chebyshev(2), 10).unwrap() - 3.6).abs() < 1e-12);
        for d in 1..=5usize {
            let v = symmetric_delta_at_one(&chebyshev(d), 1_000_000).unwrap();
            assert!((v - (d * d) as f64).abs() < 1e-3, "{d} {v}");
        }
    }

    #[test]
    fn bound_report_examples() {
        let lp = from_univariate(&chebyshev(3), 10_000).unwrap();
        let reps = symmetric_bound_report(&lp).unwrap();
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
        assert!((reps[0].measured - 1.0).abs() < 1e-9);

        let c = LevelProfile::new(5, vec![0.3; 6]).unwrap();
        let reps = symmetric_bound_report(&c).unwrap();
        assert!(reps.iter().all(|r| r.pass));
        assert_eq!(reps[1].measured, 0.0);

        let id = from_univariate(&UniPoly::x(), 100).unwrap();
        let reps = symmetric_bound_report(&id).unwrap();
        assert!((reps[1].measured - 1.0).abs() < 1e-12);
        assert!(reps[1].pass);

        // n <= d^2: the norm clause degrades to skipped
        let lp = from_univariate(&chebyshev(3), 9).unwrap();
        let reps = symmetric_bound_report(&lp).unwrap();
        assert!(reps[0].is_skipped());
        assert_eq!(norm_lemma_bound(9, 3), Err(Error::Regime { n: 9, d: 3 }));
    }

    #[test]
    fn first_level_sum_of_identity() {
        // p(t) = t: sum_i f^({i}) = n * (1/n) = 1
        let lp = from_univariate(&UniPoly::x(), 40).unwrap();
        assert!((lp.first_level_sum() - 1.0).abs() < 1e-12);
    }
}
