//! Tabulated numerical experiments: Chebyshev lifts approaching their
//! degree, the monotone-polynomial ratio against `1/(2 pi)` and `1/pi`,
//! `K_d` estimates and empirical noise constants.

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_c, estimate_k_default, monotone_ratio};
use crate::constructs::chebyshev_symmetric;
use crate::error::{Error, Result};
use crate::symmetric::symmetric_total_influence;

/// Default degrees of the Chebyshev experiment.
pub const CHEB_DEGREES: [usize; 3] = [3, 5, 7];
/// Default degrees of the monotone experiment.
pub const MONOTONE_DEGREES: [usize; 7] = [2, 4, 8, 20, 40, 100, 200];

/// Variable counts `{d^2 + 1, 10^3, 10^4, 10^5}`, deduplicated and sorted.
pub fn cheb_ladder(d: usize) -> Vec<usize> {
    let mut ns = vec![d * d + 1, 1_000, 10_000, 100_000];
    ns.sort_unstable();
    ns.dedup();
    ns
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebRow {
    pub d: usize,
    pub n: usize,
    pub inf: f64,
    /// `d - Inf`.
    pub gap: f64,
}

/// Total influence of the lifted `T_d` over each `n` of the ladder.
pub fn cheb_limit(degrees: &[usize]) -> Result<Vec<ChebRow>> {
    let mut rows = Vec::new();
    for &d in degrees {
        for n in cheb_ladder(d) {
            let inf = symmetric_total_influence(&chebyshev_symmetric(d, n)?);
            rows.push(ChebRow { d, n, inf, gap: d as f64 - inf });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneRow {
    pub d: usize,
    /// `p'(0)` of the extremal monotone polynomial.
    pub derivative: f64,
    pub ratio: f64,
    pub inv_two_pi: f64,
    pub inv_pi: f64,
}

pub fn monotone_asymptotics(degrees: &[usize]) -> Result<Vec<MonotoneRow>> {
    degrees
        .iter()
        .map(|&d| {
            let ratio = monotone_ratio(d)?;
            Ok(MonotoneRow {
                d,
                derivative: ratio * d as f64,
                ratio,
                inv_two_pi: 0.5 * std::f64::consts::FRAC_1_PI,
                inv_pi: std::f64::consts::FRAC_1_PI,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdRow {
    pub d: usize,
    pub value: f64,
    pub upper: f64,
    pub certified: bool,
}

/// `K_d` for `d = 1..=max_d`; a failed certification is a row with
/// `certified = false` and NaN values rather than an error.
pub fn kd_table(max_d: usize) -> Result<Vec<KdRow>> {
    (1..=max_d)
        .map(|d| match estimate_k_default(d) {
            Ok(k) => Ok(KdRow { d, value: k.value, upper: k.upper, certified: k.certified }),
            Err(Error::CertificationFailed { .. }) => Ok(KdRow { d, value: f64::NAN, upper: f64::NAN, certified: false }),
            Err(e) => Err(e),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CRow {
    pub d: usize,
    pub alpha: f64,
    pub n: usize,
    pub value: f64,
    pub cap: f64,
    pub source: String,
}

/// Empirical `C_{d, alpha}` lower bounds at `alpha in {1/2, 1 - 1/d}` (or
/// the given `alpha`) for `d = 1..=max_d` on `n` variables.
pub fn c_table(max_d: usize, n: usize, alpha: Option<f64>, trials: usize, seed: u64) -> Result<Vec<CRow>> {
    let mut rows = Vec::new();
    for d in 1..=max_d.min(n) {
        let mut alphas = match alpha {
            Some(a) => vec![a],
            None => vec![0.5, 1.0 - 1.0 / d as f64],
        };
        alphas.retain(|&a| a > 0.0);
        alphas.dedup();
        for a in alphas {
            let c = estimate_c(d, a, n, trials, seed)?;
            rows.push(CRow { d, alpha: a, n, value: c.value, cap: c.cap, source: c.source });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder() {
        assert_eq!(cheb_ladder(3), vec![10, 1_000, 10_000, 100_000]);
        assert_eq!(cheb_ladder(40), vec![1_000, 1_601, 10_000, 100_000]);
    }

    #[test]
    fn cheb_gaps_shrink() {
        let rows = cheb_limit(&[3]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.gap > 0.0));
        assert!(rows.windows(2).all(|w| w[1].inf > w[0].inf));
    }

    #[test]
    fn small_tables() {
        let k = kd_table(2).unwrap();
        assert!((k[0].value - 1.0).abs() < 1e-9);
        assert!((k[1].value - (1.0 + 2f64.sqrt())).abs() < 1e-6);
        let m = monotone_asymptotics(&[2, 3]).unwrap();
        assert!((m[0].derivative - 1.0).abs() < 1e-12);
        assert!((m[1].derivative - 1.5).abs() < 1e-12);
        let c = c_table(2, 4, None, 4, 1).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|r| r.value >= 1.0 && r.value <= r.cap * (1.0 + 1e-12)));
    }
}
