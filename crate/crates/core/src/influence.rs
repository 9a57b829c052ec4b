//! Discrete derivatives, L_p influences, sensitivity and the Laplacian.

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::par;

fn check_var(f: &CubeFunction, i: usize) -> Result<usize> {
    if i == 0 || i > f.n() {
        return Err(Error::IndexOutOfRange { index: i, n: f.n() });
    }
    Ok(1 << (i - 1))
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadExponent(p));
    }
    Ok(())
}

/// `f_i(x) = (f(x) - f(x ^ e_i)) / 2`, for a 1-based variable `i`.
pub fn discrete_derivative(f: &CubeFunction, i: usize) -> Result<CubeFunction> {
    let bit = check_var(f, i)?;
    let v = f.values();
    CubeFunction::from_fn(f.n(), |x| (v[x] - v[x ^ bit]) / 2.0)
}

/// `Inf_i^(p)[f] = E|f_i|^p`.
pub fn influence_p(f: &CubeFunction, i: usize, p: f64) -> Result<f64> {
    let bit = check_var(f, i)?;
    check_exponent(p)?;
    let v = f.values();
    let len = v.len();
    Ok(par::sum(len, |x| ((v[x] - v[x ^ bit]) / 2.0).abs().powf(p)) / len as f64)
}

/// `Inf^(p)[f] = sum_i Inf_i^(p)[f]`.
pub fn total_influence_p(f: &CubeFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    (1..=f.n()).map(|i| influence_p(f, i, p)).sum()
}

/// Per-variable L1 influences, variables in order.
pub fn influences(f: &CubeFunction) -> Vec<f64> {
    (1..=f.n())
        .map(|i| influence_p(f, i, 1.0).expect("index in range"))
        .collect()
}

/// Pointwise sensitivity `Delta(f)(x) = sum_i |f_i(x)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityField {
    n: usize,
    delta_values: Vec<f64>,
}

impl SensitivityField {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.delta_values
    }

    /// Maximum sensitivity `||Delta(f)||_inf`.
    pub fn max(&self) -> f64 {
        let v = &self.delta_values;
        par::max(v.len(), |i| v[i])
    }

    /// Average sensitivity, equal to the total L1 influence.
    pub fn mean(&self) -> f64 {
        let v = &self.delta_values;
        par::sum(v.len(), |i| v[i]) / v.len() as f64
    }

    /// `Delta(f)(1)`, the value at the all-ones point.
    pub fn at_one(&self) -> f64 {
        self.delta_values[0]
    }
}

/// Computes `Delta(f)` with one XOR pass per variable and a single accumulator.
pub fn sensitivity_field(f: &CubeFunction) -> SensitivityField {
    let v = f.values();
    let mut acc = vec![0.0; v.len()];
    for k in 0..f.n() {
        let bit = 1usize << k;
        let pass = par::fill(v.len(), |x| ((v[x] - v[x ^ bit]) / 2.0).abs());
        acc.iter_mut().zip(pass).for_each(|(a, d)| *a += d);
    }
    SensitivityField {
        n: f.n(),
        delta_values: acc,
    }
}

/// `Delta(f)` at a single point, from `n + 1` table lookups.
pub fn sensitivity_at(f: &CubeFunction, index: usize) -> f64 {
    let v = f.values();
    (0..f.n())
        .map(|k| ((v[index] - v[index ^ (1 << k)]) / 2.0).abs())
        .sum()
}

/// `L f = f_1 + ... + f_n`; its Fourier coefficients are `|S| f^(S)`.
pub fn laplacian(f: &CubeFunction) -> CubeFunction {
    let v = f.values();
    let n = f.n();
    CubeFunction::from_fn(n, |x| {
        (0..n).map(|k| (v[x] - v[x ^ (1 << k)]) / 2.0).sum()
    })
    .expect("same shape as input")
}

/// `Var^(p)[f] = E|f - E f|^p`.
pub fn variance_p(f: &CubeFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mean = f.fourier().coeff(0);
    let v = f.values();
    let len = v.len();
    Ok(par::sum(len, |x| (v[x] - mean).abs().powf(p)) / len as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{character_sign, coord};

    fn maj3() -> CubeFunction {
        CubeFunction::from_fn(3, |i| (coord(i, 0) + coord(i, 1) + coord(i, 2)).signum()).unwrap()
    }

    fn chi(mask: usize, n: usize) -> CubeFunction {
        CubeFunction::from_fn(n, |i| character_sign(mask, i)).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let x1 = CubeFunction::from_truth_table(1, vec![1.0, -1.0]).unwrap();
        assert_eq!(discrete_derivative(&x1, 1).unwrap().values(), &[1.0, -1.0]);
        let c = chi(0b11, 2);
        assert_eq!(discrete_derivative(&c, 1).unwrap(), c);
        let d = discrete_derivative(&maj3(), 1).unwrap();
        assert_eq!(d.l1_norm(), 0.5);
        assert_eq!(
            discrete_derivative(&c, 3),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        );
        assert!(discrete_derivative(&c, 0).is_err());
    }

    #[test]
    fn influence_examples() {
        assert_eq!(influence_p(&chi(0b11, 2), 1, 1.0).unwrap(), 1.0);
        assert_eq!(influence_p(&maj3(), 1, 1.0).unwrap(), 0.5);
        assert_eq!(influence_p(&maj3(), 1, 2.0).unwrap(), 0.5);
        assert_eq!(total_influence_p(&maj3(), 1.0).unwrap(), 1.5);
        assert_eq!(total_influence_p(&chi(0b1011, 4), 1.0).unwrap(), 3.0);
        assert_eq!(influence_p(&maj3(), 1, 0.5), Err(Error::BadExponent(0.5)));
        assert!(total_influence_p(&maj3(), f64::NAN).is_err());
    }

    #[test]
    fn sensitivity_of_character_is_constant() {
        let s = sensitivity_field(&chi(0b10110, 5));
        assert!(s.values().iter().all(|&d| d == 3.0));
        assert_eq!(s.max(), 3.0);
        assert_eq!(s.mean(), 3.0);
        assert_eq!(sensitivity_at(&chi(0b10110, 5), 7), 3.0);
    }

    #[test]
    fn laplacian_examples() {
        let c = chi(0b101, 3);
        let l = laplacian(&c);
        for i in 0..8 {
            assert_eq!(l.value(i), 2.0 * c.value(i));
        }
        let k = CubeFunction::constant(3, 4.0).unwrap();
        assert!(laplacian(&k).values().iter().all(|&x| x == 0.0));
        let lm = laplacian(&maj3());
        let e = lm.fourier();
        for k in 0..3 {
            assert!((e.coeff(1 << k) - 0.5).abs() < 1e-15);
        }
        assert!((e.coeff(0b111) + 1.5).abs() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance_p(&CubeFunction::constant(2, 3.0).unwrap(), 2.0).unwrap(), 0.0);
        assert_eq!(variance_p(&chi(0b11, 3), 2.0).unwrap(), 1.0);
        assert_eq!(variance_p(&maj3(), 2.0).unwrap(), 1.0);
        assert!(variance_p(&maj3(), 0.9).is_err());
    }
}
