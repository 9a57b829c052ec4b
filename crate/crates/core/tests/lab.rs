//! The LP solver against vertex enumeration, and the estimators against
//! the constraints they claim to certify.

use cubeinf::constructs::{character, klurman_reference};
use cubeinf::lab::checks::check_noise_contraction;
use cubeinf::lab::estimate::{estimate_c, estimate_k_default, estimate_m_default};
use cubeinf::lab::lp::{DenseLP, Sense};
use cubeinf::poly::{klurman_bound, UniPoly};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Best objective over all vertices of `{x : A x <= b}`: every choice of
/// `n` rows taken as equalities, kept if nonsingular and feasible.
fn vertex_oracle(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    let n = c.len();
    let m = a.len();
    let mut best = f64::NEG_INFINITY;
    let mut pick = vec![0usize; n];
    fn rec(
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
        m: usize,
    ) {
        if depth == pick.len() {
            visit(pick);
            return;
        }
        for r in start..m {
            pick[depth] = r;
            rec(r + 1, depth + 1, pick, visit, m);
        }
    }
    let mut visit = |rows: &[usize]| {
        let mat = DMatrix::from_fn(n, n, |i, j| a[rows[i]][j]);
        let rhs = DVector::from_iterator(n, rows.iter().map(|&r| b[r]));
        if mat.determinant().abs() < 1e-9 {
            return;
        }
        let Some(x) = mat.lu().solve(&rhs) else { return };
        let feasible = a
            .iter()
            .zip(b)
            .all(|(row, &bi)| row.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= bi + 1e-9);
        if feasible {
            best = best.max(c.iter().zip(x.iter()).map(|(p, q)| p * q).sum());
        }
    };
    rec(0, 0, &mut pick, &mut visit, m);
    best
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..300 {
        let n = rng.random_range(1..=3);
        let rows = rng.random_range(1..=7);
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut a: Vec<Vec<f64>> = (0..rows).map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let mut b: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..3.0)).collect();
        let mut lp = DenseLP::new(c.clone());
        for (row, &bi) in a.iter().zip(&b) {
            lp.add_row(row.clone(), Sense::Le, bi);
        }
        // a box keeps the program bounded; fed to the oracle as rows
        for j in 0..n {
            lp.set_bounds(j, -5.0, 5.0);
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            a.push(e.clone());
            b.push(5.0);
            a.push(e.iter().map(|v| -v).collect());
            b.push(5.0);
        }
        let oracle = vertex_oracle(&c, &a, &b);
        match lp.solve() {
            Ok(sol) => {
                assert!((sol.objective - oracle).abs() < 1e-8, "trial {trial}: {} vs {oracle}", sol.objective);
                assert!(sol.primal_residual <= 1e-9);
                assert!(sol.dual_residual <= 1e-9 && sol.duality_gap <= 1e-8);
            }
            Err(e) => assert!(oracle == f64::NEG_INFINITY, "trial {trial}: {e} but oracle found {oracle}"),
        }
    }
}

#[test]
fn simplex_is_deterministic() {
    let mut lp = DenseLP::new(vec![1.0, 1.0, 0.5]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let row: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        lp.add_row(row, Sense::Le, 1.0);
    }
    for j in 0..3 {
        lp.set_bounds(j, -10.0, 10.0);
    }
    let first = lp.solve().unwrap();
    for _ in 0..5 {
        let again = lp.solve().unwrap();
        assert_eq!(again.basis, first.basis);
        assert_eq!(again.objective.to_bits(), first.objective.to_bits());
    }
}

#[test]
fn k_small_degrees() {
    let k1 = estimate_k_default(1).unwrap();
    assert!((k1.value - 1.0).abs() < 1e-9 && k1.certified);
    let k2 = estimate_k_default(2).unwrap();
    assert!((k2.value - (1.0 + 2f64.sqrt())).abs() < 1e-3 && k2.certified);
}

#[test]
fn k_polynomials_satisfy_the_constraint() {
    for d in 1..=5 {
        let k = estimate_k_default(d).unwrap();
        assert!(k.value <= k.upper + 1e-9);
        let h = UniPoly::new(k.coeffs.clone()).scale(1.0 / (1.0 + k.violation));
        assert!((h.derivative().eval(1.0) - k.value).abs() < 1e-9 * k.value);
        for j in 0..=20_000 {
            let e = -100.0 + j as f64 / 100.0;
            let cap = 1f64.max(e.abs().powi(d as i32));
            assert!(h.eval(e).abs() <= cap * (1.0 + 1e-9), "d = {d}, eps = {e}");
        }
        // degree-d leading coefficient dominates beyond the grid
        assert!(h.coeffs().get(d).map_or(0.0, |c| c.abs()) <= 1.0 + 1e-9);
    }
}

#[test]
fn m_dominates_the_construction() {
    for d in 1..=10 {
        let m = estimate_m_default(d).unwrap();
        assert!(m.certified);
        assert!(m.value >= klurman_reference(d).unwrap() - 1e-6, "d = {d}: {}", m.value);
        assert!(m.value <= klurman_bound(d, 0.0).unwrap() * (1.0 + 1e-9));
        // the certified polynomial is monotone and bounded by one
        let p = UniPoly::new(m.coeffs.clone());
        let dp = p.derivative();
        let sup = p.sup_norm(1e-12);
        for j in 0..=4000 {
            let x = -1.0 + j as f64 / 2000.0;
            assert!(dp.eval(x) >= -1e-9);
        }
        assert!((dp.eval(0.0) / sup - m.value).abs() < 1e-9);
    }
}

#[test]
fn noise_contraction_equality_for_dictator() {
    for alpha in [0.1, 0.5, 0.9, 1.0] {
        let r = check_noise_contraction(&character(1, 3).unwrap(), alpha).unwrap();
        assert!(r.pass && r.slack.abs() <= 1e-12);
    }
}

#[test]
fn c_estimates() {
    let a = estimate_c(2, 0.5, 6, 30, 4).unwrap();
    let b = estimate_c(2, 0.5, 6, 30, 4).unwrap();
    assert_eq!(a, b);
    // chi_{1,2} attains alpha^-2 exactly
    assert!((a.value - 4.0).abs() < 1e-12);
    assert!(a.value <= a.cap);
}
