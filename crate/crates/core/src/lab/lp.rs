//! Dense primal simplex in dictionary form with Bland's rule.
//!
//! The problem is always a maximization. Rows may be `<=`, `>=` or `=`;
//! variables are free unless bounded. Internally everything is reduced to
//! `max c'x, Ax <= b, x >= 0` (free variables split, bounded variables
//! shifted, `>=` rows negated, `=` rows doubled) and solved in two phases
//! with an auxiliary variable for infeasible starts. Pricing is Dantzig's
//! largest coefficient, falling back to Bland's rule whenever the objective
//! stalls on degenerate pivots, which keeps the termination guarantee. The result carries dual
//! values for the reduced rows and the checks that certify optimality.

use crate::error::{Error, Result};

/// Pivot and ratio-test tolerance.
const EPS: f64 = 1e-11;

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// `max objective . x` subject to rows and per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLP {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    /// `(lower, upper)`, either side may be infinite.
    pub bounds: Vec<(f64, f64)>,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Duals of the reduced `<=` rows.
    pub duals: Vec<f64>,
    /// Reduced-variable labels basic at the optimum, in row order.
    pub basis: Vec<usize>,
    pub iterations: usize,
    /// Largest violation of any original row or bound by `x`.
    pub primal_residual: f64,
    /// Largest violation of dual feasibility.
    pub dual_residual: f64,
    /// `|b'y - c'x|`.
    pub duality_gap: f64,
}

impl DenseLP {
    /// Free variables, no rows.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            rows: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); n],
            max_iterations: 200_000,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) -> &mut Self {
        self.rows.push(Row { coeffs, sense, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn nonnegative(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, 0.0, f64::INFINITY)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if n == 0 {
            return Err(Error::BadParam("LP has no variables".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadParam("non-finite objective".into()));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(Error::BadParam(format!("row {i} has {} coefficients, expected {n}", r.coeffs.len())));
            }
            if !r.rhs.is_finite() || r.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::BadParam(format!("row {i} has non-finite entries")));
            }
        }
        if self.bounds.len() != n {
            return Err(Error::BadParam("bounds length mismatch".into()));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::BadParam(format!("bad bounds on variable {j}")));
            }
        }
        Ok(())
    }

    /// Solves the program.
    pub fn solve(&self) -> Result<LpSolution> {
        self.validate()?;
        let std = Standard::build(self);
        let mut tab = Dictionary::new(&std.a, &std.b, &std.c);
        tab.max_iterations = self.max_iterations;
        tab.run()?;
        let y = tab.final_values(std.c.len());
        let x = std.recover(&y);
        let duals = tab.duals();
        let objective: f64 = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

        let primal_residual = self.primal_residual(&x);
        let mut dual_residual = duals.iter().fold(0.0f64, |m, &u| m.max(-u));
        for (j, cj) in std.c.iter().enumerate() {
            let aty: f64 = std.a.iter().zip(&duals).map(|(row, u)| row[j] * u).sum();
            dual_residual = dual_residual.max(cj - aty);
        }
        let by: f64 = std.b.iter().zip(&duals).map(|(b, u)| b * u).sum();
        let cy: f64 = std.c.iter().zip(&y).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            x,
            objective,
            duals,
            basis: tab.basis.clone(),
            iterations: tab.iterations,
            primal_residual,
            dual_residual,
            duality_gap: (by - cy).abs(),
        })
    }

    /// Largest violation of any row or bound by `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match r.sense {
                Sense::Le => lhs - r.rhs,
                Sense::Ge => r.rhs - lhs,
                Sense::Eq => (lhs - r.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (&(lo, hi), &v) in self.bounds.iter().zip(x) {
            worst = worst.max(lo - v).max(v - hi);
        }
        worst
    }
}

/// How an original variable maps onto nonnegative reduced variables.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + y[k]`
    Shift(usize, f64),
    /// `x = hi - y[k]`
    Reflect(usize, f64),
    /// `x = y[k] - y[k + 1]`
    Split(usize),
}

struct Standard {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    map: Vec<VarMap>,
}

impl Standard {
    fn build(lp: &DenseLP) -> Self {
        let mut map = Vec::with_capacity(lp.n_vars());
        let mut width = 0;
        for &(lo, hi) in &lp.bounds {
            let m = if lo.is_finite() {
                VarMap::Shift(width, lo)
            } else if hi.is_finite() {
                VarMap::Reflect(width, hi)
            } else {
                width += 1;
                VarMap::Split(width - 1)
            };
            width += 1;
            map.push(m);
        }
        // Expands original coefficients into reduced ones, returning the
        // constant absorbed by shifted/reflected variables.
        let expand = |coeffs: &[f64]| -> (Vec<f64>, f64) {
            let mut out = vec![0.0; width];
            let mut constant = 0.0;
            for (&a, m) in coeffs.iter().zip(&map) {
                match *m {
                    VarMap::Shift(k, lo) => {
                        out[k] += a;
                        constant += a * lo;
                    }
                    VarMap::Reflect(k, hi) => {
                        out[k] -= a;
                        constant += a * hi;
                    }
                    VarMap::Split(k) => {
                        out[k] += a;
                        out[k + 1] -= a;
                    }
                }
            }
            (out, constant)
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for r in &lp.rows {
            let (row, k) = expand(&r.coeffs);
            let rhs = r.rhs - k;
            if matches!(r.sense, Sense::Le | Sense::Eq) {
                a.push(row.clone());
                b.push(rhs);
            }
            if matches!(r.sense, Sense::Ge | Sense::Eq) {
                a.push(row.iter().map(|v| -v).collect());
                b.push(-rhs);
            }
        }
        for (&(lo, hi), m) in lp.bounds.iter().zip(&map) {
            if let VarMap::Shift(k, _) = *m {
                if hi.is_finite() {
                    let mut row = vec![0.0; width];
                    row[k] = 1.0;
                    a.push(row);
                    b.push(hi - lo);
                }
            }
        }
        let (c, _) = expand(&lp.objective);
        Self { a, b, c, map }
    }

    fn recover(&self, y: &[f64]) -> Vec<f64> {
        self.map
            .iter()
            .map(|m| match *m {
                VarMap::Shift(k, lo) => lo + y[k],
                VarMap::Reflect(k, hi) => hi - y[k],
                VarMap::Split(k) => y[k] - y[k + 1],
            })
            .collect()
    }
}

/// Dictionary `x_B = d0 + D x_N`, objective `z = z0 + r x_N`.
///
/// Labels `0..nx` are structural columns, the last of which is the phase-one
/// auxiliary `x0` (coefficient -1 in every row); label `nx + i` is the slack
/// of row `i`. Because every basis consists of slacks plus a few structural
/// columns, the dictionary can be rebuilt exactly from the original data by
/// solving a square system no larger than the number of structurals; this is
/// done periodically to stop rounding drift.
struct Dictionary {
    nx: usize,
    m: usize,
    /// Original rows, `m x nx`, auxiliary column included.
    a: Vec<f64>,
    b: Vec<f64>,
    costs: Vec<f64>,
    /// Row-major `m x cols`, column 0 is the constant.
    d: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
    cols: usize,
    frozen: Option<usize>,
    iterations: usize,
    max_iterations: usize,
    c: Vec<f64>,
}

/// Pivot candidates must exceed this in magnitude.
const PIVOT_TOL: f64 = 1e-9;
/// Pivots smaller than this fraction of the column's largest entry are refused.
const REL_PIVOT_TOL: f64 = 1e-7;
/// Primal feasibility slack allowed by the ratio test.
const FEAS_TOL: f64 = 1e-12;
/// Pivots between exact rebuilds of the dictionary.
const REFACTOR_EVERY: usize = 25;
/// Consecutive degenerate pivots before switching to Bland's rule.
const STALL_LIMIT: usize = 20;

impl Dictionary {
    fn new(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Self {
        let m = a.len();
        let n = c.len();
        let nx = n + 1;
        let mut flat = vec![0.0; m * nx];
        for i in 0..m {
            flat[i * nx..i * nx + n].copy_from_slice(&a[i]);
            flat[i * nx + n] = -1.0;
        }
        let cols = nx + 1;
        let mut d = vec![0.0; m * cols];
        for i in 0..m {
            d[i * cols] = b[i];
            for j in 0..nx {
                d[i * cols + 1 + j] = -flat[i * nx + j];
            }
        }
        Self {
            nx,
            m,
            a: flat,
            b: b.to_vec(),
            costs: vec![0.0; nx],
            d,
            obj: vec![0.0; cols],
            basis: (nx..nx + m).collect(),
            nonbasis: (0..nx).collect(),
            cols,
            frozen: None,
            iterations: 0,
            max_iterations: 200_000,
            c: c.to_vec(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.cols + j]
    }

    #[inline]
    fn orig(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.nx + j]
    }

    /// Rebuilds the dictionary and objective row from the original data.
    fn refactor(&mut self) {
        let nx = self.nx;
        let tight: Vec<usize> = self.nonbasis.iter().filter(|&&l| l >= nx).map(|&l| l - nx).collect();
        let basic_x: Vec<usize> = self.basis.iter().copied().filter(|&l| l < nx).collect();
        let k = basic_x.len();
        if tight.len() != k {
            return;
        }
        let mut g0 = vec![0.0; k];
        // columns of x_Bs per nonbasic position
        let mut gcols = vec![vec![0.0; k]; nx];
        if k > 0 {
            let mat = nalgebra::DMatrix::from_fn(k, k, |r, c| self.orig(tight[r], basic_x[c]));
            let lu = mat.lu();
            let solve = |rhs: Vec<f64>| lu.solve(&nalgebra::DVector::from_vec(rhs)).map(|v| v.as_slice().to_vec());
            let Some(u0) = solve(tight.iter().map(|&t| self.b[t]).collect()) else {
                return;
            };
            g0 = u0;
            for (pos, &l) in self.nonbasis.iter().enumerate() {
                let rhs: Vec<f64> = if l < nx {
                    tight.iter().map(|&t| -self.orig(t, l)).collect()
                } else {
                    tight.iter().map(|&t| if t == l - nx { -1.0 } else { 0.0 }).collect()
                };
                let Some(g) = solve(rhs) else {
                    return;
                };
                gcols[pos] = g;
            }
        }
        let index_of: std::collections::HashMap<usize, usize> =
            basic_x.iter().enumerate().map(|(c, &l)| (l, c)).collect();
        let cols = self.cols;
        for i in 0..self.m {
            let label = self.basis[i];
            let base = i * cols;
            if let Some(&c) = index_of.get(&label) {
                self.d[base] = g0[c];
                for pos in 0..nx {
                    self.d[base + 1 + pos] = gcols[pos][c];
                }
            } else {
                let row = label - nx;
                let (a, nx) = (&self.a, self.nx);
                let dot = |g: &[f64]| -> f64 { basic_x.iter().zip(g).map(|(&j, v)| a[row * nx + j] * v).sum() };
                self.d[base] = self.b[row] - dot(&g0);
                for (pos, &l) in self.nonbasis.iter().enumerate() {
                    let direct = if l < nx { -a[row * nx + l] } else { 0.0 };
                    self.d[base + 1 + pos] = direct - dot(&gcols[pos]);
                }
            }
        }
        self.obj[0] = basic_x.iter().zip(&g0).map(|(&j, v)| self.costs[j] * v).sum();
        for (pos, &l) in self.nonbasis.iter().enumerate() {
            let direct = if l < nx { self.costs[l] } else { 0.0 };
            let via: f64 = basic_x.iter().zip(&gcols[pos]).map(|(&j, v)| self.costs[j] * v).sum();
            self.obj[pos + 1] = direct + via;
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let cols = self.cols;
        let piv = self.at(r, e);
        let row: Vec<f64> = (0..cols)
            .map(|j| if j == e { 1.0 / piv } else { -self.at(r, j) / piv })
            .collect();
        self.d[r * cols..(r + 1) * cols].copy_from_slice(&row);
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.at(i, e);
            if f == 0.0 {
                continue;
            }
            let base = i * cols;
            for j in 0..cols {
                if j == e {
                    self.d[base + j] = f * row[j];
                } else {
                    self.d[base + j] += f * row[j];
                }
            }
        }
        let f = self.obj[e];
        if f != 0.0 {
            for j in 0..cols {
                if j == e {
                    self.obj[j] = f * row[j];
                } else {
                    self.obj[j] += f * row[j];
                }
            }
        }
        std::mem::swap(&mut self.basis[r], &mut self.nonbasis[e - 1]);
        self.iterations += 1;
    }

    /// Largest reduced cost normally; Bland (lowest label, lowest leaving
    /// label among ratio ties) while the objective is stalled.
    fn iterate(&mut self) -> Result<()> {
        let mut stalled = 0;
        let mut since_refactor = 0;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.iterations));
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
            }
            let bland = stalled >= STALL_LIMIT;
            let frozen = self.frozen;
            let candidates = (1..self.cols).filter(|&j| Some(self.nonbasis[j - 1]) != frozen && self.obj[j] > EPS);
            let entering = if bland {
                candidates.min_by_key(|&j| self.nonbasis[j - 1])
            } else {
                candidates.max_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]).then(self.nonbasis[b - 1].cmp(&self.nonbasis[a - 1])))
            };
            let Some(e) = entering else {
                if since_refactor > 0 {
                    // Confirm optimality on exact data before stopping.
                    self.refactor();
                    since_refactor = 0;
                    if (1..self.cols).any(|j| Some(self.nonbasis[j - 1]) != frozen && self.obj[j] > EPS) {
                        continue;
                    }
                }
                return Ok(());
            };
            // Harris ratio test: bound the step with feasibility slack, then
            // take the largest pivot among rows within that bound.
            let col_max = (0..self.m).map(|i| self.at(i, e).abs()).fold(0.0, f64::max);
            let piv_tol = PIVOT_TOL.max(REL_PIVOT_TOL * col_max);
            let mut bound = f64::INFINITY;
            for i in 0..self.m {
                let a = self.at(i, e);
                if a < -piv_tol {
                    bound = bound.min((self.at(i, 0).max(0.0) + FEAS_TOL) / -a);
                }
            }
            if bound == f64::INFINITY {
                return Err(Error::Unbounded);
            }
            let mut leave: Option<usize> = None;
            for i in 0..self.m {
                let a = self.at(i, e);
                if a < -piv_tol && self.at(i, 0).max(0.0) / -a <= bound {
                    leave = Some(match leave {
                        None => i,
                        Some(k) if bland => {
                            if self.basis[i] < self.basis[k] { i } else { k }
                        }
                        Some(k) => {
                            if a.abs() > self.at(k, e).abs() { i } else { k }
                        }
                    });
                }
            }
            let r = leave.expect("ratio test found a row");
            let theta = self.at(r, 0).max(0.0) / -self.at(r, e);
            self.pivot(r, e);
            since_refactor += 1;
            if theta <= EPS {
                stalled += 1;
            } else {
                stalled = 0;
            }
        }
    }

    fn column_of(&self, label: usize) -> Option<usize> {
        self.nonbasis.iter().position(|&l| l == label).map(|j| j + 1)
    }

    fn run(&mut self) -> Result<()> {
        let aux = self.nx - 1;
        let worst = (0..self.m)
            .min_by(|&i, &k| self.at(i, 0).total_cmp(&self.at(k, 0)))
            .filter(|&i| self.at(i, 0) < 0.0);
        if let Some(r) = worst {
            // Phase one: maximize -x0.
            self.costs.iter_mut().for_each(|v| *v = 0.0);
            self.costs[aux] = -1.0;
            self.obj.iter_mut().for_each(|v| *v = 0.0);
            let e = self.column_of(aux).expect("aux nonbasic");
            self.obj[e] = -1.0;
            self.pivot(r, e);
            self.iterate()?;
            if self.obj[0] < -1e-9 {
                return Err(Error::Infeasible);
            }
            if let Some(r) = self.basis.iter().position(|&l| l == aux) {
                let e = (1..self.cols)
                    .filter(|&j| self.at(r, j).abs() > EPS)
                    .max_by(|&a, &b| self.at(r, a).abs().total_cmp(&self.at(r, b).abs()))
                    .ok_or(Error::Infeasible)?;
                self.pivot(r, e);
            }
        }
        // Phase two: the auxiliary stays nonbasic at zero.
        self.frozen = Some(aux);
        self.costs = self.c.clone();
        self.costs.push(0.0);
        self.refactor();
        self.iterate()
    }

    fn final_values(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        for (i, &l) in self.basis.iter().enumerate() {
            if l < n {
                v[l] = self.at(i, 0).max(0.0);
            }
        }
        v
    }

    /// `y_i = -r_j` where slack `i` is nonbasic in column `j`.
    fn duals(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (j, &l) in self.nonbasis.iter().enumerate() {
            if l >= self.nx {
                y[l - self.nx] = -self.obj[j + 1];
            }
        }
        y
    }
}
