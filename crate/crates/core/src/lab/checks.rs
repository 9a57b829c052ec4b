//! Verifiers for the influence inequalities. Each returns [`BoundReport`]s;
//! proved inequalities pass or fail, conjectures are informational, and
//! checks whose hypotheses do not hold come back skipped.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::estimate::{estimate_k_default, noise_ratio, MAX_K_DEGREE};
use crate::cube::{CubeFunction, DEG_TOL};
use crate::error::{Error, Result};
use crate::influence::{discrete_derivative, influences, sensitivity_field, total_influence_p, variance_p};
use crate::operators::{collapse_partition, diag_line, noise, sign_partition, symmetrize, DiagMode};
use crate::poly::klurman_bound;
use crate::report::BoundReport;
use crate::symmetric::symmetric_bound_report;

/// Slack on `||f||_inf <= 1`.
pub const BOUNDED_TOL: f64 = 1e-9;
/// Agreement required between per-variable influences for the transitive check.
pub const EQUIVARIANCE_TOL: f64 = 1e-6;

fn ensure_bounded(f: &CubeFunction) -> Result<()> {
    let s = f.sup_norm();
    if s > 1.0 + BOUNDED_TOL {
        return Err(Error::NotBounded(s));
    }
    Ok(())
}

fn degree(f: &CubeFunction) -> usize {
    f.fourier().degree(DEG_TOL)
}

/// `Inf[f] <= ||Delta(f)||_inf <= d^2`, plus the conjectured `Inf[f] <= d`
/// as an informational comparison.
pub fn check_general(f: &CubeFunction) -> Result<Vec<BoundReport>> {
    ensure_bounded(f)?;
    let d = degree(f) as f64;
    let field = sensitivity_field(f);
    let (inf, max) = (field.mean(), field.max());
    Ok(vec![
        BoundReport::at_most("influence_vs_max_sensitivity", inf, max).with("d", d),
        BoundReport::at_most("max_sensitivity_vs_d_squared", max, d * d).with("d", d),
        BoundReport::informational("influence_vs_degree", inf, d),
    ])
}

fn check_p(p: f64) -> Result<()> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::BadExponent(p));
    }
    Ok(())
}

/// `Inf^(p)[f] <= d^(3-p)` for `1 <= p <= 2`.
pub fn check_interpolated(f: &CubeFunction, p: f64) -> Result<BoundReport> {
    ensure_bounded(f)?;
    check_p(p)?;
    let d = degree(f) as f64;
    Ok(BoundReport::at_most("interpolated_influence", total_influence_p(f, p)?, d.powf(3.0 - p))
        .with("d", d)
        .with("p", p))
}

/// `Inf^(p)[f] <= d^(2p) e^(pd) / n^(p-1)` and `Var[f] <= Inf^(2)[f]` for
/// functions whose per-variable influences agree; skipped otherwise.
pub fn check_transitive(f: &CubeFunction, p: f64) -> Result<Vec<BoundReport>> {
    ensure_bounded(f)?;
    check_p(p)?;
    let inf = influences(f);
    let (lo, hi) = inf.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo > EQUIVARIANCE_TOL {
        let note = format!("not equivariant: per-variable influences span [{lo:.3e}, {hi:.3e}]");
        return Ok(vec![
            BoundReport::skipped("transitive_influence", note.clone()),
            BoundReport::skipped("variance_vs_inf2", note),
        ]);
    }
    let (d, n) = (degree(f) as f64, f.n() as f64);
    let bound = d.powf(2.0 * p) * (p * d).exp() / n.powf(p - 1.0);
    let inf2 = total_influence_p(f, 2.0)?;
    Ok(vec![
        BoundReport::at_most("transitive_influence", total_influence_p(f, p)?, bound)
            .with("d", d)
            .with("n", n)
            .with("p", p),
        BoundReport::at_most("variance_vs_inf2", variance_p(f, 2.0)?, inf2),
    ])
}

/// `||T_alpha f||_1 >= alpha^min(d^2, n) ||f||_1`, reported as the ratio
/// `||T_alpha f||_1 / ||f||_1` against `alpha^min(d^2, n)`.
pub fn check_noise_contraction(f: &CubeFunction, alpha: f64) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::BadParam(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let d = degree(f);
    let bound = alpha.powi((d * d).min(f.n()) as i32);
    let ratio = match noise_ratio(f, alpha)? {
        Some(r) => 1.0 / r,
        None => 1.0,
    };
    Ok(BoundReport::at_least("noise_contraction", ratio, bound)
        .with("d", d as f64)
        .with("alpha", alpha))
}

/// `sum_i f^({i}) <= d`.
pub fn check_first_level(f: &CubeFunction) -> Result<BoundReport> {
    ensure_bounded(f)?;
    let d = degree(f) as f64;
    Ok(BoundReport::at_most("first_level_sum", f.fourier().first_level_sum(), d).with("d", d))
}

/// `||Delta(T_alpha f)||_inf <= d / sqrt(1 - alpha^2)` and the consequence
/// `Inf[f] <= max_i (||f_i||_1 / ||T_alpha f_i||_1) d / sqrt(1 - alpha^2)`.
pub fn check_noise_route(f: &CubeFunction, alpha: f64) -> Result<Vec<BoundReport>> {
    ensure_bounded(f)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadParam(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let d = degree(f) as f64;
    let markov = d / (1.0 - alpha * alpha).sqrt();
    let g = noise(f, alpha)?;
    let smoothed = sensitivity_field(&g).max();
    let mut worst = 0.0f64;
    for i in 1..=f.n() {
        if let Some(r) = noise_ratio(&discrete_derivative(f, i)?, alpha)? {
            worst = worst.max(r);
        }
    }
    Ok(vec![
        BoundReport::at_most("smoothed_sensitivity", smoothed, markov)
            .with("d", d)
            .with("alpha", alpha),
        BoundReport::at_most("noise_ratio_lemma", total_influence_p(f, 1.0)?, worst * markov)
            .with("d", d)
            .with("alpha", alpha)
            .with("max_derivative_ratio", worst),
    ])
}

/// `h'(0) = Delta(f)(1)` for `h(e) = g(1 + e, 1 - e)` collapsed along the
/// sign partition at the all-ones point; reported as the absolute gap.
pub fn check_collapse_identity(f: &CubeFunction) -> Result<BoundReport> {
    let s = sign_partition(f);
    let h = diag_line(&collapse_partition(f, s)?, DiagMode::PlusMinus);
    let slope = h.derivative().eval(0.0);
    let at_one = sensitivity_field(f).at_one();
    Ok(BoundReport::at_most("collapse_identity", (slope - at_one).abs(), 1e-9 * at_one.max(1.0))
        .with("h_prime_0", slope)
        .with("delta_at_one", at_one))
}

static K_UPPER: OnceLock<Vec<Option<f64>>> = OnceLock::new();

/// Proven upper bound on `K_d`: exact for `d <= 2`, the LP relaxation value
/// for `3 <= d <= 8`.
pub fn k_upper(d: usize) -> Option<f64> {
    match d {
        0 => Some(0.0),
        1 => Some(1.0),
        2 => Some(1.0 + SQRT_2),
        _ if d > MAX_K_DEGREE => None,
        _ => K_UPPER.get_or_init(|| {
            (0..=MAX_K_DEGREE)
                .map(|d| if d < 3 { None } else { estimate_k_default(d).ok().map(|k| k.upper) })
                .collect()
        })[d],
    }
}

/// Bounds for homogeneous bounded functions: `||Delta(f)||_inf <= 2 K_d`,
/// `|h_1'(1)|, |h_2'(1)| <= K_d` on the two axis lines of the collapsed
/// polynomial, and the noise route with `alpha = 1 - 1/d`.
pub fn check_homogeneous(f: &CubeFunction) -> Result<Vec<BoundReport>> {
    ensure_bounded(f)?;
    let names = [
        "homogeneous_kd",
        "axis_lines_kd",
        "homogeneous_smoothed",
        "homogeneous_d32",
        "pointwise_sensitivity_vs_degree",
    ];
    let fe = f.fourier();
    if !fe.is_homogeneous(DEG_TOL) {
        return Ok(names.iter().map(|n| BoundReport::skipped(n, "not homogeneous")).collect());
    }
    let d = fe.degree(DEG_TOL);
    let df = d as f64;
    let field = sensitivity_field(f);
    let max = field.max();
    let mut out = Vec::new();
    match k_upper(d) {
        Some(k) => {
            out.push(BoundReport::at_most(names[0], max, 2.0 * k).with("d", df).with("k_d", k));
            let g = collapse_partition(f, sign_partition(f))?;
            let h1 = diag_line(&g, DiagMode::XLine).derivative().eval(1.0).abs();
            let h2 = diag_line(&g, DiagMode::YLine).derivative().eval(1.0).abs();
            out.push(
                BoundReport::at_most(names[1], h1.max(h2), k)
                    .with("h1_prime_1", h1)
                    .with("h2_prime_1", h2),
            );
        }
        None => {
            out.push(BoundReport::skipped(names[0], format!("K_d not estimated for d = {d}")));
            out.push(BoundReport::skipped(names[1], format!("K_d not estimated for d = {d}")));
        }
    }
    if d >= 2 {
        let alpha = 1.0 - 1.0 / df;
        let markov = df / (1.0 - alpha * alpha).sqrt();
        let smoothed = sensitivity_field(&noise(f, alpha)?).max();
        out.push(BoundReport::at_most(names[2], smoothed, markov).with("d", df).with("alpha", alpha));
        out.push(
            BoundReport::at_most(names[3], max, alpha.powi(-(d as i32)) * markov)
                .with("d", df)
                .with("alpha", alpha)
                .with("d_to_three_halves", df.powf(1.5)),
        );
    } else {
        out.push(BoundReport::skipped(names[2], "needs d >= 2"));
        out.push(BoundReport::skipped(names[3], "needs d >= 2"));
    }
    // Pointwise `Delta(f)(x) <= d` holds for Boolean homogeneous f but is not
    // a theorem for bounded ones; the two-block construction breaks it.
    out.push(BoundReport::informational(names[4], max, df).with("delta_at_one", field.at_one()));
    Ok(out)
}

/// For monotone bounded `f`: `Inf[f] <= M_d`, with `M_d` taken as Klurman's
/// bound `2 max(...)` at 0. The asymptotic reference `d / (2 pi)` is recorded
/// in the context.
pub fn check_monotone(f: &CubeFunction) -> Result<BoundReport> {
    ensure_bounded(f)?;
    let flags = f.classify(DEG_TOL);
    if !flags.monotone {
        return Ok(BoundReport::skipped("monotone_klurman", "not monotone"));
    }
    let d = flags.degree;
    let inf = total_influence_p(f, 1.0)?;
    Ok(BoundReport::at_most("monotone_klurman", inf, klurman_bound(d, 0.0)?)
        .with("d", d as f64)
        .with("d_over_2pi", d as f64 / (2.0 * PI))
        .with("d_over_pi", d as f64 / PI))
}

/// Symmetric bounds through the level profile; skipped for non-symmetric input.
pub fn check_symmetric(f: &CubeFunction) -> Result<Vec<BoundReport>> {
    ensure_bounded(f)?;
    if !f.classify(DEG_TOL).symmetric {
        return Ok(vec![
            BoundReport::skipped("symmetric_norm_lemma", "not symmetric"),
            BoundReport::skipped("symmetric_influence_vs_degree", "not symmetric"),
        ]);
    }
    symmetric_bound_report(&symmetrize(f))
}

/// `sum_i f^({i}) <= sqrt(deg f)` for Boolean `f`: a conjecture, so
/// informational only.
pub fn gopalan_servedio_report(f: &CubeFunction) -> BoundReport {
    let flags = f.classify(DEG_TOL);
    if !flags.boolean_valued {
        return BoundReport::skipped("gopalan_servedio", "input is not Boolean");
    }
    BoundReport::informational("gopalan_servedio", f.fourier().first_level_sum(), (flags.degree as f64).sqrt())
        .with("d", flags.degree as f64)
}

/// Selectable checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    General,
    Interpolated,
    Transitive,
    Noise,
    NoiseRoute,
    FirstLevel,
    Collapse,
    Homogeneous,
    Symmetric,
    Monotone,
    GopalanServedio,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::General,
        CheckKind::Interpolated,
        CheckKind::Transitive,
        CheckKind::Noise,
        CheckKind::NoiseRoute,
        CheckKind::FirstLevel,
        CheckKind::Collapse,
        CheckKind::Homogeneous,
        CheckKind::Symmetric,
        CheckKind::Monotone,
        CheckKind::GopalanServedio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::General => "general",
            CheckKind::Interpolated => "interpolated",
            CheckKind::Transitive => "transitive",
            CheckKind::Noise => "noise",
            CheckKind::NoiseRoute => "noise_route",
            CheckKind::FirstLevel => "first_level",
            CheckKind::Collapse => "collapse",
            CheckKind::Homogeneous => "homogeneous",
            CheckKind::Symmetric => "symmetric",
            CheckKind::Monotone => "monotone",
            CheckKind::GopalanServedio => "gopalan_servedio",
        }
    }

    /// Parses a comma-separated list; `all` selects everything.
    pub fn parse_list(s: &str) -> Result<Vec<CheckKind>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                return Ok(Self::ALL.to_vec());
            }
            let k: CheckKind = part.parse()?;
            if !out.contains(&k) {
                out.push(k);
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownName(s.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Parameters for [`run_checks`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckParams {
    /// Exponents for the interpolated and transitive checks.
    pub ps: Vec<f64>,
    /// Noise rates; `None` means `{0.5, 1 - 1/d}`.
    pub alphas: Option<Vec<f64>>,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            ps: vec![1.0, 1.25, 1.5, 2.0],
            alphas: None,
        }
    }
}

fn default_alphas(d: usize) -> Vec<f64> {
    let mut a = vec![0.5];
    if d >= 2 {
        let x = 1.0 - 1.0 / d as f64;
        if x != 0.5 {
            a.push(x);
        }
    }
    a
}

/// Runs the selected checks. Unbounded input skips every check that assumes
/// `||f||_inf <= 1`.
pub fn run_checks(f: &CubeFunction, which: &[CheckKind], params: &CheckParams) -> Result<Vec<BoundReport>> {
    let bounded = ensure_bounded(f).is_ok();
    let d = degree(f);
    let alphas = params.alphas.clone().unwrap_or_else(|| default_alphas(d));
    let mut out = Vec::new();
    for &kind in which {
        let needs_bound = !matches!(kind, CheckKind::Noise | CheckKind::Collapse | CheckKind::GopalanServedio);
        if needs_bound && !bounded {
            out.push(BoundReport::skipped(kind.name(), format!("sup norm {} exceeds 1", f.sup_norm())));
            continue;
        }
        match kind {
            CheckKind::General => out.extend(check_general(f)?),
            CheckKind::Interpolated => {
                for &p in &params.ps {
                    out.push(check_interpolated(f, p)?);
                }
            }
            CheckKind::Transitive => {
                for &p in &params.ps {
                    out.extend(check_transitive(f, p)?);
                }
            }
            CheckKind::Noise => {
                for &a in &alphas {
                    out.push(check_noise_contraction(f, a)?);
                }
            }
            CheckKind::NoiseRoute => {
                for &a in alphas.iter().filter(|&&a| a < 1.0) {
                    out.extend(check_noise_route(f, a)?);
                }
            }
            CheckKind::FirstLevel => out.push(check_first_level(f)?),
            CheckKind::Collapse => out.push(check_collapse_identity(f)?),
            CheckKind::Homogeneous => out.extend(check_homogeneous(f)?),
            CheckKind::Symmetric => out.extend(check_symmetric(f)?),
            CheckKind::Monotone => out.push(check_monotone(f)?),
            CheckKind::GopalanServedio => out.push(gopalan_servedio_report(f)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructs::{character, named_example, NamedExample};
    use crate::report::Verdict;

    fn maj3() -> CubeFunction {
        CubeFunction::from_fn(3, |i| if i.count_ones() <= 1 { 1.0 } else { -1.0 }).unwrap()
    }

    #[test]
    fn general_examples() {
        let r = check_general(&character(0b11, 2).unwrap()).unwrap();
        assert!(r.iter().all(|r| r.pass));
        assert_eq!((r[0].measured, r[0].bound, r[1].bound), (2.0, 2.0, 4.0));
        let r = check_general(&named_example(NamedExample::QuadS).unwrap()).unwrap();
        assert!(r.iter().all(|r| r.pass));
        assert!((r[0].measured - 2.0).abs() < 1e-12);
        let big = CubeFunction::constant(2, 1.5).unwrap();
        assert_eq!(check_general(&big), Err(Error::NotBounded(1.5)));
    }

    #[test]
    fn interpolated_examples() {
        let r = check_interpolated(&character(0b111, 4).unwrap(), 2.0).unwrap();
        assert!(r.pass && (r.measured - 3.0).abs() < 1e-12 && (r.bound - 3.0).abs() < 1e-12);
        let r = check_interpolated(&named_example(NamedExample::F4).unwrap(), 1.5).unwrap();
        assert!(r.pass && (r.measured - 2.0).abs() < 1e-12);
        assert!(check_interpolated(&maj3(), 2.5).is_err());
    }

    #[test]
    fn transitive_examples() {
        let r = check_transitive(&maj3(), 2.0).unwrap();
        assert!(r.iter().all(|r| r.pass));
        assert!((r[0].measured - 1.5).abs() < 1e-12);
        assert!((r[0].bound - 81.0 * 6f64.exp() / 3.0).abs() < 1e-9);
        let r = check_transitive(&character(0b1, 3).unwrap(), 1.0).unwrap();
        assert!(r.iter().all(BoundReport::is_skipped));
    }

    #[test]
    fn noise_examples() {
        let x1 = character(1, 3).unwrap();
        let r = check_noise_contraction(&x1, 0.5).unwrap();
        assert!(r.pass && r.slack.abs() <= 1e-12);
        let r = check_noise_contraction(&maj3(), 1.0).unwrap();
        assert!(r.pass && (r.measured - 1.0).abs() < 1e-15);
        assert!(check_noise_contraction(&x1, 0.0).is_err());
    }

    #[test]
    fn homogeneous_examples() {
        for e in [NamedExample::F4, NamedExample::QuadS, NamedExample::QuadT] {
            let r = check_homogeneous(&named_example(e).unwrap()).unwrap();
            assert!(r.iter().all(|r| r.pass), "{e}: {r:?}");
        }
        let r = check_homogeneous(&maj3()).unwrap();
        assert!(r.iter().all(BoundReport::is_skipped));
        let r = check_homogeneous(&named_example(NamedExample::HomogeneousCounterexample(3)).unwrap()).unwrap();
        let p = r.iter().find(|r| r.name == "pointwise_sensitivity_vs_degree").unwrap();
        assert_eq!(p.verdict, Verdict::CounterexampleCandidate);
        assert!((p.measured - 8.0 / 3.0).abs() < 1e-12);
        assert!(r.iter().all(|r| !r.is_failure()));
        let r = check_collapse_identity(&maj3()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn monotone_and_conjecture() {
        let r = check_monotone(&maj3()).unwrap();
        assert!(r.pass && (r.measured - 1.5).abs() < 1e-12 && (r.bound - 1.5).abs() < 1e-9);
        let g = gopalan_servedio_report(&maj3());
        assert_eq!(g.verdict, Verdict::Consistent);
        assert!((g.bound - 3f64.sqrt()).abs() < 1e-15);
        let g = gopalan_servedio_report(&character(1, 2).unwrap());
        assert!(g.pass && g.slack.abs() < 1e-15);
        let g = gopalan_servedio_report(&character(0b11, 2).unwrap());
        assert_eq!(g.measured, 0.0);
    }

    #[test]
    fn run_all_on_named() {
        let f = named_example(NamedExample::QuadT).unwrap();
        let reps = run_checks(&f, &CheckKind::ALL, &CheckParams::default()).unwrap();
        assert!(reps.iter().all(|r| !r.is_failure()), "{reps:?}");
        assert!(reps.iter().any(|r| r.name == "homogeneous_kd" && r.pass));
        assert_eq!(CheckKind::parse_list("general, symmetric").unwrap().len(), 2);
        assert!(CheckKind::parse_list("nope").is_err());
    }
}
