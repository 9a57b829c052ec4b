//! Acceptance criteria, one line each. Every criterion runs and prints
//! before the single assertion at the end, so one failure does not hide
//! the others.

use std::f64::consts::{FRAC_1_PI, SQRT_2};
use std::time::{Duration, Instant};

use cubeinf::constructs::{character, counterexample_sensitivity, named_example, NamedExample};
use cubeinf::cube::CubeFunction;
use cubeinf::influence::{sensitivity_at, sensitivity_field, total_influence_p};
use cubeinf::lab::checks::{check_general, check_interpolated, check_noise_contraction};
use cubeinf::lab::estimate::{estimate_k_default, estimate_m_default, monotone_ratio};
use cubeinf::lab::experiments::cheb_limit;
use cubeinf::lab::random::{random_bounded, random_corpus};
use cubeinf::operators::{noise, symmetrize, symmetrize_m};
use cubeinf::poly::{chebyshev, klurman_bound};
use cubeinf::report::{BoundReport, Verdict};
use cubeinf::symmetric::{symmetric_delta_at_one, symmetric_total_influence, LevelProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Outcome { ok: true, detail: summary }
        } else {
            Outcome { ok: false, detail: format!("{summary}; {}", failures.join("; ")) }
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn uniform_sensitivity(f: &CubeFunction, target: f64, tol: f64) -> bool {
    sensitivity_field(f).values().iter().all(|&v| (v - target).abs() <= tol)
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    let f4 = named_example(NamedExample::F4).unwrap();
    if !uniform_sensitivity(&f4, 2.0, 1e-12) {
        bad.push("f4".to_string());
    }
    for d in 2..=6 {
        let f = named_example(NamedExample::F4TimesCharacter(d)).unwrap();
        if !uniform_sensitivity(&f, d as f64, 1e-12) {
            bad.push(format!("f4 x chi, d = {d}"));
        }
    }
    for n in 1..=8 {
        for mask in 0..1usize << n {
            if !uniform_sensitivity(&character(mask, n).unwrap(), mask.count_ones() as f64, 1e-12) {
                bad.push(format!("character {mask:b} on {n}"));
            }
        }
    }
    for ex in [NamedExample::QuadS, NamedExample::QuadT] {
        let f = named_example(ex).unwrap();
        if (f.sup_norm() - 1.0).abs() > 1e-12 || !uniform_sensitivity(&f, 2.0, 1e-12) {
            bad.push(ex.to_string());
        }
    }
    let two = sensitivity_at(&named_example(NamedExample::HomogeneousCounterexample(2)).unwrap(), 0);
    let fifty = counterexample_sensitivity(50, 0, 0);
    if (two - 2.0).abs() > 1e-10 || (fifty - 3.92).abs() > 1e-10 {
        bad.push(format!("two-block: {two}, {fifty}"));
    }
    Outcome::new(bad, format!("uniform sensitivity = degree; two-block {two:.12} / {fifty:.12}"))
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let k1 = estimate_k_default(1).unwrap();
    let k2 = estimate_k_default(2).unwrap();
    if (k1.value - 1.0).abs() > 1e-9 || !k1.certified {
        bad.push(format!("K(1) = {}", k1.value));
    }
    if (k2.value - (1.0 + SQRT_2)).abs() > 1e-3 || !k2.certified {
        bad.push(format!("K(2) = {}", k2.value));
    }
    Outcome::new(bad, format!("K(1) = {:.12}, K(2) = {:.9}", k1.value, k2.value))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for d in 2..=5 {
        let delta = symmetric_delta_at_one(&chebyshev(d), 1_000_000).unwrap();
        let target = (d * d) as f64;
        if (delta - target).abs() > 1e-3 * target {
            bad.push(format!("Delta(1) for T_{d} = {delta}"));
        }
    }
    let rows = cheb_limit(&[3, 5, 7]).unwrap();
    for d in [3usize, 5, 7] {
        let ladder: Vec<_> = rows.iter().filter(|r| r.d == d).collect();
        let ns: Vec<usize> = ladder.iter().map(|r| r.n).collect();
        if ns != [d * d + 1, 1_000, 10_000, 100_000] {
            bad.push(format!("ladder for d = {d}: {ns:?}"));
        }
        if ladder.iter().any(|r| r.inf >= d as f64) || ladder.windows(2).any(|w| w[1].inf <= w[0].inf) {
            bad.push(format!("Inf for T_{d} not strictly increasing below {d}"));
        }
    }
    let last: Vec<String> = rows.iter().filter(|r| r.n == 100_000).map(|r| format!("{:.6}", r.inf)).collect();
    Outcome::new(bad, format!("Delta(1) -> d^2; Inf at n = 1e5: {}", last.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut reports = 0;
    let mut candidates = 0;
    let mut tally = |r: &BoundReport, label: String, bad: &mut Vec<String>| {
        reports += 1;
        match r.verdict {
            Verdict::Fail => bad.push(format!("{label}: {} {} vs {}", r.name, r.measured, r.bound)),
            Verdict::CounterexampleCandidate => candidates += 1,
            _ => {}
        }
    };
    for e in random_corpus(500, 10, 5, 4).unwrap() {
        let label = format!("entry {} (n = {}, d = {})", e.index, e.n, e.d);
        for r in check_general(&e.f).unwrap() {
            tally(&r, label.clone(), &mut bad);
        }
        for p in [1.0, 1.25, 1.5, 2.0] {
            tally(&check_interpolated(&e.f, p).unwrap(), label.clone(), &mut bad);
        }
        let d = e.f.degree();
        let mut alphas = vec![0.5];
        if d >= 2 {
            alphas.push(1.0 - 1.0 / d as f64);
        }
        for alpha in alphas {
            tally(&check_noise_contraction(&e.f, alpha).unwrap(), label.clone(), &mut bad);
        }
    }
    if candidates > 0 {
        bad.push(format!("{candidates} counterexample candidates"));
    }
    Outcome::new(bad, format!("{reports} reports over 500 functions"))
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst = 0.0f64;
    for n in [8, 10, 12, 14] {
        for _ in 0..50 {
            let lp = LevelProfile::new(n, (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let full = total_influence_p(&lp.to_cube().unwrap(), 1.0).unwrap();
            worst = worst.max((symmetric_total_influence(&lp) - full).abs());
        }
    }
    if worst > 1e-9 {
        bad.push(format!("level-space influence off by {worst:e}"));
    }
    for seed in 0..40u64 {
        let n = 1 + (seed as usize % 9);
        let f = random_bounded(n, n.min(4), seed).unwrap();
        if symmetrize_m(&f, n).unwrap() != symmetrize(&f) {
            bad.push(format!("Sym_n differs from Sym, seed {seed}"));
        }
        for m in [n, n + 3, 3 * n + 10] {
            let g = symmetrize_m(&f, m).unwrap();
            let drift = (g.first_level_sum() - f.fourier().first_level_sum()).abs();
            if drift > 1e-10 {
                bad.push(format!("first level moved {drift:e}, seed {seed}, m = {m}"));
            }
        }
    }
    Outcome::new(bad, format!("worst level-space error {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let target = 0.5 * FRAC_1_PI;
    let ratios: Vec<f64> = [8, 40, 200].iter().map(|&d| monotone_ratio(d).unwrap()).collect();
    if ratios.windows(2).any(|w| w[1] >= w[0]) || ratios[2] <= target {
        bad.push(format!("ratios {ratios:?} not strictly decreasing toward {target:.6}"));
    }
    let rel = (ratios[2] - target).abs() / target;
    if rel > 0.1 {
        bad.push(format!("d = 200 ratio {:.6} is {:.1}% from 1/(2 pi)", ratios[2], 100.0 * rel));
    }
    for d in 1..=10 {
        let m = estimate_m_default(d).unwrap();
        let bound = klurman_bound(d, 0.0).unwrap();
        if m.value > bound * (1.0 + 1e-9) {
            bad.push(format!("M_{d} = {} exceeds {bound}", m.value));
        }
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.6}")).collect();
    Outcome::new(bad, format!("p'(0)/d at 8, 40, 200: {}", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let (mut trip, mut parseval, mut semi, mut spec) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for e in random_corpus(500, 10, 10, 2024).unwrap() {
        let f = &e.f;
        trip = trip.max(max_diff(f.values(), f.fourier().synthesize().unwrap().values()));
        let mean_sq = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        parseval = parseval.max((f.fourier().energy() - mean_sq).abs());
        let (a, b) = (0.3 + 0.001 * e.index as f64, -0.7);
        let two = noise(&noise(f, a).unwrap(), b).unwrap();
        semi = semi.max(max_diff(two.values(), noise(f, a * b).unwrap().values()));
        spec = spec.max((total_influence_p(f, 2.0).unwrap() - f.fourier().spectral_influence()).abs());
    }
    for (name, err, tol) in [("round trip", trip, 1e-12), ("Parseval", parseval, 1e-10), ("semigroup", semi, 1e-12), ("Inf^(2)", spec, 1e-9)] {
        if err > tol {
            bad.push(format!("{name} error {err:e}"));
        }
    }
    Outcome::new(bad, format!("errors {trip:.1e} / {parseval:.1e} / {semi:.1e} / {spec:.1e}"))
}

#[test]
fn acceptance() {
    let criteria: [(fn() -> Outcome, Duration); 7] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(10)),
        (criterion_3, Duration::from_secs(5)),
        (criterion_4, Duration::from_secs(120)),
        (criterion_5, Duration::from_secs(60)),
        (criterion_6, Duration::from_secs(30)),
        (criterion_7, Duration::from_secs(10)),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took <= *limit;
        let timing = if took <= *limit { String::new() } else { format!("; over the {limit:?} limit") };
        println!(
            "criterion {}: {} ({:.2?}) {}{}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took,
            out.detail,
            timing
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
