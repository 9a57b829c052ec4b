//! `cubeinf` command-line front end.
//!
//! Exit status: 0 when every applicable check passes, 1 when a check fails
//! or a conjecture comparison produces a counterexample candidate (or an
//! estimate cannot be certified), 2 on malformed input or parameters.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cubeinf::constructs::{character, chebyshev_symmetric_any, klurman_monotone_extremal, named_example, NamedExample};
use cubeinf::influence::{sensitivity_field, total_influence_p, variance_p};
use cubeinf::lab::checks::{run_checks, CheckKind, CheckParams};
use cubeinf::lab::estimate::{estimate_c, estimate_k_default, estimate_m_default};
use cubeinf::lab::experiments::{self, CHEB_DEGREES, MONOTONE_DEGREES};
use cubeinf::lab::random::{random_bounded, random_corpus};
use cubeinf::schema::{self, Format, Input};
use cubeinf::symmetric::{symmetric_bound_report, symmetric_total_influence, to_univariate};
use cubeinf::{BoundReport, CubeFunction, Error, LevelProfile, Verdict};

#[derive(Parser)]
#[command(name = "cubeinf", version, about = "L1 influence, sensitivity and degree on the Boolean cube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural flags, influences, sensitivity and variance of a function.
    Analyze(AnalyzeArgs),
    /// Run inequality checks on a function, a level profile or a random corpus.
    Check(CheckArgs),
    /// Emit a named construction as JSON.
    Construct(ConstructArgs),
    /// Estimate an extremal constant: K, M or C.
    Estimate(EstimateArgs),
    /// Reproduce a numerical experiment as a table.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct Output {
    /// Machine-readable JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Machine-readable CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Coefficient and classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Function or level-profile JSON; omit with --corpus.
    #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
    input: Option<PathBuf>,
    /// Check a corpus of this many random bounded functions instead.
    #[arg(long)]
    corpus: Option<usize>,
    /// Comma-separated checks, or `all`.
    #[arg(long, default_value = "all")]
    which: String,
    /// Comma-separated exponents for the interpolated and transitive checks.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Comma-separated noise rates; default {0.5, 1 - 1/d}.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Largest n in the corpus.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Largest degree in the corpus.
    #[arg(long, default_value_t = 5)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    TruthTable,
    Fourier,
}

#[derive(Args)]
struct ConstructArgs {
    /// f4, quad_s, quad_t, f4_times_character, homogeneous_counterexample,
    /// character, random, chebyshev or klurman.
    name: String,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "truth-table")]
    format: FormatArg,
    /// Coefficients at or below this are omitted from Fourier output.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constant {
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(value_enum)]
    constant: Constant,
    #[arg(long)]
    d: usize,
    /// Noise rate for C; default 1 - 1/d.
    #[arg(long)]
    alpha: Option<f64>,
    /// Variable count for C.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random candidates for C.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Experiment {
    ChebLimit,
    MonotoneAsymptotics,
    KdTable,
    CEstimate,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: Experiment,
    /// Single degree (cheb_limit, monotone_asymptotics) or largest degree
    /// (kd_table, default 4; c_estimate, default 3).
    #[arg(long)]
    d: Option<usize>,
    /// Variable count for c_estimate.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Check(a) => check(a),
        Command::Construct(a) => construct(a),
        Command::Estimate(a) => estimate(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(Error::CertificationFailed { violation }) => {
            eprintln!("error: certification failed, continuous constraint violated by {violation:e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Input, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Schema {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    schema::parse_input(&text)
}

fn print_json(v: &impl Serialize) {
    // A closed pipe (`| head`) is not an error worth reporting.
    let _ = writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn print_csv<T: Serialize>(rows: &[T]) {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    for r in rows {
        if w.serialize(r).is_err() {
            break;
        }
    }
    let _ = w.flush();
}

fn analyze(a: AnalyzeArgs) -> Result<Status, Error> {
    let report = match read_input(&a.input)? {
        Input::Function(f) => analyze_function(&f, a.tol)?,
        Input::Profile(lp) => analyze_profile(&lp, a.tol)?,
    };
    if a.json {
        print_json(&report);
    } else if let Value::Object(map) = &report {
        let mut out = io::stdout().lock();
        for (k, v) in map {
            let _ = writeln!(out, "{k:<22} {v}");
        }
    }
    Ok(Status::Ok)
}

fn analyze_function(f: &CubeFunction, tol: f64) -> Result<Value, Error> {
    let flags = f.classify(tol);
    Ok(json!({
        "n": f.n(),
        "degree": flags.degree,
        "boolean_valued": flags.boolean_valued,
        "bounded_by_one": flags.bounded_by_one,
        "homogeneous": flags.homogeneous,
        "symmetric": flags.symmetric,
        "monotone": flags.monotone,
        "sup_norm": flags.sup_norm,
        "inf_1": total_influence_p(f, 1.0)?,
        "inf_1_5": total_influence_p(f, 1.5)?,
        "inf_2": total_influence_p(f, 2.0)?,
        "max_sensitivity": sensitivity_field(f).max(),
        "variance": variance_p(f, 2.0)?,
        "first_level_sum": f.fourier().first_level_sum(),
    }))
}

fn analyze_profile(lp: &LevelProfile, tol: f64) -> Result<Value, Error> {
    let uni = to_univariate(lp, tol)?;
    Ok(json!({
        "n": lp.n(),
        "degree": uni.degree,
        "symmetric": true,
        "monotone": lp.is_monotone_increasing(tol),
        "sup_norm": lp.sup_norm(),
        "inf_1": symmetric_total_influence(lp),
        "first_level_sum": lp.first_level_sum(),
        "univariate": uni.poly.coeffs(),
        "fit_residual": uni.residual,
    }))
}

/// Counts against the exit status: a failed theorem or a conjecture miss.
fn bad(r: &BoundReport) -> bool {
    matches!(r.verdict, Verdict::Fail | Verdict::CounterexampleCandidate)
}

#[derive(Serialize)]
struct CsvReport<'a> {
    function: &'a str,
    name: &'a str,
    measured: f64,
    bound: f64,
    slack: f64,
    pass: bool,
    verdict: &'a str,
}

fn check(a: CheckArgs) -> Result<Status, Error> {
    let which = CheckKind::parse_list(&a.which)?;
    let mut params = CheckParams::default();
    if let Some(ps) = a.p.clone() {
        params.ps = ps;
    }
    params.alphas = a.alpha.clone();
    let mut labelled: Vec<(String, BoundReport)> = Vec::new();
    if let Some(count) = a.corpus {
        for e in random_corpus(count, a.n, a.d, a.seed)? {
            let label = format!("corpus[{}] n={} d={} seed={}", e.index, e.n, e.d, e.seed);
            for r in run_checks(&e.f, &which, &params)? {
                labelled.push((label.clone(), r));
            }
        }
    } else {
        let path = a.input.as_ref().expect("clap enforces --input");
        let label = path.display().to_string();
        let reports = match read_input(path)? {
            Input::Function(f) => run_checks(&f, &which, &params)?,
            Input::Profile(lp) => profile_checks(&lp, &which)?,
        };
        labelled.extend(reports.into_iter().map(|r| (label.clone(), r)));
    }
    let failed = labelled.iter().any(|(_, r)| bad(r));
    if a.out.json {
        let v: Vec<Value> = labelled
            .iter()
            .map(|(f, r)| {
                let mut v = serde_json::to_value(r).expect("serializable");
                v["function"] = json!(f);
                v
            })
            .collect();
        print_json(&v);
    } else if a.out.csv {
        let rows: Vec<CsvReport> = labelled
            .iter()
            .map(|(f, r)| CsvReport {
                function: f,
                name: &r.name,
                measured: r.measured,
                bound: r.bound,
                slack: r.slack,
                pass: r.pass,
                verdict: r.label(),
            })
            .collect();
        print_csv(&rows);
    } else {
        let mut out = io::stdout().lock();
        for (f, r) in &labelled {
            let _ = write!(out, "{f}  {:<32} {:<24} measured {:.12} bound {:.12}", r.name, r.label(), r.measured, r.bound);
            match &r.note {
                Some(n) => {
                    let _ = writeln!(out, "  ({n})");
                }
                None => {
                    let _ = writeln!(out);
                }
            }
        }
        let fails = labelled.iter().filter(|(_, r)| bad(r)).count();
        let _ = writeln!(out, "{} reports, {fails} failing", labelled.len());
    }
    Ok(if failed { Status::Failed } else { Status::Ok })
}

/// A level profile only supports the symmetric checks; the others are
/// reported as skipped.
fn profile_checks(lp: &LevelProfile, which: &[CheckKind]) -> Result<Vec<BoundReport>, Error> {
    let mut out = Vec::new();
    for &k in which {
        if k == CheckKind::Symmetric {
            out.extend(symmetric_bound_report(lp)?);
        } else {
            out.push(BoundReport::skipped(k.name(), "input is a level profile"));
        }
    }
    Ok(out)
}

fn need(v: Option<usize>, flag: &str, name: &str) -> Result<usize, Error> {
    v.ok_or_else(|| Error::BadParam(format!("`{name}` needs --{flag}")))
}

fn construct(a: ConstructArgs) -> Result<Status, Error> {
    let format = match a.format {
        FormatArg::TruthTable => Format::TruthTable,
        FormatArg::Fourier => Format::Fourier,
    };
    let emit = |f: &CubeFunction| print_json(&schema::function_to_json(f, format, a.tol));
    match a.name.as_str() {
        "character" => {
            let n = need(a.n, "n", "character")?;
            let d = a.d.unwrap_or(n);
            if d > n {
                return Err(Error::DegreeTooHigh { degree: d, n });
            }
            emit(&character((1usize << d) - 1, n)?);
        }
        "random" => emit(&random_bounded(need(a.n, "n", "random")?, need(a.d, "d", "random")?, a.seed)?),
        "chebyshev" => {
            let d = need(a.d, "d", "chebyshev")?;
            let n = a.n.unwrap_or(d * d + 1);
            let (lp, _) = chebyshev_symmetric_any(d, n)?;
            print_json(&schema::profile_to_json(&lp));
        }
        "klurman" => print_json(&klurman_monotone_extremal(need(a.d, "d", "klurman")?)?),
        name => {
            let which = match (name, a.d, a.n) {
                ("f4_times_character", Some(d), _) => NamedExample::F4TimesCharacter(d),
                ("homogeneous_counterexample", _, Some(n)) if n % 2 == 0 => {
                    NamedExample::HomogeneousCounterexample(n / 2)
                }
                _ => name.parse()?,
            };
            emit(&named_example(which)?);
        }
    }
    Ok(Status::Ok)
}

fn estimate(a: EstimateArgs) -> Result<Status, Error> {
    let v = match a.constant {
        Constant::K => serde_json::to_value(estimate_k_default(a.d)?),
        Constant::M => serde_json::to_value(estimate_m_default(a.d)?),
        Constant::C => {
            let alpha = a.alpha.unwrap_or(1.0 - 1.0 / a.d.max(1) as f64);
            serde_json::to_value(estimate_c(a.d, alpha, a.n, a.trials, a.seed)?)
        }
    }
    .expect("serializable");
    if a.json {
        print_json(&v);
    } else if let Value::Object(map) = &v {
        let mut out = io::stdout().lock();
        for (k, x) in map {
            if k != "coeffs" {
                let _ = writeln!(out, "{k:<20} {x}");
            }
        }
    }
    Ok(Status::Ok)
}

fn experiment(a: ExperimentArgs) -> Result<Status, Error> {
    fn emit<T: Serialize>(rows: &[T], json: bool) {
        if json {
            print_json(&rows);
        } else {
            print_csv(rows);
        }
    }
    match a.name {
        Experiment::ChebLimit => {
            let ds: Vec<usize> = a.d.map_or(CHEB_DEGREES.to_vec(), |d| vec![d]);
            emit(&experiments::cheb_limit(&ds)?, a.json);
        }
        Experiment::MonotoneAsymptotics => {
            let ds: Vec<usize> = a.d.map_or(MONOTONE_DEGREES.to_vec(), |d| vec![d]);
            emit(&experiments::monotone_asymptotics(&ds)?, a.json);
        }
        Experiment::KdTable => {
            let rows = experiments::kd_table(a.d.unwrap_or(4))?;
            emit(&rows, a.json);
            if rows.iter().any(|r| !r.certified) {
                return Ok(Status::Failed);
            }
        }
        Experiment::CEstimate => {
            emit(&experiments::c_table(a.d.unwrap_or(3), a.n, a.alpha, a.trials, a.seed)?, a.json);
        }
    }
    Ok(Status::Ok)
}
