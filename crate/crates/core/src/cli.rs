//! Command-line surface. `run_command` does all the work so that it can be
//! driven from tests; the binary only forwards `std::env::args`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fixtures::{self, FIXTURES};
use crate::framework::{
    build_aux, certify_unique_existence, certify_uniqueness, classify_with, dependency_conditions, residual,
    AuxMatrices, ProblemInstance, SolutionParametrization,
};
use crate::io::{BoundReport, CertificateReport, ClassReport, ProblemFile, Report, SolutionReport};
use crate::linalg::{format_rational, ratio, Rational};
use crate::oracle::{multistart_solve, OracleConfig};
use crate::trinomials::{
    curve_from_instance_with, segment_rule_of_signs, segment_solve, tnomial_table_row, two_trinomial_bound,
    two_trinomial_solve, two_trinomial_standardize, SegmentProblem, CURVE_SAMPLES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fewnomial", version, about = "Positive solutions of generalized polynomial systems A (c o x^B) = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `curve` defaults to csv, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Residual and condition tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the multistart oracle.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of multistart Newton starts.
    #[arg(long, global = true)]
    starts: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions, classes, dependency and case.
    Classify { file: String },
    /// Solutions, or the parametrization of the solution set.
    Solve {
        file: String,
        /// Free polytope weights (k - 1 per class with k extreme rays).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
        /// Positive multipliers along the basis of L-perp.
        #[arg(long, value_delimiter = ',')]
        tau: Vec<f64>,
    },
    /// Upper bounds on the number of positive solutions.
    Bound { file: String },
    /// Sign-vector certificates for uniqueness and unique existence.
    Certify { file: String },
    /// Multistart Newton count of positive solutions.
    Oracle { file: String },
    /// Sampled solution curves as CSV.
    Curve {
        file: String,
        #[arg(long, default_value_t = CURVE_SAMPLES)]
        samples: usize,
        #[arg(long, value_delimiter = ',')]
        tau: Vec<f64>,
    },
    /// Runs every bundled fixture and compares with its expected data.
    Examples,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Options {
    tol: Option<f64>,
    seed: u64,
    starts: Option<usize>,
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(EXIT_OK, e.to_string())
                }
                _ => Outcome::failure(EXIT_USAGE, e.to_string()),
            }
        }
    };
    let opts = Options {
        tol: cli.tol,
        seed: cli.seed,
        starts: cli.starts,
    };
    if let Some(t) = opts.tol.filter(|t| !(t.is_finite() && *t > 0.0)) {
        return Outcome::failure(EXIT_USAGE, format!("--tol must be positive, got {t}\n"));
    }
    let format = cli.format;
    let text_or_json = |f: Option<Format>| -> std::result::Result<Format, Outcome> {
        match f.unwrap_or(Format::Text) {
            Format::Csv => Err(Outcome::failure(EXIT_USAGE, "csv output is only available for `curve`\n".into())),
            f => Ok(f),
        }
    };
    let result: std::result::Result<(Report, bool), Error> = match cli.command {
        Command::Examples => return run_examples(opts),
        Command::Curve { file, samples, tau } => return run_curve(&file, samples, &tau, format.unwrap_or(Format::Csv), opts),
        Command::Classify { ref file } => load(file, opts).and_then(|(doc, p)| classify_report(&doc, &p).map(|r| (r, false))),
        Command::Solve {
            ref file,
            ref lambda,
            ref tau,
        } => load(file, opts).and_then(|(doc, p)| solve_report(&doc, &p, lambda, tau, opts)),
        Command::Bound { ref file } => load(file, opts).and_then(|(doc, p)| bound_report(&doc, &p).map(|r| (r, false))),
        Command::Certify { ref file } => {
            load(file, opts).and_then(|(doc, p)| certify_report(&doc, &p).map(|r| (r, false)))
        }
        Command::Oracle { ref file } => load(file, opts).and_then(|(doc, p)| oracle_report(&doc, &p, opts)),
    };
    let format = match text_or_json(format) {
        Ok(f) => f,
        Err(o) => return o,
    };
    match result {
        Ok((report, empty)) => {
            let body = match format {
                Format::Json => report.to_json() + "\n",
                _ => report.to_text(),
            };
            Outcome::ok(if empty { EXIT_EMPTY } else { EXIT_OK }, body)
        }
        Err(e) => error_outcome(e),
    }
}

fn error_outcome(e: Error) -> Outcome {
    let code = match e {
        Error::EmptyInterior | Error::NoSolutions(_) => EXIT_EMPTY,
        _ => EXIT_ERROR,
    };
    Outcome::failure(code, format!("error: {e}\n"))
}

/// Reads a problem from disk, falling back to a bundled fixture with the
/// same stem.
fn load(file: &str, opts: Options) -> Result<(ProblemFile, ProblemInstance)> {
    let text = if Path::new(file).exists() {
        std::fs::read_to_string(file)?
    } else if let Some(f) = fixtures::fixture(file) {
        f.text.to_string()
    } else {
        std::fs::read_to_string(file)?
    };
    let mut doc = ProblemFile::parse(&text)?;
    if let Some(tol) = opts.tol {
        let mut t = doc.tolerances.unwrap_or_default();
        t.condition = tol;
        t.lift_residual = tol;
        doc.tolerances = Some(t);
    }
    let p = doc.to_instance()?;
    Ok((doc, p))
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn fmt_f64(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

fn describe(doc: &ProblemFile, p: &ProblemInstance, aux: &AuxMatrices) -> Result<Report> {
    let geo = p.geometry()?;
    let g_prime = match &aux.exact {
        Some(ex) => ex.g_prime.columns().iter().map(|c| fmt_vec(c)).collect(),
        None => (0..aux.g_prime.ncols())
            .map(|k| aux.g_prime.column(k).iter().map(|x| format!("{x:.12}")).collect())
            .collect(),
    };
    let conditions = dependency_conditions(aux, &p.c)
        .iter()
        .map(|c| {
            let z = match &c.z_exact {
                Some(z) => fmt_vec(z).join(","),
                None => fmt_f64(&c.z),
            };
            format!("y^z = c^z with z = ({z}), ln c^z = {:.12}", c.ln_target)
        })
        .collect();
    Ok(Report {
        name: doc.name.clone(),
        classification: Some(classify_with(p, aux)),
        classes: geo
            .classes
            .iter()
            .map(|c| ClassReport {
                columns: c.columns.clone(),
                rays: c.rays.iter().map(|r| fmt_vec(r)).collect(),
                vertices: c.vertices.iter().map(|v| fmt_vec(v)).collect(),
            })
            .collect(),
        g_prime,
        conditions,
        ..Default::default()
    })
}

fn classify_report(doc: &ProblemFile, p: &ProblemInstance) -> Result<Report> {
    describe(doc, p, &build_aux(p)?)
}

fn solution(p: &ProblemInstance, x: Vec<f64>) -> SolutionReport {
    SolutionReport {
        residual: residual(p, &x),
        x,
        ..Default::default()
    }
}

fn parametrization_lines(sp: &SolutionParametrization) -> Vec<String> {
    let mut lines = Vec::new();
    for (k, class) in sp.classes.iter().enumerate() {
        let terms: Vec<String> = class
            .rays
            .iter()
            .enumerate()
            .map(|(r, ray)| format!("w{}{} ({})", k + 1, r + 1, fmt_vec(ray).join(",")))
            .collect();
        let cols: Vec<String> = class.columns.iter().map(|j| format!("y{}", j + 1)).collect();
        lines.push(format!("({}) = {}", cols.join(","), terms.join(" + ")));
    }
    lines.extend(sp.formulas());
    let basis: Vec<String> = match &sp.l_perp_exact {
        Some(b) => b.iter().map(|v| fmt_vec(v).join(",")).collect(),
        None => sp.l_perp.iter().map(|v| fmt_f64(v)).collect(),
    };
    for (k, v) in basis.iter().enumerate() {
        lines.push(format!("x <- x o tau{}^({v})", k + 1));
    }
    lines
}

/// Free polytope weights and `L^perp` coordinates for the parametrization;
/// defaults are the barycenter and `tau = 1`.
fn parameters(sp: &SolutionParametrization, lambda: &[f64], tau: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let free = if lambda.is_empty() {
        sp.classes
            .iter()
            .flat_map(|c| std::iter::repeat(1.0 / c.rays.len() as f64).take(c.rays.len() - 1))
            .collect()
    } else {
        lambda.to_vec()
    };
    let mu = if tau.is_empty() {
        vec![0.0; sp.l_perp.len()]
    } else {
        if let Some(t) = tau.iter().find(|t| !(**t > 0.0)) {
            return Err(Error::DomainError(*t));
        }
        tau.iter().map(|t| t.ln()).collect()
    };
    Ok((free, mu))
}

fn solve_report(
    doc: &ProblemFile,
    p: &ProblemInstance,
    lambda: &[f64],
    tau: &[f64],
    opts: Options,
) -> Result<(Report, bool)> {
    let aux = build_aux(p)?;
    let mut report = describe(doc, p, &aux)?;
    let l = p.num_classes();

    if aux.d == 0 {
        let sp = SolutionParametrization::new(p)?;
        report.solver = Some("explicit parametrization".into());
        report.parametrization = parametrization_lines(&sp);
        let (free, mu) = parameters(&sp, lambda, tau)?;
        let x = sp.evaluate(&sp.weights_from_free(&free)?, &mu)?;
        report.solutions.push(solution(p, x));
        let dim = free.len() + mu.len();
        report.notes.push(format!(
            "solution set has dimension {dim}; evaluated at lambda = ({}), tau = ({})",
            fmt_f64(&free),
            fmt_f64(&mu.iter().map(|m| m.exp()).collect::<Vec<_>>())
        ));
        return Ok((report, false));
    }

    if l == 1 && aux.d == 1 {
        if let Ok(sp) = SegmentProblem::new(p) {
            report.solver = Some("segment system".into());
            for r in segment_solve(&sp)? {
                let mut s = solution(p, r.x);
                s.multiplicity = Some(r.multiplicity);
                s.parameter = Some(r.t);
                report.solutions.push(s);
            }
            report.bounds.push(BoundReport {
                name: "segment rule of signs".into(),
                value: segment_rule_of_signs(&sp).to_string(),
            });
            let empty = report.solutions.is_empty();
            return Ok((report, empty));
        }
    }

    if l == 2 && p.n() == 2 {
        match two_trinomial_standardize(p).and_then(|tp| two_trinomial_solve(&tp)) {
            Ok(roots) => {
                report.solver = Some("two trinomials".into());
                for r in roots {
                    let mut s = solution(p, r.x.to_vec());
                    s.multiplicity = Some(r.multiplicity);
                    s.parameter = Some(r.lambda);
                    report.solutions.push(s);
                }
                let empty = report.solutions.is_empty();
                return Ok((report, empty));
            }
            Err(Error::InfiniteSolutions) => {
                report.solver = Some("two trinomials".into());
                report.notes.push("infinitely many positive solutions".into());
                return Ok((report, false));
            }
            Err(Error::DegenerateToUnivariate(u)) => {
                report.notes.push(format!(
                    "both trinomials reduce to one variable u = x^({}); roots u = ({})",
                    fmt_f64(&u.direction),
                    fmt_f64(&u.roots)
                ));
            }
            Err(Error::Shape(_)) => {}
            Err(e) => return Err(e),
        }
    }

    if l == 2 && aux.d == 1 {
        match curve_from_instance_with(p, CURVE_SAMPLES) {
            Ok(ic) => {
                report.solver = Some("curve tracing".into());
                let c = &ic.curve;
                report.notes.push(format!(
                    "solution set is a curve with {} component(s), c* = {}",
                    c.components.len(),
                    c.c_star
                ));
                if let Some(t) = c.threshold {
                    report.notes.push(format!("threshold for c*: {t}"));
                }
                if c.intersecting {
                    report.notes.push("components intersect".into());
                }
                for (k, comp) in c.components.iter().enumerate() {
                    report.notes.push(format!(
                        "component {k}: {} samples, {}",
                        comp.points.len(),
                        if comp.closed { "closed" } else { "open" }
                    ));
                    let mid = comp.points.len() / 2;
                    if let (Some(pt), Some(x)) = (comp.points.get(mid), ic.x[k].get(mid)) {
                        let mut s = solution(p, x.clone());
                        s.parameter = Some(pt.lambda[0]);
                        report.solutions.push(s);
                    }
                }
                report.notes.push("use `curve` for the full sampled components".into());
                return Ok((report, false));
            }
            Err(Error::NoSolutions(msg)) => {
                report.solver = Some("curve tracing".into());
                report.notes.push(format!("no positive solutions: {msg}"));
                return Ok((report, true));
            }
            Err(Error::Shape(_)) | Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }

    if p.n() == p.n_eq() {
        let (r, empty) = oracle_report(doc, p, opts)?;
        report.solver = r.solver;
        report.solutions = r.solutions;
        report.notes.extend(r.notes);
        return Ok((report, empty));
    }
    Err(Error::Unsupported(format!(
        "no solver for {} classes, dependency {} and {} equations in {} variables",
        l,
        aux.d,
        p.n_eq(),
        p.n()
    )))
}

fn oracle_config(opts: Options) -> OracleConfig {
    let mut cfg = OracleConfig::default().with_seed(opts.seed);
    if let Some(s) = opts.starts {
        cfg = cfg.with_starts(s);
    }
    if let Some(t) = opts.tol {
        cfg.accept_residual = t;
    }
    cfg
}

fn oracle_report(doc: &ProblemFile, p: &ProblemInstance, opts: Options) -> Result<(Report, bool)> {
    let cfg = oracle_config(opts);
    let xs = multistart_solve(p, &cfg)?;
    let mut report = Report {
        name: doc.name.clone(),
        solver: Some("multistart Newton".into()),
        ..Default::default()
    };
    report.notes.push(format!(
        "{} solution(s) from {} starts in [{}, {}]^n (log coordinates), seed {}",
        xs.len(),
        cfg.starts,
        cfg.box_lo,
        cfg.box_hi,
        cfg.seed
    ));
    report.solutions = xs.into_iter().map(|x| solution(p, x)).collect();
    let empty = report.solutions.is_empty();
    Ok((report, empty))
}

/// Every count bound that applies to the instance, weakest last.
pub fn applicable_bounds(p: &ProblemInstance) -> Result<Vec<BoundReport>> {
    let aux = build_aux(p)?;
    let mut bounds = Vec::new();
    let l = p.num_classes();
    if l == 1 && aux.d == 1 {
        if let Ok(sp) = SegmentProblem::new(p) {
            bounds.push(BoundReport {
                name: "segment rule of signs".into(),
                value: segment_rule_of_signs(&sp).to_string(),
            });
        }
    }
    if l == 2 && p.n() == 2 {
        if let Ok(tp) = two_trinomial_standardize(p) {
            bounds.push(BoundReport {
                name: "two trinomials".into(),
                value: two_trinomial_bound(&tp)?.to_string(),
            });
        }
        let sizes = &p.partition.sizes;
        if sizes.contains(&3) {
            let t = if sizes[0] == 3 { sizes[1] } else { sizes[0] };
            if let Ok(row) = tnomial_table_row(t as u32) {
                bounds.push(BoundReport {
                    name: format!("trinomial and {t}-nomial"),
                    value: format_rational(&row.bound),
                });
            }
        }
    }
    Ok(bounds)
}

fn bound_report(doc: &ProblemFile, p: &ProblemInstance) -> Result<Report> {
    let aux = build_aux(p)?;
    let mut report = describe(doc, p, &aux)?;
    report.bounds = applicable_bounds(p)?;
    if aux.d == 0 {
        report
            .notes
            .push("dependency zero: the solution set is empty or a family parametrized by the polytope and L-perp".into());
    } else if report.bounds.is_empty() {
        return Err(Error::Unsupported("no count bound applies to this instance".into()));
    }
    Ok(report)
}

fn certify_report(doc: &ProblemFile, p: &ProblemInstance) -> Result<Report> {
    Ok(Report {
        name: doc.name.clone(),
        certificates: vec![
            CertificateReport {
                name: "uniqueness".into(),
                certificate: certify_uniqueness(p)?,
            },
            CertificateReport {
                name: "unique existence".into(),
                certificate: certify_unique_existence(p)?,
            },
        ],
        ..Default::default()
    })
}

fn run_curve(file: &str, samples: usize, tau: &[f64], format: Format, opts: Options) -> Outcome {
    let run = || -> Result<String> {
        let (_, p) = load(file, opts)?;
        let aux = build_aux(&p)?;
        if aux.d == 1 && p.num_classes() == 2 {
            let ic = curve_from_instance_with(&p, samples)?;
            return Ok(match format {
                Format::Json => serde_json::to_string_pretty(&ic).expect("curves serialize") + "\n",
                _ => ic.to_csv(),
            });
        }
        if aux.d == 0 {
            let sp = SolutionParametrization::new(&p)?;
            let free_dim: usize = sp.weights_per_class().iter().map(|k| k - 1).sum();
            if free_dim == 1 {
                let (_, mu) = parameters(&sp, &[0.5], tau)?;
                let mut out = String::from("component,param1");
                for i in 1..=p.n() {
                    let _ = write!(out, ",x{i}");
                }
                out.push('\n');
                let mut rows = Vec::new();
                for k in 1..=samples {
                    let lam = k as f64 / (samples + 1) as f64;
                    let x = sp.evaluate(&sp.weights_from_free(&[lam])?, &mu)?;
                    let _ = writeln!(out, "0,{lam},{}", fmt_f64(&x));
                    rows.push((lam, x));
                }
                return Ok(match format {
                    Format::Json => {
                        let v: Vec<serde_json::Value> =
                            rows.iter().map(|(l, x)| serde_json::json!({"lambda": l, "x": x})).collect();
                        serde_json::to_string_pretty(&v).expect("curves serialize") + "\n"
                    }
                    _ => out,
                });
            }
        }
        Err(Error::Unsupported(
            "curves are available for two classes with dependency 1, or dependency 0 with one polytope parameter".into(),
        ))
    };
    match run() {
        Ok(s) => Outcome::ok(EXIT_OK, s),
        Err(e) => error_outcome(e),
    }
}

/// Bound table for one trinomial and one t-nomial: `(t, bound, 2^t - 2,
/// (2/3) t^3 + 5t)` with the last column as a fraction.
pub const TNOMIAL_TABLE: &[(u32, i64, i64, (i64, i64))] = &[
    (3, 6, 6, (33, 1)),
    (4, 14, 14, (188, 3)),
    (5, 28, 30, (325, 3)),
    (6, 50, 62, (174, 1)),
    (10, 258, 1022, (2150, 3)),
];

fn check(out: &mut String, failures: &mut usize, name: &str, what: &str, ok: bool, detail: String) {
    if !ok {
        *failures += 1;
    }
    let _ = writeln!(out, "{} {name}: {what} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn run_examples(opts: Options) -> Outcome {
    let mut out = String::new();
    let mut failures = 0;
    for f in FIXTURES {
        if let Err(e) = check_fixture(f.name, f.text, opts, &mut out, &mut failures) {
            check(&mut out, &mut failures, f.name, "run", false, format!("error: {e}"));
        }
    }
    for &(t, bound, exponential, (cn, cd)) in TNOMIAL_TABLE {
        match tnomial_table_row(t) {
            Ok(row) => {
                let ok = row.bound == ratio(bound, 1)
                    && row.exponential == ratio(exponential, 1)
                    && row.cubic == ratio(cn, cd);
                check(
                    &mut out,
                    &mut failures,
                    "tnomial_table",
                    &format!("t = {t}"),
                    ok,
                    format!(
                        "bound {} vs 2^t-2 {} vs (2/3)t^3+5t {}",
                        format_rational(&row.bound),
                        format_rational(&row.exponential),
                        format_rational(&row.cubic)
                    ),
                );
            }
            Err(e) => check(&mut out, &mut failures, "tnomial_table", &format!("t = {t}"), false, e.to_string()),
        }
    }
    let _ = writeln!(out, "{} failure(s)", failures);
    Outcome::ok(if failures == 0 { EXIT_OK } else { EXIT_ERROR }, out)
}

fn check_fixture(name: &str, text: &str, opts: Options, out: &mut String, failures: &mut usize) -> Result<()> {
    let doc = ProblemFile::parse(text)?;
    let p = doc.to_instance()?;
    let ex = doc.expected.clone().unwrap_or_default();
    let aux = build_aux(&p)?;
    let cls = classify_with(&p, &aux);
    if let Some(l) = ex.classes {
        check(out, failures, name, "classes", cls.l == l, format!("{} (expected {l})", cls.l));
    }
    if let Some(d) = ex.d {
        check(out, failures, name, "dependency", cls.d == d, format!("{} (expected {d})", cls.d));
    }
    if let Some(case) = &ex.case {
        check(out, failures, name, "case", cls.case.label() == case, format!("{} (expected {case})", cls.case.label()));
    }
    if ex.solutions.is_some() || !ex.x.is_empty() {
        let (report, _) = solve_report(&doc, &p, &ex.lambda, &ex.tau, opts)?;
        if let Some(n) = ex.solutions {
            let got = report.solutions.len();
            check(out, failures, name, "solutions", got == n, format!("{got} (expected {n})"));
        }
        for x in &ex.x {
            let found = report.solutions.iter().find(|s| {
                s.x.len() == x.len() && s.x.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-8 * b.abs().max(1.0))
            });
            let detail = match found {
                Some(s) => format!("({}) residual {:.1e}", fmt_f64(x), s.residual),
                None => format!("({}) missing", fmt_f64(x)),
            };
            check(out, failures, name, "solution", found.is_some_and(|s| s.residual <= 1e-10), detail);
        }
    }
    if let Some(b) = ex.bound {
        let bounds = applicable_bounds(&p)?;
        let best = bounds.iter().filter_map(|r| r.value.parse::<usize>().ok()).min();
        check(out, failures, name, "bound", best == Some(b), format!("{best:?} (expected {b})"));
    }
    if let Some(k) = ex.components {
        let got = curve_from_instance_with(&p, 64)?.curve.components.len();
        check(out, failures, name, "components", got == k, format!("{got} (expected {k})"));
    }
    if let Some(u) = ex.uniqueness {
        let c = certify_uniqueness(&p)?;
        check(out, failures, name, "uniqueness certificate", c.holds == u, format!("{} (expected {u})", c.holds));
    }
    if let Some(u) = ex.unique_existence {
        let c = certify_unique_existence(&p)?;
        check(
            out,
            failures,
            name,
            "unique existence certificate",
            c.holds == u,
            format!("{} (expected {u})", c.holds),
        );
    }
    Ok(())
}
