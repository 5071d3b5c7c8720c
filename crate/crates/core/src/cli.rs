//! `sul` command-line front end.
//!
//! Exit codes: 0 when every assertion of the run passed, 1 when some failed
//! (the list goes to stderr as JSON), 2 on usage or computation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bounds_report, gaussian_upper, nazarov_demo, sharp_constant, BoundReport};
use crate::error::{Error, Result};
use crate::io::{read_function, read_weight, to_canonical_string, write_atomic, write_document};
use crate::optimize::{bisect_upper_bound, default_grid_size};
use crate::radius::{last_sign_change, RadiusResult, DEFAULT_TOL};
use crate::reps::{build_f0, build_g1, build_g1_h1_f1, build_psi_t, weighted_integral, EigenStatus, FunctionRep};
use crate::shift::{drop, lift, DropQ, ShiftRecord};
use crate::verify::{run_suite, SuiteReport, DEFAULT_SEED};
use crate::weights::{HarmonicFactor, HarmonicKind, Weight};

#[derive(Debug, Parser)]
#[command(name = "sul", version, about = "Weighted sign uncertainty experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds for one weight, or a sweep over dimensions.
    Bounds(BoundsArgs),
    /// Last sign change of `P·f` for a function file.
    Radius(RadiusArgs),
    /// Builds one of the explicit Gaussian eigenfunctions.
    Construct(ConstructArgs),
    /// Moves a function between dimensions `d` and `d + 2ℓ`.
    Shift(ShiftArgs),
    /// LP upper bound over a truncated Laguerre eigenbasis.
    Optimize(OptimizeArgs),
    /// Runs the cross-module invariant suites.
    Verify(VerifyArgs),
    /// Ratios showing admissibility fails below the critical exponent.
    DemoNazarov(NazarovArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// Exponent of the radial factor `|x|^γ`.
    #[arg(long = "gamma", default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma_r: f64,
    /// Harmonic factor: one, coord (x_1⋯x_ℓ) or plane (Re (x_1 + i x_2)^ℓ).
    #[arg(long)]
    pub harmonic: Option<String>,
    /// Degree of the harmonic factor.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Use `|H|` in place of `H`.
    #[arg(long)]
    pub sign_wrap: bool,
    /// Read the weight from a JSON file instead.
    #[arg(long, conflicts_with_all = ["gamma_r", "harmonic", "ell", "sign_wrap"])]
    pub weight: Option<PathBuf>,
}

impl WeightArgs {
    fn harmonic_or(&self, fallback: HarmonicFactor) -> Result<HarmonicFactor> {
        let ell = self.ell.unwrap_or(fallback.ell);
        let kind = match &self.harmonic {
            Some(k) => HarmonicKind::parse(k)?,
            None if self.ell.is_none() => fallback.kind,
            None if ell == 0 => HarmonicKind::One,
            None => HarmonicKind::CoordinateProduct,
        };
        if kind == HarmonicKind::One && ell != 0 {
            return Err(Error::Parse(format!("harmonic 'one' has degree 0, got --ell {ell}")));
        }
        Ok(HarmonicFactor::new(kind, ell))
    }

    /// Weight in dimension `d`; the harmonic factor defaults to `fallback`.
    fn build(&self, d: usize, fallback: HarmonicFactor) -> Result<Weight> {
        if let Some(p) = &self.weight {
            let w = read_weight(p)?;
            if w.d != d {
                return Err(Error::DimensionMismatch { expected: d, got: w.d });
            }
            return Ok(w);
        }
        Weight::new(d, self.harmonic_or(fallback)?, self.gamma_r, self.sign_wrap)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Also write `r,u(r)` samples of the radial profile to this CSV file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = 400)]
    pub profile_points: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Sign class: +1, -1 or both.
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    pub s: String,
    /// Dimension, or an inclusive range `a..b`.
    #[arg(long)]
    pub d: String,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Tabulate one row per (s, d).
    #[arg(long)]
    pub sweep: bool,
    /// Defaults to csv for sweeps and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    /// Function document to examine.
    #[arg(long)]
    pub function: PathBuf,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Fail unless the radius is at most this value.
    #[arg(long)]
    pub assert_max: Option<f64>,
    /// Fail unless the radius is at least this value.
    #[arg(long)]
    pub assert_min: Option<f64>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    F0,
    G1,
    F1,
    Psi,
    /// Whichever explicit witness the sign and weight call for.
    Witness,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: Construction,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Width `a0` (f0) or `a1` (g1, f1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Second width `b1` for f1.
    #[arg(long)]
    pub b: Option<f64>,
    /// Scale `t` for psi.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Write the function document here.
    #[arg(long)]
    pub function_out: Option<PathBuf>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("direction").required(true).args(["drop", "lift"]))]
pub struct ShiftArgs {
    /// Radial function in `R^{d+2ℓ}` to `H·f` in `R^d`.
    #[arg(long)]
    pub drop: bool,
    /// `x_1⋯x_ℓ·f` in `R^d` to a radial function in `R^{d+2ℓ}`.
    #[arg(long)]
    pub lift: bool,
    #[arg(long)]
    pub function: PathBuf,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    pub s: String,
    /// Degree of the harmonic factor moved; checked against the file on lift.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Dimension of the input function, checked against the file.
    #[arg(long)]
    pub d: Option<usize>,
    /// Harmonic factor attached by a drop.
    #[arg(long, default_value = "coord")]
    pub harmonic: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Weight produced by a drop: `one` keeps `H·|x|^γ`, `sign` gives `|H||x|^{γ+ℓ}`-type weights.
    #[arg(long, default_value = "one")]
    pub q: String,
    /// Write the transformed function here.
    #[arg(long)]
    pub function_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub weight: WeightArgs,
    /// Number of basis functions.
    #[arg(long = "N", visible_alias = "n", default_value_t = 20)]
    pub n: usize,
    /// Bisection tolerance on the radius.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Write the witness function document here.
    #[arg(long)]
    pub function_out: Option<PathBuf>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NazarovArgs {
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Defaults to `γ + 1/q' - 0.3`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Comma-separated frequencies.
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0])]
    pub t: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub assertion: String,
    pub detail: String,
}

/// What a subcommand produced: the report text and any failed assertions.
struct Outcome {
    text: String,
    failures: Vec<Failure>,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, failures: Vec<Failure>) -> Result<Self> {
        Ok(Outcome { text: to_canonical_string(value)?, failures })
    }
}

fn check(failures: &mut Vec<Failure>, ok: bool, assertion: &str, detail: impl FnOnce() -> String) {
    if !ok {
        failures.push(Failure { assertion: assertion.into(), detail: detail() });
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = with_pool(|| dispatch(&cli.command));
    match result {
        Ok((outcome, out)) => {
            if let Err(e) = emit(&outcome.text, out.as_deref()) {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.failures.is_empty() {
                0
            } else {
                #[derive(Serialize)]
                struct Failures<'a> {
                    failures: &'a [Failure],
                }
                match to_canonical_string(&Failures { failures: &outcome.failures }) {
                    Ok(t) => eprint!("{t}"),
                    Err(e) => eprintln!("error: {e}"),
                }
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Runs `f` on a pool capped by `SUL_THREADS` when that is set.
fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var("SUL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok());
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn dispatch(cmd: &Command) -> Result<(Outcome, Option<PathBuf>)> {
    match cmd {
        Command::Bounds(a) => Ok((cmd_bounds(a)?, a.out.clone())),
        Command::Radius(a) => Ok((cmd_radius(a)?, a.out.clone())),
        Command::Construct(a) => Ok((cmd_construct(a)?, a.out.clone())),
        Command::Shift(a) => Ok((cmd_shift(a)?, a.out.clone())),
        Command::Optimize(a) => Ok((cmd_optimize(a)?, a.out.clone())),
        Command::Verify(a) => Ok((cmd_verify(a)?, a.out.clone())),
        Command::DemoNazarov(a) => Ok((cmd_nazarov(a)?, a.out.clone())),
    }
}

pub fn parse_sign(text: &str) -> Result<i8> {
    match text.trim() {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => Err(Error::Parse(format!("sign must be +1 or -1, got '{other}'"))),
    }
}

fn parse_signs(text: &str) -> Result<Vec<i8>> {
    if text.trim() == "both" {
        Ok(vec![1, -1])
    } else {
        Ok(vec![parse_sign(text)?])
    }
}

/// `"8"`, `"1..24"` or `"1..=24"`; ranges are inclusive.
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("expected a dimension or a range a..b, got '{text}'"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let dims: Vec<usize> = match text.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
            if lo > hi {
                return Err(bad());
            }
            (lo..=hi).collect()
        }
        None => vec![num(text)?],
    };
    if dims.contains(&0) {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    Ok(dims)
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let signs = parse_signs(&a.s)?;
    let dims = parse_dims(&a.d)?;
    let jobs: Vec<(i8, usize)> = signs.iter().flat_map(|&s| dims.iter().map(move |&d| (s, d))).collect();
    let reports: Vec<BoundReport> =
        jobs.par_iter().map(|&(s, d)| bounds_report(s, &a.weight.build(d, HarmonicFactor::ONE)?)).collect::<Result<_>>()?;

    let mut failures = Vec::new();
    for r in &reports {
        check(&mut failures, r.consistent(), "lower <= sharp <= upper", || {
            format!(
                "s = {}, d = {}: lower {:?}, sharp {:?}, upper {:?}/{:?}",
                r.s, r.d, r.lower, r.sharp, r.upper_analytic, r.upper_numeric
            )
        });
    }

    let sweep = a.sweep || reports.len() > 1;
    let format = a.format.unwrap_or(if sweep { Format::Csv } else { Format::Json });
    let text = match (format, sweep) {
        (Format::Csv, _) => bounds_csv(&reports)?,
        (Format::Json, false) => to_canonical_string(&reports[0])?,
        (Format::Json, true) => to_canonical_string(&reports)?,
    };
    Ok(Outcome { text, failures })
}

pub const BOUNDS_CSV_COLUMNS: [&str; 9] = ["s", "d", "gamma", "ell", "lower", "lower_method", "upper_analytic", "upper_numeric", "sharp"];

fn bounds_csv(reports: &[BoundReport]) -> Result<String> {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(BOUNDS_CSV_COLUMNS).map_err(io_err)?;
    for r in reports {
        w.write_record([
            r.s.to_string(),
            r.d.to_string(),
            format!("{:.16e}", r.gamma),
            r.ell.to_string(),
            opt(r.lower),
            r.lower_method.clone(),
            opt(r.upper_analytic),
            opt(r.upper_numeric),
            opt(r.sharp),
        ])
        .map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Writes `r,u(r)` on `points` equispaced radii in `[0, r_max]`.
fn write_profile(f: &FunctionRep, r_max: f64, p: &ProfileArgs) -> Result<()> {
    let Some(path) = &p.profile else { return Ok(()) };
    let n = p.profile_points.max(2);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["r", "u"]).map_err(io_err)?;
    for i in 0..n {
        let r = r_max * i as f64 / (n - 1) as f64;
        w.write_record([format!("{r:.16e}"), format!("{:.16e}", f.radial(r))]).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    write_atomic(path, &String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?)
}

fn profile_extent(r: f64) -> f64 {
    if r.is_finite() && r > 0.0 {
        2.0 * r
    } else {
        4.0
    }
}

fn cmd_radius(a: &RadiusArgs) -> Result<Outcome> {
    let f = read_function(&a.function)?;
    let w = a.weight.build(f.d(), f.harmonic())?;
    let res = last_sign_change(&f, &w, a.tol)?;
    let mut failures = Vec::new();
    if let Some(m) = a.assert_max {
        check(&mut failures, res.r <= m, "radius <= assert_max", || format!("r = {} > {m}", res.r));
    }
    if let Some(m) = a.assert_min {
        check(&mut failures, res.r >= m, "radius >= assert_min", || format!("r = {} < {m}", res.r));
    }
    write_profile(&f, profile_extent(res.r), &a.profile)?;

    #[derive(Serialize)]
    struct Report<'a> {
        function: &'a FunctionRep,
        weight: &'a Weight,
        radius: &'a RadiusResult,
    }
    Outcome::json(&Report { function: &f, weight: &w, radius: &res }, failures)
}

fn cmd_construct(a: &ConstructArgs) -> Result<Outcome> {
    let s = parse_sign(&a.s)?;
    let w = a.weight.build(a.d, HarmonicFactor::ONE)?;
    let mut params: Vec<(String, f64)> = Vec::new();
    let f: FunctionRep = match a.kind {
        Construction::F0 => {
            let a0 = a.a.ok_or_else(|| Error::Parse("f0 needs --a".into()))?;
            let f0 = build_f0(&w, a0)?;
            params.extend([("a0".into(), a0), ("A0".into(), f0.big_a0)]);
            f0.f.into()
        }
        Construction::G1 => {
            let a1 = a.a.ok_or_else(|| Error::Parse("g1 needs --a".into()))?;
            params.push(("a1".into(), a1));
            build_g1(&w, a1)?.into()
        }
        Construction::F1 => {
            let (a1, b1) = match (a.a, a.b) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(Error::Parse("f1 needs --a and --b".into())),
            };
            let fam = build_g1_h1_f1(&w, a1, b1)?;
            params.extend([("a1".into(), a1), ("b1".into(), b1), ("A1".into(), fam.big_a1)]);
            fam.f1.into()
        }
        Construction::Psi => {
            params.push(("t".into(), a.t));
            build_psi_t(&w, a.t)?.psi.into()
        }
        Construction::Witness => {
            let t = gaussian_upper(s, &w)?;
            params = t.params.clone();
            params.push(("analytic".into(), t.analytic));
            t.witness.into()
        }
    };
    let radius = last_sign_change(&f, &w, DEFAULT_TOL)?;
    let integral = weighted_integral(&f, &w)?;
    if let Some(p) = &a.function_out {
        write_document(p, &f)?;
    }
    write_profile(&f, profile_extent(radius.r), &a.profile)?;

    #[derive(Serialize)]
    struct Report<'a> {
        function: &'a FunctionRep,
        weight: &'a Weight,
        params: &'a [(String, f64)],
        eigen: EigenStatus,
        radius: &'a RadiusResult,
        weighted_integral: f64,
    }
    let report =
        Report { function: &f, weight: &w, params: &params, eigen: f.eigen_status(), radius: &radius, weighted_integral: integral };
    Outcome::json(&report, Vec::new())
}

fn cmd_shift(a: &ShiftArgs) -> Result<Outcome> {
    let s = parse_sign(&a.s)?;
    let f = read_function(&a.function)?;
    if let Some(d) = a.d {
        if d != f.d() {
            return Err(Error::DimensionMismatch { expected: d, got: f.d() });
        }
    }
    let shifted = if a.lift {
        if let Some(l) = a.ell {
            if l != f.harmonic().ell {
                return Err(Error::Precondition(format!("--ell {l} but the function carries degree {}", f.harmonic().ell)));
            }
        }
        let w = Weight::new(f.d(), f.harmonic(), a.gamma, false)?;
        lift(&f, &w, s)?
    } else {
        let ell = a.ell.ok_or_else(|| Error::Parse("--drop needs --ell".into()))?;
        let kind = HarmonicKind::parse(&a.harmonic)?;
        let h = if ell == 0 { HarmonicFactor::ONE } else { HarmonicFactor::new(kind, ell) };
        let q = match a.q.as_str() {
            "one" => DropQ::One,
            "sign" => DropQ::SignNormalized,
            other => return Err(Error::Parse(format!("--q must be one or sign, got '{other}'"))),
        };
        let w = Weight::new(f.d(), HarmonicFactor::ONE, a.gamma, false)?;
        drop(&f, &w, h, q, s)?
    };
    if let Some(p) = &a.function_out {
        write_document(p, &shifted.f)?;
    }

    #[derive(Serialize)]
    struct Report<'a> {
        record: &'a ShiftRecord,
        function: &'a FunctionRep,
        weight: &'a Weight,
    }
    Outcome::json(&Report { record: &shifted.record, function: &shifted.f, weight: &shifted.weight }, Vec::new())
}

fn cmd_optimize(a: &OptimizeArgs) -> Result<Outcome> {
    let s = parse_sign(&a.s)?;
    let w = a.weight.build(a.d, HarmonicFactor::ONE)?;
    let res = bisect_upper_bound(s, &w, a.n, a.tol)?;
    debug_assert_eq!(res.grid_size, default_grid_size(a.n));

    let mut failures = Vec::new();
    check(&mut failures, res.certification.passed, "witness re-certifies", || {
        format!("integral {:.3e}, radius {}", res.certification.integral, res.certification.radius.r)
    });
    if let Some(lo) = res.lower_bound {
        check(&mut failures, res.r_upper >= lo - 1e-9, "r_upper >= lower bound", || format!("{} < {lo}", res.r_upper));
    }
    check(&mut failures, res.r_upper <= res.analytic_upper + 1e-9, "r_upper <= analytic Gaussian bound", || {
        format!("{} > {}", res.r_upper, res.analytic_upper)
    });
    if w.gamma_r == 0.0 && !w.sign_wrap {
        if let Some(sharp) = sharp_constant(s, w.d, w.ell()) {
            check(&mut failures, res.r_upper >= sharp - 1e-3, "r_upper >= sharp - 1e-3", || format!("{} < {sharp}", res.r_upper));
        }
    }

    if let Some(p) = &a.function_out {
        write_document(p, &res.witness)?;
    }
    write_profile(&res.witness, profile_extent(res.r_upper), &a.profile)?;
    Outcome::json(&res, failures)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let reports: Vec<SuiteReport> = run_suite(&a.suite, a.seed)?;
    let mut failures = Vec::new();
    for r in &reports {
        for name in r.failures() {
            failures.push(Failure { assertion: format!("{}: {name}", r.suite), detail: "check failed".into() });
        }
    }
    Outcome::json(&reports, failures)
}

fn cmd_nazarov(a: &NazarovArgs) -> Result<Outcome> {
    if !(a.q > 1.0) {
        return Err(Error::Domain(format!("q must exceed 1, got {}", a.q)));
    }
    let q_dual = a.q / (a.q - 1.0);
    let alpha = a.alpha.unwrap_or(a.gamma + 1.0 / q_dual - 0.3);
    let rep = nazarov_demo(a.delta, alpha, a.gamma, a.q, &a.t)?;
    let mut failures = Vec::new();
    if let (Some(first), Some(last)) = (rep.ratios.first(), rep.ratios.last()) {
        if rep.ratios.len() > 1 {
            check(&mut failures, last > first, "ratio grows with t", || format!("R(first) = {first}, R(last) = {last}"));
        }
    }
    Outcome::json(&rep, failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(parse_dims("8").unwrap(), vec![8]);
        assert_eq!(parse_dims("1..24").unwrap().len(), 24);
        assert_eq!(parse_dims("3..=5").unwrap(), vec![3, 4, 5]);
        assert!(parse_dims("5..3").is_err());
        assert!(parse_dims("0..2").is_err());
        assert!(parse_dims("x").is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(parse_sign("+1").unwrap(), 1);
        assert_eq!(parse_sign("-1").unwrap(), -1);
        assert!(parse_sign("2").is_err());
        assert_eq!(parse_signs("both").unwrap(), vec![1, -1]);
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(["sul", "bounds", "--s", "-1", "--d", "4", "--gamma", "-2"]).unwrap();
        let Command::Bounds(b) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(b.s, "-1");
        assert_eq!(b.weight.gamma_r, -2.0);
    }

    #[test]
    fn harmonic_defaults() {
        let cli = Cli::try_parse_from(["sul", "optimize", "--s", "+1", "--d", "4", "--ell", "2", "--N", "8"]).unwrap();
        let Command::Optimize(o) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(o.weight.harmonic_or(HarmonicFactor::ONE).unwrap(), HarmonicFactor::coordinate_product(2));
        assert_eq!(o.n, 8);
    }
}
