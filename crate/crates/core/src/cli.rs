//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on a domain error or a failed verification,
//! 2 on a usage error.

use std::env;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bernoulli::bernoulli_numbers;
use crate::deriv::{
    default_fd_step, deriv_eq1, deriv_eq2, deriv_series, finite_difference_oracle,
    reg_deriv_smallx, EvalResult, Method, SeriesPolicy, DEFAULT_SMALLX_TERMS, MAX_FLOAT_ORDER,
};
use crate::error::{Error, Result};
use crate::exact::factorial_f64;
use crate::quad::{deriv_quadrature, QuadPolicy};
use crate::stirling::{geometric_polynomial, stirling_table};
use crate::verify::{run_suite, CheckRecord, Suite, VerifyConfig, VerifyReport, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the series term cap.
pub const MAX_TERMS_ENV: &str = "EXPDERIV_MAX_TERMS";

pub const CSV_HEADER: &str = "n,x,method,value,err_estimate";

#[derive(Debug, Parser)]
#[command(
    name = "expderiv",
    version,
    about = "Higher derivatives of 1/(e^x - 1) and the identities around them"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one derivative by several methods.
    Eval(EvalArgs),
    /// Evaluate derivatives over an (n, x) grid.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Print the Stirling triangle S(n, k).
    Stirling(StirlingArgs),
    /// Print exact Bernoulli numbers.
    Bernoulli(BernoulliArgs),
    /// Print a geometric polynomial and optionally evaluate it.
    Omega(OmegaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Relative stopping tolerance for the series, in (0, 1).
    #[arg(long, value_parser = parse_rel_tol)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance for quadrature.
    #[arg(long, value_parser = parse_positive)]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Derivative order.
    #[arg(short = 'n', long = "n", value_parser = parse_float_order)]
    pub n: u32,
    /// Point; a number, `ln2` or `pi`, optionally negated.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true, value_parser = parse_point)]
    pub x: f64,
    /// Comma-separated subset of eq1,eq2,series,quad,smallx,fd.
    #[arg(long, value_parser = parse_methods, default_value = "eq1,eq2,series")]
    pub method: MethodList,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Orders, as `a..b` (inclusive) or a comma list.
    #[arg(short = 'n', long = "n", value_parser = parse_float_orders)]
    pub n: OrderList,
    /// Strictly increasing comma-separated points.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true, value_parser = parse_grid)]
    pub x: Grid,
    #[arg(long, value_parser = parse_methods, default_value = "eq1,eq2,series")]
    pub method: MethodList,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub max_m: Option<u32>,
    /// Orders for grid suites, as `a..b` or a comma list.
    #[arg(short = 'n', long = "n", value_parser = parse_orders)]
    pub n: Option<OrderList>,
    /// Points for grid suites.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true, value_parser = parse_grid)]
    pub x: Option<Grid>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[arg(long, default_value_t = 10)]
    pub max_n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BernoulliArgs {
    #[arg(long, default_value_t = 20)]
    pub max_n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OmegaArgs {
    #[arg(short = 'n', long = "n")]
    pub n: u32,
    /// Points at which to evaluate the polynomial.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true, value_parser = parse_grid)]
    pub x: Option<Grid>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodList(pub Vec<Method>);

#[derive(Clone, Debug, PartialEq)]
pub struct OrderList(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// A finite number, or `ln2` / `pi` with an optional leading minus sign.
pub fn parse_point(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let v = match body {
        "ln2" => std::f64::consts::LN_2,
        "pi" => std::f64::consts::PI,
        _ => body
            .parse::<f64>()
            .map_err(|_| format!("invalid point {s:?}; expected a number, ln2 or pi"))?,
    };
    if !v.is_finite() {
        return Err(format!("point {s:?} is not finite"));
    }
    Ok(sign * v)
}

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let xs = s
        .split(',')
        .map(parse_point)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("grid {s:?} must be strictly increasing"));
    }
    Ok(Grid(xs))
}

pub fn parse_orders(s: &str) -> std::result::Result<OrderList, String> {
    let bad = |_| format!("invalid order list {s:?}; expected a..b or a comma list");
    let ns: Vec<u32> = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u32, u32) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty order range {s:?}"));
            }
            (a..=b).collect()
        }
        None => s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(bad))
            .collect::<std::result::Result<_, _>>()?,
    };
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("orders {s:?} must be strictly increasing"));
    }
    Ok(OrderList(ns))
}

fn check_float_order(n: u32) -> std::result::Result<u32, String> {
    if n > MAX_FLOAT_ORDER {
        Err(format!("order {n} exceeds {MAX_FLOAT_ORDER}, the binary64 limit"))
    } else {
        Ok(n)
    }
}

fn parse_float_order(s: &str) -> std::result::Result<u32, String> {
    let n: u32 = s.trim().parse().map_err(|_| format!("invalid order {s:?}"))?;
    check_float_order(n)
}

fn parse_float_orders(s: &str) -> std::result::Result<OrderList, String> {
    let list = parse_orders(s)?;
    for &n in &list.0 {
        check_float_order(n)?;
    }
    Ok(list)
}

pub fn parse_methods(s: &str) -> std::result::Result<MethodList, String> {
    let mut ms = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse().map_err(|e: Error| e.to_string())?;
        if !ms.contains(&m) {
            ms.push(m);
        }
    }
    if ms.is_empty() {
        return Err("method list must not be empty".into());
    }
    Ok(MethodList(ms))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

fn parse_rel_tol(s: &str) -> std::result::Result<f64, String> {
    let v = parse_positive(s)?;
    if v >= 1.0 {
        return Err(format!("relative tolerance {s:?} must be below 1"));
    }
    Ok(v)
}

/// Shortest round-trip decimal, as used in every text format.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Failures carry their exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn series_policy(tol: &ToleranceArgs) -> std::result::Result<SeriesPolicy, Failure> {
    let mut policy = SeriesPolicy::default();
    if let Some(r) = tol.rel_tol {
        policy.rel_tol = r;
    }
    if let Ok(raw) = env::var(MAX_TERMS_ENV) {
        policy.max_terms = match raw.trim().parse::<u64>() {
            Ok(v) if v > 0 => v,
            _ => {
                return Err(Failure::Usage(format!(
                    "{MAX_TERMS_ENV}={raw:?} is not a positive integer"
                )))
            }
        };
    }
    Ok(policy)
}

fn quad_policy(tol: &ToleranceArgs) -> QuadPolicy {
    let mut policy = QuadPolicy::default();
    if let Some(a) = tol.abs_tol {
        policy.abs_tol = a;
    }
    policy
}

/// Full derivative `(d/dx)^n 1/(e^x - 1)` by one method.
pub fn evaluate(
    method: Method,
    n: u32,
    x: f64,
    series: &SeriesPolicy,
    quad: &QuadPolicy,
) -> Result<EvalResult> {
    let triangle = || stirling_table(n + 1);
    match method {
        Method::ClosedForm1 => deriv_eq1(n, x, &triangle()),
        Method::ClosedForm2 => deriv_eq2(n, x, &triangle()),
        Method::Series => deriv_series(n, x, series),
        Method::Quadrature => deriv_quadrature(n, x, quad),
        Method::SmallXSeries => {
            if x == 0.0 {
                return Err(Error::Pole { x });
            }
            let reg = reg_deriv_smallx(n, x, DEFAULT_SMALLX_TERMS)?;
            let pole = factorial_f64(n) / x.powi(n as i32 + 1);
            let value = if n.is_multiple_of(2) { reg.value + pole } else { reg.value - pole };
            Ok(EvalResult {
                value,
                err_estimate: reg.err_estimate + 2.0 * f64::EPSILON * value.abs(),
                ..reg
            })
        }
        Method::FiniteDifference => {
            if x == 0.0 {
                return Err(Error::Pole { x });
            }
            let h = default_fd_step(n, x);
            let value = finite_difference_oracle(n, x, h)?;
            let half = finite_difference_oracle(n, x, 0.5 * h)?;
            Ok(EvalResult {
                order: n,
                point: x,
                value,
                method,
                err_estimate: (value - half).abs(),
            })
        }
    }
}

fn eval_grid(
    orders: &[u32],
    xs: &[f64],
    methods: &[Method],
    tol: &ToleranceArgs,
) -> std::result::Result<Vec<EvalResult>, Failure> {
    let series = series_policy(tol)?;
    let quad = quad_policy(tol);
    let jobs: Vec<(u32, f64, Method)> = orders
        .iter()
        .flat_map(|&n| xs.iter().flat_map(move |&x| methods.iter().map(move |&m| (n, x, m))))
        .collect();
    let results: Vec<Result<EvalResult>> = jobs
        .par_iter()
        .map(|&(n, x, m)| evaluate(m, n, x, &series, &quad))
        .collect();
    results
        .into_iter()
        .zip(&jobs)
        .map(|(r, &(n, x, m))| {
            r.map_err(|e| Failure::Domain(format!("{m} at n = {n}, x = {}: {e}", fmt_f64(x))))
        })
        .collect()
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render_results(results: &[EvalResult], format: Format) -> String {
    match format {
        Format::Json => json_text(&json!({ "schema": SCHEMA_VERSION, "results": results })),
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in results {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.order,
                    fmt_f64(r.point),
                    r.method,
                    fmt_f64(r.value),
                    fmt_f64(r.err_estimate)
                );
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for r in results {
                let _ = writeln!(
                    s,
                    "n={:<3} x={:<22} {:<7} {:<24} err<={}",
                    r.order,
                    fmt_f64(r.point),
                    r.method.tag(),
                    fmt_f64(r.value),
                    fmt_f64(r.err_estimate)
                );
            }
            s
        }
    }
}

fn render_report(report: &VerifyReport, format: Format) -> std::result::Result<String, Failure> {
    match format {
        Format::Json => Ok(json_text(report)),
        Format::Csv => Err(Failure::Usage(
            "verify supports --format json or plain".into(),
        )),
        Format::Plain => {
            let mut s = format!("suite {}\n", report.suite);
            for rec in &report.checks {
                let status = if rec.passed() { "PASS" } else { "FAIL" };
                let line = match rec {
                    CheckRecord::Certificate(c) => format!(
                        "{:?}({}) {} defect {} tol {}",
                        c.identity,
                        c.parameter,
                        c.lhs,
                        fmt_f64(c.rel_defect),
                        fmt_f64(c.tolerance)
                    ),
                    CheckRecord::Comparison(c) => format!(
                        "{} n={} x={} {}={} {}={} defect {} tol {}",
                        c.check,
                        c.n,
                        fmt_f64(c.x),
                        c.method_a,
                        fmt_f64(c.value_a),
                        c.method_b,
                        fmt_f64(c.value_b),
                        fmt_f64(c.rel_defect),
                        fmt_f64(c.tolerance)
                    ),
                    CheckRecord::Exact(c) => format!("{}({}) {}", c.check, c.parameter, c.detail),
                };
                let _ = writeln!(s, "{status} {line}");
            }
            let _ = writeln!(
                s,
                "total {} passed {} failed {} worst defect {}",
                report.summary.total,
                report.summary.passed,
                report.summary.failed,
                fmt_f64(report.worst_defect)
            );
            Ok(s)
        }
    }
}

fn render_stirling(max_n: u32, format: Format) -> String {
    let t = stirling_table(max_n);
    match format {
        Format::Json => {
            let rows: Vec<Vec<String>> = t
                .rows()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect();
            json_text(&json!({ "schema": SCHEMA_VERSION, "max_n": max_n, "rows": rows }))
        }
        Format::Csv => {
            let mut s = String::from("n,k,value\n");
            for (n, row) in t.rows().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    let _ = writeln!(s, "{n},{k},{v}");
                }
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for row in t.rows() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
            s
        }
    }
}

fn render_bernoulli(max_n: u32, format: Format) -> String {
    let b = bernoulli_numbers(max_n);
    match format {
        Format::Json => {
            let mut map = Map::new();
            map.insert("schema".into(), Value::from(SCHEMA_VERSION));
            for (n, v) in b.iter().enumerate() {
                map.insert(format!("B_{n}"), Value::String(v.to_string()));
            }
            json_text(&Value::Object(map))
        }
        Format::Csv => {
            let mut s = String::from("n,value\n");
            for (n, v) in b.iter().enumerate() {
                let _ = writeln!(s, "{n},{v}");
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for (n, v) in b.iter().enumerate() {
                let _ = writeln!(s, "B_{n} = {v}");
            }
            s
        }
    }
}

fn render_omega(args: &OmegaArgs) -> std::result::Result<String, Failure> {
    let t = stirling_table(args.n);
    let p = geometric_polynomial(args.n, &t)?;
    let xs = args.x.as_ref().map(|g| g.0.clone()).unwrap_or_default();
    let values: Vec<(f64, f64)> = xs.iter().map(|&x| (x, p.eval(x))).collect();
    let coeffs: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
    Ok(match args.output.format {
        Format::Json => {
            let vals: Vec<Value> = values
                .iter()
                .map(|&(x, v)| json!({ "x": x, "value": v }))
                .collect();
            json_text(&json!({
                "schema": SCHEMA_VERSION,
                "n": args.n,
                "coefficients": coeffs,
                "fubini": p.fubini().to_string(),
                "values": vals,
            }))
        }
        Format::Csv => {
            let mut s = String::from("n,x,value\n");
            for (x, v) in values {
                let _ = writeln!(s, "{},{},{}", args.n, fmt_f64(x), fmt_f64(v));
            }
            s
        }
        Format::Plain => {
            let mut s = format!("omega_{} coefficients: {}\n", args.n, coeffs.join(" "));
            let _ = writeln!(s, "omega_{}(1) = {}", args.n, p.fubini());
            for (x, v) in values {
                let _ = writeln!(s, "omega_{}({}) = {}", args.n, fmt_f64(x), fmt_f64(v));
            }
            s
        }
    })
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match &output.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Domain(format!("cannot write output: {e}"))),
    }
}

/// Executes a parsed command; returns `Ok(true)` when everything passed.
fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> std::result::Result<bool, Failure> {
    match &cfg.command {
        Command::Eval(a) => {
            let results = eval_grid(&[a.n], &[a.x], &a.method.0, &a.tolerances)?;
            emit(&a.output, &render_results(&results, a.output.format), stdout)?;
            Ok(true)
        }
        Command::Table(a) => {
            let results = eval_grid(&a.n.0, &a.x.0, &a.method.0, &a.tolerances)?;
            emit(&a.output, &render_results(&results, a.output.format), stdout)?;
            Ok(true)
        }
        Command::Verify(a) => {
            if a.output.format == Format::Csv {
                return Err(Failure::Usage("verify supports --format json or plain".into()));
            }
            let vc = VerifyConfig {
                max_n: a.max_n,
                max_m: a.max_m,
                orders: a.n.as_ref().map(|o| o.0.clone()),
                points: a.x.as_ref().map(|g| g.0.clone()),
                series: series_policy(&a.tolerances)?,
                quad: quad_policy(&a.tolerances),
            };
            let report = run_suite(a.suite, &vc);
            emit(&a.output, &render_report(&report, a.output.format)?, stdout)?;
            Ok(report.all_passed())
        }
        Command::Stirling(a) => {
            emit(&a.output, &render_stirling(a.max_n, a.output.format), stdout)?;
            Ok(true)
        }
        Command::Bernoulli(a) => {
            emit(&a.output, &render_bernoulli(a.max_n, a.output.format), stdout)?;
            Ok(true)
        }
        Command::Omega(a) => {
            emit(&a.output, &render_omega(a)?, stdout)?;
            Ok(true)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cfg, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "expderiv: verification failed");
            EXIT_FAILURE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "expderiv: usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "expderiv: error: {msg}");
            EXIT_FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("expderiv").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn points_accept_symbols() {
        assert_eq!(parse_point("ln2").unwrap(), std::f64::consts::LN_2);
        assert_eq!(parse_point("-pi").unwrap(), -std::f64::consts::PI);
        assert_eq!(parse_point("0.5").unwrap(), 0.5);
        assert!(parse_point("nan").is_err());
        assert!(parse_point("inf").is_err());
        assert!(parse_point("e").is_err());
    }

    #[test]
    fn grids_and_ranges() {
        assert_eq!(parse_grid("0.5,1,2").unwrap().0, vec![0.5, 1.0, 2.0]);
        assert!(parse_grid("1,1").is_err());
        assert!(parse_grid("2,1").is_err());
        assert_eq!(parse_orders("1..3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_orders("4").unwrap().0, vec![4]);
        assert_eq!(parse_orders("1,5,9").unwrap().0, vec![1, 5, 9]);
        assert!(parse_orders("3..1").is_err());
        assert!(parse_orders("5,2").is_err());
        assert!(parse_float_orders("170..171").is_err());
    }

    #[test]
    fn methods_parse_and_dedupe() {
        let m = parse_methods("eq1,series,eq1").unwrap().0;
        assert_eq!(m, vec![Method::ClosedForm1, Method::Series]);
        assert!(parse_methods("").is_err());
        assert!(parse_methods("eq3").is_err());
    }

    #[test]
    fn float_formatting_is_shortest_round_trip() {
        assert_eq!(fmt_f64(6.0), "6.0");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("eval"));
    }

    #[test]
    fn negative_point_is_accepted() {
        let (code, out, _) = run_capture(&["eval", "-n", "1", "-x", "-ln2", "--method", "eq1", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        // f'(-ln2) = -e^x/(e^x-1)^2 = -(1/2)/(1/4) = -2
        let value: f64 = out.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
        assert!((value + 2.0).abs() < 1e-14);
    }
}
