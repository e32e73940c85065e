//! Verification suites and the report they produce.
//!
//! Every suite is deterministic: records come out in a fixed order and all
//! sums run in a fixed order, whether or not evaluations fan out across
//! threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deriv::{
    central_difference, deriv_eq1, deriv_eq2, deriv_series, eq1_coefficients, eq2_coefficients,
    fermi_maclaurin_coeff, geometric_moment, reg_deriv_smallx, Method, SeriesPolicy,
    DEFAULT_SMALLX_TERMS,
};
use crate::error::{Error, Result};
use crate::exact::{factorial, factorial_f64, ExactInt, ExactRational};
use crate::quad::{deriv_quadrature, fourier_sine_coth_check, QuadPolicy};
use crate::stirling::{stirling_table, StirlingTriangle};
use crate::zeta::{check_bernoulli_zeta, check_euler, zero_limit_numeric, zero_limit_rhs, IdentityCertificate};

pub const SCHEMA_VERSION: u32 = 1;

/// Pass thresholds, one per check family.
pub mod tolerances {
    /// eq1 / eq2 / series pairwise, relative.
    pub const CROSS_METHOD: f64 = 1e-10;
    /// Quadrature against the closed form, relative.
    pub const QUADRATURE: f64 = 1e-8;
    /// Fourier sine / coth identity, absolute.
    pub const COTH_IDENTITY: f64 = 1e-10;
    /// Bernoulli–zeta and Euler certificates, relative.
    pub const IDENTITY: f64 = 1e-12;
    /// Extrapolated small-x limit against the zeta formula, absolute.
    pub const LIMIT: f64 = 1e-6;
    /// Maclaurin coefficients against finite differences, absolute.
    pub const MACLAURIN: f64 = 1e-6;
    /// Geometric moment against direct summation, relative.
    pub const MOMENT: f64 = 1e-12;
    /// Bernoulli series plus pole term against the closed form, relative.
    pub const SMALL_X: f64 = 1e-8;
}

pub const CROSS_XS: [f64; 7] = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const QUAD_XS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 5.0];
pub const COTH_XS: [f64; 3] = [0.5, 1.0, 2.0];
pub const MOMENT_XS: [f64; 5] = [-0.5, -0.1, 0.1, 0.5, 0.9];
pub const SMALL_X_XS: [f64; 3] = [0.05, 0.1, 0.5];
pub const MACLAURIN_PARAMS: [(f64, f64); 3] = [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Stirling,
    Forms,
    Cross,
    Moment,
    SmallX,
    Quad,
    Coth,
    BernoulliZeta,
    Euler,
    Limit,
    Maclaurin,
    All,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Stirling,
        Suite::Forms,
        Suite::Cross,
        Suite::Moment,
        Suite::SmallX,
        Suite::Quad,
        Suite::Coth,
        Suite::BernoulliZeta,
        Suite::Euler,
        Suite::Limit,
        Suite::Maclaurin,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Stirling => "stirling",
            Suite::Forms => "forms",
            Suite::Cross => "cross",
            Suite::Moment => "moment",
            Suite::SmallX => "small-x",
            Suite::Quad => "quad",
            Suite::Coth => "coth",
            Suite::BernoulliZeta => "bernoulli-zeta",
            Suite::Euler => "euler",
            Suite::Limit => "limit",
            Suite::Maclaurin => "maclaurin",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Knobs shared by the suites; `None` means the suite's own default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyConfig {
    /// Largest order for stirling / forms / bernoulli-zeta.
    pub max_n: Option<u32>,
    /// Largest m for euler.
    pub max_m: Option<u32>,
    /// Orders for cross / quad / limit / small-x / moment / maclaurin.
    pub orders: Option<Vec<u32>>,
    /// Points for cross / quad / coth / small-x / moment.
    pub points: Option<Vec<f64>>,
    pub series: SeriesPolicy,
    pub quad: QuadPolicy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub check: String,
    pub n: u32,
    pub x: f64,
    pub method_a: String,
    pub method_b: String,
    pub value_a: f64,
    pub value_b: f64,
    pub rel_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub check: String,
    pub parameter: u32,
    pub detail: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CheckRecord {
    Certificate(IdentityCertificate),
    Comparison(Comparison),
    Exact(ExactCheck),
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        match self {
            CheckRecord::Certificate(c) => c.passed,
            CheckRecord::Comparison(c) => c.passed,
            CheckRecord::Exact(c) => c.passed,
        }
    }

    fn defect(&self) -> f64 {
        match self {
            CheckRecord::Certificate(c) => c.rel_defect,
            CheckRecord::Comparison(c) => c.rel_defect,
            CheckRecord::Exact(_) => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// Largest numeric defect over all records.
    pub worst_defect: f64,
}

impl VerifyReport {
    pub fn new(suite: Suite, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|c| c.passed()).count();
        let worst_defect = checks.iter().map(CheckRecord::defect).fold(0.0, f64::max);
        VerifyReport {
            schema: SCHEMA_VERSION,
            suite: suite.name().to_string(),
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            worst_defect,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Independent oracles the suites compare against.
pub mod oracles {
    use super::*;

    /// Number of partitions of an n-set into exactly k nonempty blocks,
    /// by enumerating restricted growth strings.
    pub fn count_set_partitions(n: u32, k: u32) -> u64 {
        fn walk(pos: u32, n: u32, blocks: u32, k: u32) -> u64 {
            if pos == n {
                return (blocks == k) as u64;
            }
            (0..=blocks)
                .map(|b| if b == blocks { blocks + 1 } else { blocks })
                .filter(|&opened| opened <= k)
                .map(|opened| walk(pos + 1, n, opened, k))
                .sum()
        }
        walk(0, n, 0, k)
    }

    /// `Σ_{m>=0} m^n x^m` summed exactly on the dyadic value `x = p/q`
    /// until a geometric tail bound drops below `1e-20` of the partial sum.
    /// The numerator is carried over the common denominator `q^m`.
    pub fn moment_by_summation(n: u32, x: f64) -> f64 {
        assert!(x.abs() < 1.0);
        let xr = ExactRational::from_f64(x).expect("finite");
        let (p, q) = (xr.numer().into_bigint(), xr.denom().into_bigint());
        let ax = x.abs();
        let nf = n as f64;
        let mut num = BigInt::from((n == 0) as u8);
        let mut p_pow = BigInt::from(1u8);
        let mut q_pow = BigInt::from(1u8);
        let mut approx = (n == 0) as u8 as f64;
        let mut m: u64 = 0;
        loop {
            m += 1;
            p_pow *= &p;
            q_pow *= &q;
            num = num * &q + BigInt::from(m).pow(n) * &p_pow;
            let mf = m as f64;
            let term = mf.powf(nf) * x.powi(m as i32);
            approx += term;
            if mf > nf / -ax.ln() {
                let ratio = ax * (1.0 + 1.0 / mf).powf(nf);
                if ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) < 1e-20 * approx.abs() {
                    let exact = ExactRational::new(ExactInt::from(num), ExactInt::from(q_pow))
                        .expect("nonzero denominator");
                    return exact.to_f64();
                }
            }
        }
    }

    /// Taylor coefficient `f^{(n)}(0)/n!` from central differences at steps
    /// `h`, `h/2`, `h/4` combined by two Richardson steps.
    pub fn taylor_coefficient_fd<F: Fn(f64) -> f64>(f: F, n: u32, h: f64) -> f64 {
        if n == 0 {
            return f(0.0);
        }
        let d: Vec<f64> = [1.0, 0.5, 0.25]
            .iter()
            .map(|s| central_difference(&f, n, 0.0, s * h))
            .collect();
        let r1 = (4.0 * d[1] - d[0]) / 3.0;
        let r2 = (4.0 * d[2] - d[1]) / 3.0;
        (16.0 * r2 - r1) / 15.0 / factorial_f64(n)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[allow(clippy::too_many_arguments)]
fn comparison(
    check: &str,
    n: u32,
    x: f64,
    a: (&str, f64),
    b: (&str, f64),
    defect: f64,
    tolerance: f64,
) -> CheckRecord {
    CheckRecord::Comparison(Comparison {
        check: check.to_string(),
        n,
        x,
        method_a: a.0.to_string(),
        method_b: b.0.to_string(),
        value_a: a.1,
        value_b: b.1,
        rel_defect: defect,
        tolerance,
        passed: defect.is_finite() && defect <= tolerance,
    })
}

fn failed_evaluation(check: &str, n: u32, x: f64, what: &str, err: &Error) -> CheckRecord {
    CheckRecord::Exact(ExactCheck {
        check: check.to_string(),
        parameter: n,
        detail: format!("{what} failed at x = {x}: {err}"),
        passed: false,
    })
}

fn range(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).collect()
}

/// Recurrence over the whole triangle and brute-force enumeration for
/// `n <= min(max_n, 10)`.
pub fn stirling_suite(max_n: u32) -> Vec<CheckRecord> {
    let t = stirling_table(max_n);
    let mut out = Vec::new();
    for m in 0..max_n {
        let bad: Vec<u32> = (1..=m + 1)
            .filter(|&k| {
                let lhs = t.get(m + 1, k).expect("in table").clone();
                let rhs = &ExactInt::from(k) * t.get(m, k).expect("in table")
                    + t.get(m, k - 1).expect("in table").clone();
                lhs != rhs
            })
            .collect();
        out.push(CheckRecord::Exact(ExactCheck {
            check: "stirling-recurrence".into(),
            parameter: m + 1,
            detail: if bad.is_empty() {
                format!("S({},k) = k S({m},k) + S({m},k-1) for k = 1..={}", m + 1, m + 1)
            } else {
                format!("recurrence fails at k = {bad:?}")
            },
            passed: bad.is_empty(),
        }));
    }
    for n in 0..=max_n.min(10) {
        let bad: Vec<u32> = (0..=n)
            .filter(|&k| t.get(n, k) != Some(&ExactInt::from(oracles::count_set_partitions(n, k))))
            .collect();
        out.push(CheckRecord::Exact(ExactCheck {
            check: "stirling-enumeration".into(),
            parameter: n,
            detail: if bad.is_empty() {
                format!("row {n} equals set-partition counts")
            } else {
                format!("row {n} differs from enumeration at k = {bad:?}")
            },
            passed: bad.is_empty(),
        }));
    }
    out
}

/// Exact coefficient-by-coefficient equality of the two closed forms.
pub fn forms_suite(max_n: u32) -> Vec<CheckRecord> {
    let t = stirling_table(max_n + 1);
    (0..=max_n)
        .map(|n| {
            let a = eq1_coefficients(n, &t).expect("table covers n+1");
            let b = eq2_coefficients(n, &t).expect("table covers n");
            let passed = a == b;
            CheckRecord::Exact(ExactCheck {
                check: "closed-form-coefficients".into(),
                parameter: n,
                detail: if passed {
                    format!("{} coefficients identical", a.len())
                } else {
                    "coefficient vectors differ".into()
                },
                passed,
            })
        })
        .collect()
}

/// eq1, eq2 and series pairwise on an `(n, x)` grid.
pub fn cross_suite(
    orders: &[u32],
    xs: &[f64],
    triangle: &StirlingTriangle,
    series: &SeriesPolicy,
) -> Vec<CheckRecord> {
    let grid: Vec<(u32, f64)> = orders
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| (n, x)))
        .collect();
    grid.par_iter()
        .map(|&(n, x)| {
            let runs = [
                deriv_eq1(n, x, triangle),
                deriv_eq2(n, x, triangle),
                deriv_series(n, x, series),
            ];
            let mut recs = Vec::with_capacity(3);
            let methods = [Method::ClosedForm1, Method::ClosedForm2, Method::Series];
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                match (&runs[i], &runs[j]) {
                    (Ok(a), Ok(b)) => recs.push(comparison(
                        "cross-method",
                        n,
                        x,
                        (methods[i].tag(), a.value),
                        (methods[j].tag(), b.value),
                        relative(a.value, b.value),
                        tolerances::CROSS_METHOD,
                    )),
                    (Err(e), _) | (_, Err(e)) => {
                        recs.push(failed_evaluation("cross-method", n, x, "evaluation", e))
                    }
                }
            }
            recs
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn moment_suite(orders: &[u32], xs: &[f64], triangle: &StirlingTriangle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &n in orders {
        for &x in xs {
            match geometric_moment(n, x, triangle) {
                Ok(v) => {
                    let direct = oracles::moment_by_summation(n, x);
                    out.push(comparison(
                        "geometric-moment",
                        n,
                        x,
                        ("omega", v),
                        ("direct-sum", direct),
                        relative(v, direct),
                        tolerances::MOMENT,
                    ));
                }
                Err(e) => out.push(failed_evaluation("geometric-moment", n, x, "moment", &e)),
            }
        }
    }
    out
}

pub fn small_x_suite(orders: &[u32], xs: &[f64], triangle: &StirlingTriangle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &n in orders {
        for &x in xs {
            let reg = reg_deriv_smallx(n, x, DEFAULT_SMALLX_TERMS);
            let closed = deriv_eq1(n, x, triangle);
            match (reg, closed) {
                (Ok(r), Ok(c)) => {
                    let pole = factorial_f64(n) / x.powi(n as i32 + 1);
                    let full = if n % 2 == 0 { r.value + pole } else { r.value - pole };
                    out.push(comparison(
                        "small-x-series",
                        n,
                        x,
                        ("smallx", full),
                        ("eq1", c.value),
                        relative(full, c.value),
                        tolerances::SMALL_X,
                    ));
                }
                (Err(e), _) | (_, Err(e)) => {
                    out.push(failed_evaluation("small-x-series", n, x, "evaluation", &e))
                }
            }
        }
    }
    out
}

pub fn quad_suite(
    orders: &[u32],
    xs: &[f64],
    triangle: &StirlingTriangle,
    policy: &QuadPolicy,
) -> Vec<CheckRecord> {
    let grid: Vec<(u32, f64)> = orders
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| (n, x)))
        .collect();
    grid.par_iter()
        .map(|&(n, x)| match (deriv_quadrature(n, x, policy), deriv_eq1(n, x, triangle)) {
            (Ok(q), Ok(c)) => comparison(
                "quadrature",
                n,
                x,
                ("quad", q.value),
                ("eq1", c.value),
                relative(q.value, c.value),
                tolerances::QUADRATURE,
            ),
            (Err(e), _) | (_, Err(e)) => failed_evaluation("quadrature", n, x, "evaluation", &e),
        })
        .collect()
}

pub fn coth_suite(xs: &[f64], policy: &QuadPolicy) -> Vec<CheckRecord> {
    xs.iter()
        .map(|&x| match fourier_sine_coth_check(x, policy) {
            Ok(defect) => comparison(
                "fourier-sine-coth",
                0,
                x,
                ("quad", defect),
                ("coth", 0.0),
                defect,
                tolerances::COTH_IDENTITY,
            ),
            Err(e) => failed_evaluation("fourier-sine-coth", 0, x, "quadrature", &e),
        })
        .collect()
}

pub fn bernoulli_zeta_suite(max_n: u32) -> Vec<CheckRecord> {
    (1..=max_n)
        .map(|n| match check_bernoulli_zeta(n, tolerances::IDENTITY) {
            Ok(c) => CheckRecord::Certificate(c),
            Err(e) => failed_evaluation("bernoulli-zeta", n, 0.0, "certificate", &e),
        })
        .collect()
}

pub fn euler_suite(max_m: u32) -> Vec<CheckRecord> {
    (1..=max_m)
        .map(|m| match check_euler(m, tolerances::IDENTITY) {
            Ok(c) => CheckRecord::Certificate(c),
            Err(e) => failed_evaluation("euler", m, 0.0, "certificate", &e),
        })
        .collect()
}

pub fn limit_suite(orders: &[u32], policy: &QuadPolicy) -> Vec<CheckRecord> {
    orders
        .par_iter()
        .map(|&n| match (zero_limit_numeric(n, policy), zero_limit_rhs(n)) {
            (Ok(l), Ok(rhs)) => comparison(
                "zero-limit",
                n,
                0.0,
                ("extrapolated-quad", l.value),
                ("zeta-formula", rhs),
                (l.value - rhs).abs(),
                tolerances::LIMIT,
            ),
            (Err(e), _) | (_, Err(e)) => failed_evaluation("zero-limit", n, 0.0, "limit", &e),
        })
        .collect()
}

/// Step for the finite-difference Taylor oracle of `1/(μ e^{λt} + 1)`,
/// scaled by `1/|λ|` since the function depends on `λt` only.
pub fn maclaurin_step(lambda: f64) -> f64 {
    0.2 / lambda.abs().max(1e-3)
}

pub fn maclaurin_suite(
    orders: &[u32],
    params: &[(f64, f64)],
    triangle: &StirlingTriangle,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &(lambda, mu) in params {
        let f = |t: f64| 1.0 / (mu * (lambda * t).exp() + 1.0);
        for &n in orders {
            let label = format!("maclaurin(lambda={lambda},mu={mu})");
            match fermi_maclaurin_coeff(n, lambda, mu, triangle) {
                Ok(c) => {
                    let fd = oracles::taylor_coefficient_fd(f, n, maclaurin_step(lambda));
                    out.push(comparison(
                        &label,
                        n,
                        0.0,
                        ("omega", c),
                        ("finite-difference", fd),
                        (c - fd).abs(),
                        tolerances::MACLAURIN,
                    ));
                }
                Err(e) => out.push(failed_evaluation(&label, n, 0.0, "coefficient", &e)),
            }
        }
    }
    out
}

/// Runs one suite (or all of them, in declaration order).
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let orders = |default: Vec<u32>| cfg.orders.clone().unwrap_or(default);
    let points = |default: &[f64]| cfg.points.clone().unwrap_or_else(|| default.to_vec());
    let max_order = |os: &[u32]| os.iter().copied().max().unwrap_or(0);

    let checks = match suite {
        Suite::Stirling => stirling_suite(cfg.max_n.unwrap_or(30)),
        Suite::Forms => forms_suite(cfg.max_n.unwrap_or(50)),
        Suite::Cross => {
            let os = orders(range(1, 15));
            let t = stirling_table(max_order(&os) + 1);
            cross_suite(&os, &points(&CROSS_XS), &t, &cfg.series)
        }
        Suite::Moment => {
            let os = orders(range(0, 10));
            let t = stirling_table(max_order(&os));
            moment_suite(&os, &points(&MOMENT_XS), &t)
        }
        Suite::SmallX => {
            let os = orders(range(0, 8));
            let t = stirling_table(max_order(&os) + 1);
            small_x_suite(&os, &points(&SMALL_X_XS), &t)
        }
        Suite::Quad => {
            let os = orders(range(1, 8));
            let t = stirling_table(max_order(&os) + 1);
            quad_suite(&os, &points(&QUAD_XS), &t, &cfg.quad)
        }
        Suite::Coth => coth_suite(&points(&COTH_XS), &cfg.quad),
        Suite::BernoulliZeta => bernoulli_zeta_suite(cfg.max_n.unwrap_or(25)),
        Suite::Euler => euler_suite(cfg.max_m.unwrap_or(15)),
        Suite::Limit => limit_suite(&orders(range(1, 6)), &cfg.quad),
        Suite::Maclaurin => {
            let os = orders(range(0, 6));
            let t = stirling_table(max_order(&os));
            maclaurin_suite(&os, &MACLAURIN_PARAMS, &t)
        }
        Suite::All => {
            let defaults = VerifyConfig {
                series: cfg.series,
                quad: cfg.quad,
                ..VerifyConfig::default()
            };
            Suite::ALL
                .iter()
                .filter(|&&s| s != Suite::All)
                .flat_map(|&s| run_suite(s, &defaults).checks)
                .collect()
        }
    };
    VerifyReport::new(suite, checks)
}

/// `ω_n(1)` equals `Σ S(n,k) k!` computed independently from the table.
pub fn fubini_row_sum(n: u32, triangle: &StirlingTriangle) -> Option<ExactInt> {
    let row = triangle.row(n)?;
    Some(
        row.iter()
            .enumerate()
            .fold(ExactInt::zero(), |acc, (k, s)| acc + s * &factorial(k as u32)),
    )
}
