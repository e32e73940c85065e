//! Binary64 evaluation of `(d/dx)^n 1/(e^x - 1)`.
//!
//! Writing `u = 1/(e^x - 1)`, the n-th derivative has two Stirling closed
//! forms, both polynomials in `u`:
//!
//! ```text
//! (-1)^n Σ_{k=1}^{n+1} S(n+1,k) (k-1)! u^k          (deriv_eq1)
//! (-1)^n (1 + u) Σ_{k=1}^{n} S(n,k) k! u^k           (deriv_eq2)
//! ```
//!
//! and for `x > 0` it is also `(-1)^n Σ_{k>=1} k^n e^{-kx}` (deriv_series).
//! The two polynomials coincide coefficient by coefficient; see
//! [`eq1_coefficients`] and [`eq2_coefficients`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bernoulli::regularized_coefficients;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, ExactInt, ExactRational};
use crate::stirling::{geometric_polynomial, StirlingTriangle};

/// Largest order accepted by the binary64 paths (`171!` overflows).
pub const MAX_FLOAT_ORDER: u32 = 170;

/// Largest order the finite-difference oracle accepts.
pub const MAX_FD_ORDER: u32 = 6;

/// Default number of terms for [`reg_deriv_smallx`].
pub const DEFAULT_SMALLX_TERMS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "eq1")]
    ClosedForm1,
    #[serde(rename = "eq2")]
    ClosedForm2,
    #[serde(rename = "series")]
    Series,
    #[serde(rename = "quad")]
    Quadrature,
    #[serde(rename = "smallx")]
    SmallXSeries,
    #[serde(rename = "fd")]
    FiniteDifference,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::ClosedForm1,
        Method::ClosedForm2,
        Method::Series,
        Method::Quadrature,
        Method::SmallXSeries,
        Method::FiniteDifference,
    ];

    /// Short name used on the command line and in reports.
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm1 => "eq1",
            Method::ClosedForm2 => "eq2",
            Method::Series => "series",
            Method::Quadrature => "quad",
            Method::SmallXSeries => "smallx",
            Method::FiniteDifference => "fd",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

/// One derivative evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub order: u32,
    pub point: f64,
    pub value: f64,
    pub method: Method,
    /// Claimed bound on `|value - exact|`.
    pub err_estimate: f64,
}

/// Truncation control for `Σ k^n e^{-kx}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: u64,
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, max_terms: u64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidPolicy("rel_tol must lie in (0, 1)"));
        }
        if max_terms == 0 {
            return Err(Error::InvalidPolicy("max_terms must be at least 1"));
        }
        Ok(SeriesPolicy { rel_tol, max_terms })
    }
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            rel_tol: 1e-15,
            max_terms: 10_000_000,
        }
    }
}

/// `1/(e^x - 1)` without cancellation at either end.
pub fn inv_expm1(x: f64) -> f64 {
    if x > 0.0 {
        let q = (-x).exp();
        q / -(-x).exp_m1()
    } else {
        1.0 / x.exp_m1()
    }
}

fn check_float_order(n: u32) -> Result<()> {
    if n > MAX_FLOAT_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            min: 0,
            max: MAX_FLOAT_ORDER,
        });
    }
    Ok(())
}

fn check_point(x: f64) -> Result<()> {
    if x == 0.0 {
        return Err(Error::Pole { x });
    }
    if !x.is_finite() {
        return Err(Error::Domain {
            value: x,
            requirement: "x must be finite",
        });
    }
    Ok(())
}

/// Exact coefficients of `Σ_{k=1}^{n+1} S(n+1,k)(k-1)! u^k`, indexed by
/// power of `u` (slot 0 is zero).
pub fn eq1_coefficients(n: u32, triangle: &StirlingTriangle) -> Result<Vec<ExactInt>> {
    let row = triangle.check_order(n + 1)?;
    Ok(row
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k == 0 {
                ExactInt::zero()
            } else {
                s * &factorial(k as u32 - 1)
            }
        })
        .collect())
}

/// Exact coefficients of `(1 + u) Σ_{k=1}^{n} S(n,k) k! u^k`, indexed by
/// power of `u`, length `n + 2`. At `n = 0` the form is empty, and the base
/// function `u` is returned instead, as [`deriv_eq2`] does.
pub fn eq2_coefficients(n: u32, triangle: &StirlingTriangle) -> Result<Vec<ExactInt>> {
    let omega = geometric_polynomial(n, triangle)?;
    if n == 0 {
        return Ok(vec![ExactInt::zero(), ExactInt::one()]);
    }
    let mut inner: Vec<ExactInt> = omega.coeffs().to_vec();
    // the k = 0 slot of ω_n is dropped; it is nonzero only for n = 0
    inner[0] = ExactInt::zero();
    let mut out = vec![ExactInt::zero(); inner.len() + 1];
    for (k, a) in inner.into_iter().enumerate() {
        out[k] = out[k].clone() + a.clone();
        out[k + 1] = out[k + 1].clone() + a;
    }
    Ok(out)
}

/// Horner in `u`, returning the value and `Σ |c_k u^k|`.
fn horner_with_magnitude(coeffs: &[f64], u: f64) -> (f64, f64) {
    let au = u.abs();
    coeffs.iter().rev().fold((0.0, 0.0), |(v, m), &c| {
        (v * u + c, m * au + c.abs())
    })
}

fn parity(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn closed_form(
    n: u32,
    x: f64,
    coeffs: &[ExactInt],
    method: Method,
) -> Result<EvalResult> {
    let u = inv_expm1(x);
    let c: Vec<f64> = coeffs.iter().map(ExactInt::to_f64).collect();
    let (v, mag) = horner_with_magnitude(&c, u);
    let value = parity(n) * v;
    if !value.is_finite() {
        return Err(Error::Overflow { n });
    }
    // coefficient rounding, Horner rounding, and up to k-fold amplification
    // of the relative error in u
    let err_estimate = 4.0 * (n as f64 + 2.0) * f64::EPSILON * mag;
    Ok(EvalResult {
        order: n,
        point: x,
        value,
        method,
        err_estimate,
    })
}

fn base_function(x: f64, method: Method) -> EvalResult {
    let value = inv_expm1(x);
    EvalResult {
        order: 0,
        point: x,
        value,
        method,
        err_estimate: 2.0 * f64::EPSILON * value.abs(),
    }
}

/// `(-1)^n Σ_{k=1}^{n+1} S(n+1,k)(k-1)! u^k`; `n = 0` returns `u` itself.
pub fn deriv_eq1(n: u32, x: f64, triangle: &StirlingTriangle) -> Result<EvalResult> {
    check_point(x)?;
    check_float_order(n)?;
    if n == 0 {
        return Ok(base_function(x, Method::ClosedForm1));
    }
    let coeffs = eq1_coefficients(n, triangle)?;
    closed_form(n, x, &coeffs, Method::ClosedForm1)
}

/// `(-1)^n (1 + u) ω_n(u)` with `e^x/(e^x - 1)` written as `1 + u`;
/// `n = 0` returns `u` itself.
pub fn deriv_eq2(n: u32, x: f64, triangle: &StirlingTriangle) -> Result<EvalResult> {
    check_point(x)?;
    check_float_order(n)?;
    if n == 0 {
        return Ok(base_function(x, Method::ClosedForm2));
    }
    let omega = geometric_polynomial(n, triangle)?;
    let u = inv_expm1(x);
    let c: Vec<f64> = omega.coeffs().iter().map(ExactInt::to_f64).collect();
    let (w, mag) = horner_with_magnitude(&c, u);
    let value = parity(n) * (1.0 + u) * w;
    if !value.is_finite() {
        return Err(Error::Overflow { n });
    }
    let err_estimate = 4.0 * (n as f64 + 3.0) * f64::EPSILON * mag * (1.0 + u.abs());
    Ok(EvalResult {
        order: n,
        point: x,
        value,
        method: Method::ClosedForm2,
        err_estimate,
    })
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(-1)^n Σ_{k>=1} k^n e^{-kx}` for `x > 0`.
///
/// The terms grow until `k ≈ n/x`, so truncation is only considered past
/// that peak. From there on the term ratio is at most
/// `r = e^{-x} (1 + 1/K)^n`, which bounds the tail by `term_K r/(1 - r)`;
/// summation stops once that bound drops below `rel_tol` times the partial
/// sum, and the bound becomes the error estimate.
pub fn deriv_series(n: u32, x: f64, policy: &SeriesPolicy) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DivergentSeries { x });
    }
    let nf = n as f64;
    let peak = nf / x;
    let mut acc = CompensatedSum::default();
    let mut max_exponent: f64 = 0.0;
    let mut k: u64 = 1;
    loop {
        let kf = k as f64;
        let exponent = nf * kf.ln() - kf * x;
        max_exponent = max_exponent.max(nf * kf.ln()).max(kf * x);
        let term = exponent.exp();
        acc.add(term);
        if kf > peak {
            let ratio = (-x).exp() * (1.0 + 1.0 / kf).powf(nf);
            if ratio < 1.0 {
                let tail = term * ratio / (1.0 - ratio);
                let partial = acc.value();
                if tail < policy.rel_tol * partial {
                    if !partial.is_finite() {
                        return Err(Error::Overflow { n });
                    }
                    let rounding = (4.0 + max_exponent) * f64::EPSILON * partial;
                    return Ok(EvalResult {
                        order: n,
                        point: x,
                        value: parity(n) * partial,
                        method: Method::Series,
                        err_estimate: tail + rounding,
                    });
                }
            }
        }
        if k >= policy.max_terms {
            return Err(Error::NonConvergence {
                max_terms: policy.max_terms,
            });
        }
        k += 1;
    }
}

/// `Σ_{m>=0} m^n x^m = ω_n(x/(1-x)) / (1-x)` for `|x| < 1`.
///
/// The input is taken as the exact dyadic rational it represents and the
/// right side is evaluated exactly, so the only rounding is the final
/// conversion. Alternating inputs (`x < 0`) make ω_n badly conditioned and
/// binary64 Horner loses several digits there.
pub fn geometric_moment(n: u32, x: f64, triangle: &StirlingTriangle) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain {
            value: x,
            requirement: "|x| < 1",
        });
    }
    let omega = geometric_polynomial(n, triangle)?;
    let xr = ExactRational::from_f64(x).expect("finite");
    let one_minus = &ExactRational::one() - &xr;
    let y = &xr / &one_minus;
    let v = &omega.eval_exact(&y) / &one_minus;
    Ok(v.to_f64())
}

/// Coefficient of `t^n` in `1/(μ e^{λt} + 1) = (1/(μ+1)) Σ λ^n ω_n(-μ/(μ+1)) t^n/n!`.
pub fn fermi_maclaurin_coeff(
    n: u32,
    lambda: f64,
    mu: f64,
    triangle: &StirlingTriangle,
) -> Result<f64> {
    if mu == -1.0 {
        return Err(Error::SingularParameter);
    }
    check_float_order(n)?;
    let omega = geometric_polynomial(n, triangle)?;
    let w = omega.eval(-mu / (mu + 1.0));
    let scale = (1..=n).fold(1.0, |acc, k| acc * lambda / k as f64);
    Ok(scale * w / (mu + 1.0))
}

/// n-th derivative of `g(x) = 1/(e^x - 1) - 1/x` from its Taylor series
/// `Σ_m B_{m+1}/(m+1)! x^m`, differentiated term by term and truncated at
/// `n_terms` terms. Valid inside the radius `|x| < 2π`.
///
/// The tail bound uses `|B_{m+1}|/(m+1)! <= 4/(2π)^{m+1}` (from the even
/// Bernoulli magnitudes) and the term ratio `(|x|/2π)(n+j+1)/(j+1)`.
pub fn reg_deriv_smallx(n: u32, x: f64, n_terms: u32) -> Result<EvalResult> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if !(x.abs() < two_pi) {
        return Err(Error::OutOfRadius { x });
    }
    if n_terms == 0 {
        return Err(Error::InvalidPolicy("n_terms must be at least 1"));
    }
    check_float_order(n)?;
    let coeffs = regularized_coefficients(n + n_terms - 1);
    // d_j = c_{n+j} (n+j)!/j!
    let d: Vec<f64> = (0..n_terms)
        .map(|j| {
            let m = n + j;
            let falling = ExactRational::new(factorial(m), factorial(j)).expect("j! > 0");
            (&coeffs[m as usize] * &falling).to_f64()
        })
        .collect();
    let (value, mag) = horner_with_magnitude(&d, x);

    let ax = x.abs();
    let j = n_terms as f64;
    let nf = n as f64;
    let ratio = (ax / two_pi) * (nf + j + 1.0) / (j + 1.0);
    let tail = if ax == 0.0 {
        0.0
    } else {
        if ratio >= 1.0 {
            return Err(Error::NonConvergence {
                max_terms: n_terms as u64,
            });
        }
        // 4/(2π)^{n+J+1} · Π_{i=1}^{n}(J+i) · |x|^J, accumulated in logs
        let log_first = 4f64.ln() - (nf + j + 1.0) * two_pi.ln()
            + (1..=n).map(|i| (j + i as f64).ln()).sum::<f64>()
            + j * ax.ln();
        log_first.exp() / (1.0 - ratio)
    };
    let err_estimate = tail + 2.0 * (n_terms as f64 + 1.0) * f64::EPSILON * mag;
    Ok(EvalResult {
        order: n,
        point: x,
        value,
        method: Method::SmallXSeries,
        err_estimate,
    })
}

/// Central n-th difference `Σ_i (-1)^i C(n,i) f(x + (n/2 - i)h) / h^n`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, n: u32, x: f64, h: f64) -> f64 {
    let half = n as f64 / 2.0;
    let mut acc = 0.0;
    for i in 0..=n {
        let w = binomial(n, i).to_f64() * parity(i);
        acc += w * f(x + (half - i as f64) * h);
    }
    acc / h.powi(n as i32)
}

/// Default step `ε^{1/(n+2)} · max(1, |x|)`.
pub fn default_fd_step(n: u32, x: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (n as f64 + 2.0)) * x.abs().max(1.0)
}

/// Finite-difference estimate of `(d/dx)^n 1/(e^x - 1)`, for `n <= 6`.
pub fn finite_difference_oracle(n: u32, x: f64, h: f64) -> Result<f64> {
    if n > MAX_FD_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            min: 0,
            max: MAX_FD_ORDER,
        });
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain {
            value: h,
            requirement: "step h must be positive and finite",
        });
    }
    check_point(x)?;
    let reach = n as f64 * h / 2.0;
    if x - reach <= 0.0 && 0.0 <= x + reach {
        return Err(Error::Pole { x });
    }
    if n == 0 {
        return Ok(inv_expm1(x));
    }
    Ok(central_difference(inv_expm1, n, x, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::stirling_table;
    use std::f64::consts::LN_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn closed_forms_at_ln2() {
        let t = stirling_table(20);
        assert_eq!(deriv_eq1(0, LN_2, &t).unwrap().value, 1.0);
        assert!((deriv_eq1(1, LN_2, &t).unwrap().value + 2.0).abs() < 1e-15);
        assert!((deriv_eq1(2, LN_2, &t).unwrap().value - 6.0).abs() < 1e-14);
        assert!((deriv_eq2(1, LN_2, &t).unwrap().value + 2.0).abs() < 1e-15);
        assert!((deriv_eq2(2, LN_2, &t).unwrap().value - 6.0).abs() < 1e-14);
        assert_eq!(deriv_eq2(0, LN_2, &t).unwrap().value, 1.0);
    }

    #[test]
    fn closed_form_large_x_decays() {
        let t = stirling_table(5);
        let v = deriv_eq2(1, 40.0, &t).unwrap().value;
        assert!(v.abs() < 1e-16 && v < 0.0);
    }

    #[test]
    fn frozen_high_precision_values() {
        // 50-digit numerical differentiation of 1/(e^x - 1)
        let cases = [
            (3, 1.0, -6.0065127966367601483),
            (5, 0.1, -119999999.99605250786),
            (15, 0.1, -1.3076743679999988386e28),
            (15, 10.0, -0.00011428709580560458979),
            (8, 0.25, 10569646080.001839683),
            (1, 5.0, -0.0068296728801920565624),
        ];
        let t = stirling_table(20);
        let policy = SeriesPolicy::default();
        for (n, x, expect) in cases {
            for r in [
                deriv_eq1(n, x, &t).unwrap(),
                deriv_eq2(n, x, &t).unwrap(),
                deriv_series(n, x, &policy).unwrap(),
            ] {
                assert!(rel(r.value, expect) < 1e-13, "{:?} n={n} x={x}", r.method);
                assert!((r.value - expect).abs() <= r.err_estimate + 1e-16 * expect.abs(),
                    "{:?} n={n} x={x} err={} est={}", r.method, (r.value - expect).abs(), r.err_estimate);
            }
        }
    }

    #[test]
    fn closed_form_errors() {
        let t = stirling_table(5);
        assert_eq!(deriv_eq1(1, 0.0, &t), Err(Error::Pole { x: 0.0 }));
        assert!(matches!(deriv_eq1(171, 1.0, &t), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(deriv_eq1(5, 1.0, &t), Err(Error::OrderOutOfRange { .. })));
        assert!(deriv_eq2(5, 1.0, &t).is_ok());
    }

    #[test]
    fn negative_x_matches_reflection() {
        // 1/(e^{-x} - 1) = -1 - 1/(e^x - 1), so derivatives of order n >= 1
        // pick up the sign (-1)^{n+1}
        let t = stirling_table(12);
        for n in 1..=10 {
            for x in [0.3, 1.0, 2.5] {
                let pos = deriv_eq1(n, x, &t).unwrap().value;
                let neg = deriv_eq1(n, -x, &t).unwrap().value;
                let expect = -parity(n) * pos;
                assert!(rel(neg, expect) < 1e-11, "n={n} x={x}: {neg} vs {expect}");
            }
        }
    }

    #[test]
    fn series_at_ln2() {
        let p = SeriesPolicy::default();
        assert!((deriv_series(0, LN_2, &p).unwrap().value - 1.0).abs() < 1e-15);
        assert!((deriv_series(1, LN_2, &p).unwrap().value + 2.0).abs() < 1e-14);
        assert!((deriv_series(2, LN_2, &p).unwrap().value - 6.0).abs() < 1e-14);
    }

    #[test]
    fn series_errors() {
        let p = SeriesPolicy::default();
        assert_eq!(deriv_series(1, 0.0, &p), Err(Error::DivergentSeries { x: 0.0 }));
        assert!(deriv_series(1, -1.0, &p).is_err());
        let tight = SeriesPolicy::new(1e-15, 10).unwrap();
        assert_eq!(
            deriv_series(10, 0.01, &tight),
            Err(Error::NonConvergence { max_terms: 10 })
        );
        assert!(SeriesPolicy::new(0.0, 10).is_err());
        assert!(SeriesPolicy::new(1e-3, 0).is_err());
    }

    #[test]
    fn coefficient_vectors_agree() {
        let t = stirling_table(51);
        for n in 1..=50 {
            assert_eq!(eq1_coefficients(n, &t).unwrap(), eq2_coefficients(n, &t).unwrap(), "n={n}");
        }
    }

    #[test]
    fn geometric_moment_examples() {
        let t = stirling_table(10);
        assert_eq!(geometric_moment(2, 0.5, &t).unwrap(), 6.0);
        assert_eq!(geometric_moment(0, 0.5, &t).unwrap(), 2.0);
        assert!((geometric_moment(1, 1.0 / 3.0, &t).unwrap() - 0.75).abs() < 1e-15);
        assert!(geometric_moment(1, 1.0, &t).is_err());
        assert!(geometric_moment(1, -1.5, &t).is_err());
    }

    #[test]
    fn maclaurin_examples() {
        let t = stirling_table(6);
        assert_eq!(fermi_maclaurin_coeff(0, 1.0, 1.0, &t).unwrap(), 0.5);
        assert_eq!(fermi_maclaurin_coeff(1, 1.0, 1.0, &t).unwrap(), -0.25);
        assert_eq!(fermi_maclaurin_coeff(2, 1.0, 1.0, &t).unwrap(), 0.0);
        assert_eq!(
            fermi_maclaurin_coeff(2, 1.0, -1.0, &t),
            Err(Error::SingularParameter)
        );
    }

    #[test]
    fn maclaurin_matches_exact_series_inversion() {
        // 1/(μ e^{λt} + 1) with λ, μ rational: invert (μ+1) + Σ_{k>=1} μ λ^k t^k/k!
        // exactly and compare coefficients
        let t = stirling_table(10);
        for (lambda, mu) in [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0), (-1.5, 0.25)] {
            let l = ExactRational::from_f64(lambda).unwrap();
            let m = ExactRational::from_f64(mu).unwrap();
            let den: Vec<ExactRational> = (0..=10u32)
                .map(|k| {
                    if k == 0 {
                        &m + &ExactRational::one()
                    } else {
                        &(&m * &l.pow(k as i32))
                            / &ExactRational::from_integer(factorial(k))
                    }
                })
                .collect();
            let mut q: Vec<ExactRational> = Vec::new();
            for k in 0..=10usize {
                let mut acc = if k == 0 { ExactRational::one() } else { ExactRational::zero() };
                for j in 0..k {
                    acc = &acc - &(&q[j] * &den[k - j]);
                }
                q.push(&acc / &den[0]);
            }
            for (k, qk) in q.iter().enumerate() {
                let got = fermi_maclaurin_coeff(k as u32, lambda, mu, &t).unwrap();
                assert!((got - qk.to_f64()).abs() < 1e-14, "λ={lambda} μ={mu} k={k}");
            }
        }
    }

    #[test]
    fn smallx_examples() {
        let r = reg_deriv_smallx(0, 0.0, DEFAULT_SMALLX_TERMS).unwrap();
        assert_eq!(r.value, -0.5);
        assert!(r.err_estimate < 1e-14);
        assert_eq!(reg_deriv_smallx(1, 0.0, DEFAULT_SMALLX_TERMS).unwrap().value, 1.0 / 12.0);
        assert_eq!(reg_deriv_smallx(2, 0.0, DEFAULT_SMALLX_TERMS).unwrap().value, 0.0);
        assert!(matches!(reg_deriv_smallx(1, 7.0, 40), Err(Error::OutOfRadius { .. })));
        // frozen 50-digit values of g'(0.1), g''(0.1), g'(1), g''(1)
        let frozen = [
            (1, 0.1, 0.083291683195273042348),
            (2, 0.1, -0.00083267230474392534909),
            (1, 1.0, 0.079326405792207681055),
            (2, 1.0, -0.007705232875012607074),
        ];
        for (n, x, expect) in frozen {
            let r = reg_deriv_smallx(n, x, DEFAULT_SMALLX_TERMS).unwrap();
            assert!(rel(r.value, expect) < 1e-14, "n={n} x={x}");
            assert!((r.value - expect).abs() <= r.err_estimate);
            assert!(r.err_estimate < 1e-14);
        }
    }

    #[test]
    fn smallx_plus_pole_matches_closed_form() {
        let t = stirling_table(10);
        for n in 0..=8u32 {
            for x in [0.05, 0.1, 0.5] {
                let reg = reg_deriv_smallx(n, x, DEFAULT_SMALLX_TERMS).unwrap().value;
                let pole = parity(n) * factorial(n).to_f64() / x.powi(n as i32 + 1);
                let closed = deriv_eq1(n, x, &t).unwrap().value;
                assert!(rel(reg + pole, closed) < 1e-8, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn finite_difference_examples() {
        let fd1 = finite_difference_oracle(1, LN_2, 1e-4).unwrap();
        assert!((fd1 + 2.0).abs() < 1e-7);
        // the three-point stencil carries truncation error h^2/12 f''''(x),
        // and f''''(ln 2) = Σ k^4 2^-k = 150
        let fd2 = finite_difference_oracle(2, LN_2, 1e-3).unwrap();
        assert!((fd2 - 6.0).abs() < 1.3e-5);
        assert!((fd2 - (6.0 + 150.0e-6 / 12.0)).abs() < 1e-8);
        assert_eq!(finite_difference_oracle(0, 1.3, 0.7).unwrap(), inv_expm1(1.3));
        assert_eq!(finite_difference_oracle(2, 0.001, 0.01), Err(Error::Pole { x: 0.001 }));
        assert!(finite_difference_oracle(7, 1.0, 0.01).is_err());
        assert!(finite_difference_oracle(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn finite_difference_tracks_closed_form_with_default_step() {
        let t = stirling_table(8);
        for n in 1..=6 {
            for x in [0.5, 1.0, 2.0] {
                let h = default_fd_step(n, x);
                let fd = finite_difference_oracle(n, x, h).unwrap();
                let exact = deriv_eq1(n, x, &t).unwrap().value;
                assert!(rel(fd, exact) < 1e-2, "n={n} x={x}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("eq3".parse::<Method>().is_err());
    }
}
