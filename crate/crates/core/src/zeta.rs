//! Zeta values and the Bernoulli–zeta identities.
//!
//! `g(x) = 1/(e^x - 1) - 1/x` is analytic at 0 with Taylor coefficients
//! `B_{n+1}/(n+1)!`, and its n-th derivative tends to
//! `2 n! sin(nπ/2) ζ(n+1) / (2π)^{n+1}` as `x → 0⁺`. Equating the two gives
//! `B_{n+1}/(n+1)! = 2 sin(nπ/2) ζ(n+1)/(2π)^{n+1}`, which for `n + 1 = 2m`
//! is Euler's `B_{2m} = (-1)^{m+1} 2 (2m)! ζ(2m)/(2π)^{2m}`.
//!
//! Each check yields an [`IdentityCertificate`]: the exact side as a reduced
//! fraction, the floating side, the defect and the tolerance it was held to.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bernoulli::bernoulli;
use crate::deriv::{reg_deriv_smallx, CompensatedSum, DEFAULT_SMALLX_TERMS};
use crate::error::{Error, Result};
use crate::exact::{factorial, ExactRational};
use crate::quad::{reg_deriv_quadrature, QuadPolicy};

/// Default relative tolerance for [`zeta_series`].
pub const DEFAULT_ZETA_REL_TOL: f64 = 1e-16;

/// Absolute tolerance used when both sides of an identity vanish.
pub const ZERO_ABS_TOL: f64 = 1e-15;

/// Sample points for [`zero_limit_numeric`], one decade apart.
pub const LIMIT_SAMPLES: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// `ζ(s) = Σ_{k>=1} k^{-s}` for integer `s >= 2`.
///
/// Sums `k < K` directly (smallest terms first) and replaces the rest with
/// the trapezoid tail `K^{-s}/2 + K^{1-s}/(s-1)`, whose error is at most
/// `s K^{-s-1}/12`. `K` is the smallest cut that puts that bound below
/// `rel_tol` (the sum itself is at least 1).
pub fn zeta_series(s: u32, rel_tol: f64) -> Result<f64> {
    if s < 2 {
        return Err(Error::Domain {
            value: s as f64,
            requirement: "s >= 2",
        });
    }
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidPolicy("rel_tol must be positive"));
    }
    let sf = s as f64;
    let cut = (sf / (12.0 * rel_tol)).powf(1.0 / (sf + 1.0)).ceil().max(2.0) as u64;
    let mut acc = CompensatedSum::default();
    let kf = cut as f64;
    acc.add(kf.powf(1.0 - sf) / (sf - 1.0));
    acc.add(0.5 * kf.powf(-sf));
    for k in (1..cut).rev() {
        acc.add((k as f64).powi(-(s as i32)));
    }
    Ok(acc.value())
}

/// `sin(nπ/2)` as an exact integer.
pub fn quarter_turn_sine(n: u32) -> i32 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `2 n!/(2π)^{n+1}`, as a running product.
fn scaled_factorial(n: u32) -> f64 {
    let two_pi = 2.0 * PI;
    (1..=n).fold(2.0 / two_pi, |acc, k| acc * k as f64 / two_pi)
}

/// `2 sin(nπ/2) ζ(n+1)/(2π)^{n+1}`, the floating side of the identity with
/// `B_{n+1}/(n+1)!`. It is [`zero_limit_rhs`] divided by `n!`.
pub fn bernoulli_zeta_rhs(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::UnsupportedOrder {
            n,
            min: 1,
            max: u32::MAX,
        });
    }
    let sign = quarter_turn_sine(n);
    if sign == 0 {
        return Ok(0.0);
    }
    let z = zeta_series(n + 1, DEFAULT_ZETA_REL_TOL)?;
    let scale = 2.0 * (2.0 * PI).powi(-(n as i32 + 1));
    Ok(sign as f64 * scale * z)
}

/// `lim_{x→0⁺} (d/dx)^n (1/(e^x - 1) - 1/x) = 2 n! sin(nπ/2) ζ(n+1)/(2π)^{n+1}`.
pub fn zero_limit_rhs(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::UnsupportedOrder {
            n,
            min: 1,
            max: u32::MAX,
        });
    }
    let sign = quarter_turn_sine(n);
    if sign == 0 {
        return Ok(0.0);
    }
    let z = zeta_series(n + 1, DEFAULT_ZETA_REL_TOL)?;
    Ok(sign as f64 * scaled_factorial(n) * z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityId {
    /// Small-x limit of the n-th derivative of `1/(e^x - 1) - 1/x`.
    ZeroLimit,
    /// `B_{n+1}/(n+1)! = 2 sin(nπ/2) ζ(n+1)/(2π)^{n+1}`.
    BernoulliZeta,
    /// `B_{2m} = (-1)^{m+1} 2 (2m)! ζ(2m)/(2π)^{2m}`.
    EulerEven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectKind {
    Relative,
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCertificate {
    pub identity: IdentityId,
    pub parameter: u32,
    /// Exact fraction, or a binary64 in shortest round-trip form.
    pub lhs: String,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1e-300)`, or `|lhs - rhs|` when
    /// `defect_kind` is absolute.
    pub rel_defect: f64,
    pub defect_kind: DefectKind,
    pub tolerance: f64,
    pub passed: bool,
}

fn relative_defect(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300)
}

/// Builds a certificate comparing an exact value with a float. When the
/// exact side is zero the comparison is absolute, against [`ZERO_ABS_TOL`].
fn certify(
    identity: IdentityId,
    parameter: u32,
    exact: &ExactRational,
    rhs: f64,
    tol: f64,
    extra_ok: bool,
) -> IdentityCertificate {
    let lhs = exact.to_f64();
    let (rel_defect, defect_kind, tolerance) = if exact.is_zero() {
        ((lhs - rhs).abs(), DefectKind::Absolute, ZERO_ABS_TOL)
    } else {
        (relative_defect(lhs, rhs), DefectKind::Relative, tol)
    };
    IdentityCertificate {
        identity,
        parameter,
        lhs: exact.to_string(),
        rhs,
        rel_defect,
        defect_kind,
        tolerance,
        passed: extra_ok && rel_defect <= tolerance,
    }
}

/// Checks `B_{n+1}/(n+1)! = 2 sin(nπ/2) ζ(n+1)/(2π)^{n+1}`.
pub fn check_bernoulli_zeta(n: u32, tol: f64) -> Result<IdentityCertificate> {
    let rhs = bernoulli_zeta_rhs(n)?;
    let lhs = &bernoulli(n + 1) / &ExactRational::from_integer(factorial(n + 1));
    Ok(certify(IdentityId::BernoulliZeta, n, &lhs, rhs, tol, true))
}

/// `(-1)^{m+1} 2 (2m)! ζ(2m)/(2π)^{2m}` in binary64.
pub fn euler_even_bernoulli(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::UnsupportedOrder {
            n: m,
            min: 1,
            max: u32::MAX,
        });
    }
    let z = zeta_series(2 * m, DEFAULT_ZETA_REL_TOL)?;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let two_pi = 2.0 * PI;
    let scale = (1..=2 * m).fold(2.0, |acc, k| acc * k as f64 / two_pi);
    Ok(sign * scale * z)
}

/// Checks Euler's formula for `B_{2m}`; the sign of the formula must match
/// the exact sign of `B_{2m}` on top of the defect test.
pub fn check_euler(m: u32, tol: f64) -> Result<IdentityCertificate> {
    let rhs = euler_even_bernoulli(m)?;
    let lhs = bernoulli(2 * m);
    let rhs_sign = if rhs > 0.0 {
        1
    } else if rhs < 0.0 {
        -1
    } else {
        0
    };
    let sign_ok = rhs_sign == lhs.signum();
    Ok(certify(IdentityId::EulerEven, m, &lhs, rhs, tol, sign_ok))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub order: u32,
    /// Richardson-extrapolated limit from the two smallest samples.
    pub value: f64,
    /// `(x, 2 I(n, x))` at each of [`LIMIT_SAMPLES`].
    pub samples: Vec<(f64, f64)>,
    /// Same limit from the Bernoulli series evaluated at `x = 0`.
    pub series_value: f64,
}

/// Numerical `lim_{x→0⁺} (d/dx)^n (1/(e^x - 1) - 1/x)` from quadrature.
///
/// The integral is sampled at `x = 0.1, 0.01, 0.001` and the leading
/// `O(x)` correction removed by first-order Richardson on each adjacent
/// pair. The run is rejected if the samples stop contracting or if the two
/// extrapolants disagree by more than `1e-4`.
pub fn zero_limit_numeric(n: u32, policy: &QuadPolicy) -> Result<LimitEstimate> {
    let samples = LIMIT_SAMPLES
        .iter()
        .map(|&x| reg_deriv_quadrature(n, x, policy).map(|r| (x, r.value)))
        .collect::<Result<Vec<_>>>()?;
    let f: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let step_a = (f[1] - f[0]).abs();
    let step_b = (f[2] - f[1]).abs();
    if step_b > step_a + 1e-12 {
        return Err(Error::UnstableLimit(format!(
            "samples {f:?} do not contract toward x = 0"
        )));
    }
    let richardson = |coarse: f64, fine: f64| (10.0 * fine - coarse) / 9.0;
    let first = richardson(f[0], f[1]);
    let value = richardson(f[1], f[2]);
    if (first - value).abs() > 1e-4 {
        return Err(Error::UnstableLimit(format!(
            "extrapolants {first} and {value} disagree"
        )));
    }
    let series_value = reg_deriv_smallx(n, 0.0, DEFAULT_SMALLX_TERMS)?.value;
    Ok(LimitEstimate {
        order: n,
        value,
        samples,
        series_value,
    })
}
