//! Semi-infinite quadrature for the integral representation
//!
//! ```text
//! Σ_{k>=1} k^n e^{-kx} = n!/x^{n+1} + 2 (-1)^n I(n, x),
//! I(n, x) = ∫_0^∞ t^n/(e^{2πt} - 1) · sin(xt + nπ/2) dt,
//! ```
//!
//! and for `ζ(s) = Γ(s)^{-1} ∫_0^∞ t^{s-1}/(e^t - 1) dt`.
//!
//! Both integrands decay exponentially, so the half line is cut at a point
//! `T` where an explicit tail bound falls below half the tolerance and
//! `[0, T]` is handled by globally adaptive Gauss–Kronrod (7/15) panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::deriv::{inv_expm1, reg_deriv_smallx, EvalResult, Method, DEFAULT_SMALLX_TERMS, MAX_FLOAT_ORDER};
use crate::error::{Error, Result};
use crate::exact::factorial_f64;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadPolicy {
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl QuadPolicy {
    pub fn new(abs_tol: f64, max_panels: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(Error::InvalidPolicy("abs_tol must be positive"));
        }
        if max_panels == 0 {
            return Err(Error::InvalidPolicy("max_panels must be at least 1"));
        }
        Ok(QuadPolicy {
            abs_tol,
            max_panels,
        })
    }
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy {
            abs_tol: 1e-13,
            max_panels: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Panel-rule error + analytic tail bound past `truncation_point` +
    /// a rounding allowance.
    pub abs_err_estimate: f64,
    pub truncation_point: f64,
    pub n_evals: usize,
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = (fc * WGK[7]).abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_value += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    }
}

struct Adaptive {
    value: f64,
    rule_err: f64,
    abs_value: f64,
    n_evals: usize,
}

/// Globally adaptive GK15 over `[a, b]`, starting from equal panels no wider
/// than `max_width`. Panels are bisected worst-first until the summed
/// embedded estimate is below `tol`. The final sum runs left to right.
fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    max_width: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Adaptive> {
    let initial = (((b - a) / max_width).ceil() as usize).max(1);
    let width = (b - a) / initial as f64;
    let mut heap = BinaryHeap::with_capacity(initial.max(max_panels) + 1);
    let mut n_evals = 0;
    for i in 0..initial {
        let lo = a + width * i as f64;
        let hi = if i + 1 == initial { b } else { lo + width };
        heap.push(gauss_kronrod_15(f, lo, hi));
        n_evals += 15;
    }
    let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
    let finish = |heap: BinaryHeap<Panel>, n_evals: usize| {
        let mut panels = heap.into_vec();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        Adaptive {
            value: panels.iter().map(|p| p.value).sum(),
            rule_err: panels.iter().map(|p| p.err).sum(),
            abs_value: panels.iter().map(|p| p.abs_value).sum(),
            n_evals,
        }
    };
    while total_err > tol {
        let exhausted = heap.len() >= max_panels;
        let worst = *heap.peek().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if exhausted || !(worst.a < mid && mid < worst.b) {
            let best = finish(heap, n_evals);
            return Err(Error::ConvergenceFailure {
                best: best.value,
                err_estimate: best.rule_err,
                panels: max_panels,
            });
        }
        heap.pop();
        let left = gauss_kronrod_15(f, worst.a, mid);
        let right = gauss_kronrod_15(f, mid, worst.b);
        n_evals += 30;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        // incremental updates drift; resync once in a while
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    Ok(finish(heap, n_evals))
}

/// `∫_T^∞ t^m e^{-a t} dt = e^{-aT} Σ_{j=0}^{m} m!/(m-j)! T^{m-j} / a^{j+1}`.
fn gamma_tail(m: u32, a: f64, t: f64) -> f64 {
    let mut term = t.powi(m as i32) / a;
    let mut sum = term;
    for j in 1..=m {
        term *= (m - j + 1) as f64 / (t * a);
        sum += term;
    }
    (-a * t).exp() * sum
}

/// Bound on `∫_T^∞ t^n/(e^{2πt} - 1) dt`.
pub fn oscillatory_tail_bound(n: u32, t: f64) -> f64 {
    gamma_tail(n, TWO_PI, t) / -(-TWO_PI * t).exp_m1()
}

/// Smallest cut point (from the starting guess
/// `max(1, (n ln max(n,2) + ln(1/tol) + 1)/(2π))`, grown by 5% steps) whose
/// tail bound is at most `tol / 2`.
pub fn truncation_point(n: u32, tol: f64) -> f64 {
    let nf = n as f64;
    let mut t = ((nf * nf.max(2.0).ln() + (1.0 / tol).ln() + 1.0) / TWO_PI).max(1.0);
    while oscillatory_tail_bound(n, t) > 0.5 * tol {
        t *= 1.05;
    }
    t
}

/// `sin(xt + nπ/2)` with the quarter-turn picked exactly from `n mod 4`.
fn shifted_sine(n: u32, xt: f64) -> f64 {
    match n % 4 {
        0 => xt.sin(),
        1 => xt.cos(),
        2 => -xt.sin(),
        _ => -xt.cos(),
    }
}

/// `t^n / (e^{2πt} - 1)` for `t > 0`.
fn bose_weight(n: u32, t: f64) -> f64 {
    if t <= 1.0 {
        t.powi(n as i32) / (TWO_PI * t).exp_m1()
    } else {
        (n as f64 * t.ln() - TWO_PI * t).exp() / -(-TWO_PI * t).exp_m1()
    }
}

fn oscillatory_integrand(n: u32, x: f64, t: f64) -> f64 {
    if t == 0.0 {
        // t^n/(e^{2πt}-1) ~ t^{n-1}/(2π)
        return match n {
            0 => x / TWO_PI,
            1 => 1.0 / TWO_PI,
            _ => 0.0,
        };
    }
    bose_weight(n, t) * shifted_sine(n, x * t)
}

/// `I(n, x) = ∫_0^∞ t^n/(e^{2πt} - 1) · sin(xt + nπ/2) dt` for `x > 0`.
///
/// Initial panels are at most `min(1, 2π/(8x))` wide so each rule sees at
/// most an eighth of a sine period.
pub fn damped_sine_integral(n: u32, x: f64, policy: &QuadPolicy) -> Result<QuadratureResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            value: x,
            requirement: "x > 0",
        });
    }
    let t_cut = truncation_point(n, policy.abs_tol);
    let tail = oscillatory_tail_bound(n, t_cut);
    let max_width = (TWO_PI / (8.0 * x)).min(1.0);
    let f = |t: f64| oscillatory_integrand(n, x, t);
    let r = integrate_adaptive(
        &f,
        0.0,
        t_cut,
        max_width,
        0.5 * policy.abs_tol,
        policy.max_panels,
    )?;
    Ok(QuadratureResult {
        value: r.value,
        abs_err_estimate: r.rule_err + tail + 16.0 * f64::EPSILON * r.abs_value,
        truncation_point: t_cut,
        n_evals: r.n_evals,
    })
}

fn check_quadrature_order(n: u32) -> Result<()> {
    if n == 0 || n > MAX_FLOAT_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            min: 1,
            max: MAX_FLOAT_ORDER,
        });
    }
    Ok(())
}

/// `n!/x^{n+1}`, built as a running product so that it overflows only when
/// the result does.
fn pole_magnitude(n: u32, x: f64) -> f64 {
    (1..=n).fold(1.0 / x, |acc, k| acc * k as f64 / x)
}

/// `(d/dx)^n 1/(e^x - 1) = (-1)^n n!/x^{n+1} + 2 I(n, x)` for `n >= 1`, `x > 0`.
pub fn deriv_quadrature(n: u32, x: f64, policy: &QuadPolicy) -> Result<EvalResult> {
    check_quadrature_order(n)?;
    let i = damped_sine_integral(n, x, policy)?;
    let pole = pole_magnitude(n, x);
    if !pole.is_finite() {
        return Err(Error::Overflow { n });
    }
    let signed_pole = if n.is_multiple_of(2) { pole } else { -pole };
    Ok(EvalResult {
        order: n,
        point: x,
        value: signed_pole + 2.0 * i.value,
        method: Method::Quadrature,
        err_estimate: 2.0 * i.abs_err_estimate + 2.0 * (n as f64 + 2.0) * f64::EPSILON * pole,
    })
}

/// `(d/dx)^n (1/(e^x - 1) - 1/x) = 2 I(n, x)`.
pub fn reg_deriv_quadrature(n: u32, x: f64, policy: &QuadPolicy) -> Result<EvalResult> {
    check_quadrature_order(n)?;
    let i = damped_sine_integral(n, x, policy)?;
    Ok(EvalResult {
        order: n,
        point: x,
        value: 2.0 * i.value,
        method: Method::Quadrature,
        err_estimate: 2.0 * i.abs_err_estimate,
    })
}

/// `¼ coth(x/2) - 1/(2x)`, written as `¼ + ½ (1/(e^x - 1) - 1/x)` and using
/// the Bernoulli series for the bracket when `|x| < 1`.
pub fn coth_identity_rhs(x: f64) -> f64 {
    let g = if x.abs() < 1.0 {
        reg_deriv_smallx(0, x, DEFAULT_SMALLX_TERMS)
            .expect("|x| < 1 is inside the series radius")
            .value
    } else {
        inv_expm1(x) - 1.0 / x
    };
    0.25 + 0.5 * g
}

/// `|∫_0^∞ sin(xt)/(e^{2πt} - 1) dt - (¼ coth(x/2) - 1/(2x))|`.
pub fn fourier_sine_coth_check(x: f64, policy: &QuadPolicy) -> Result<f64> {
    let q = damped_sine_integral(0, x, policy)?;
    Ok((q.value - coth_identity_rhs(x)).abs())
}

/// `Γ(s)` for `s > 0`: `(s-1)!` at integers, the `Γ(1/2) = √π` recursion at
/// half-integers, Lanczos otherwise.
pub fn gamma(s: f64) -> f64 {
    if s == s.floor() && (1.0..=171.0).contains(&s) {
        return factorial_f64(s as u32 - 1);
    }
    let twice = 2.0 * s;
    if twice == twice.floor() && s > 0.0 && s < 171.0 {
        let mut g = PI.sqrt();
        let mut a = 0.5;
        while a < s {
            g *= a;
            a += 1.0;
        }
        return g;
    }
    statrs::function::gamma::gamma(s)
}

/// `ζ(s)` from `Γ(s)^{-1} ∫_0^∞ t^{s-1}/(e^t - 1) dt`, `s > 1`.
///
/// `policy.abs_tol` applies to the returned `ζ(s)`. For `1 < s < 2` the
/// integrable singularity on `[0, 1]` is removed with `t = v^{1/(s-1)}`.
pub fn zeta_integral(s: f64, policy: &QuadPolicy) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::DivergentZeta { s });
    }
    let gamma_s = gamma(s);
    let tol = policy.abs_tol * gamma_s;
    // t^{s-1} <= t^m on [1, ∞)
    let m = (s - 1.0).ceil() as u32;
    let tail = |t: f64| gamma_tail(m, 1.0, t) / -(-t).exp_m1();
    let mut t_cut = (s + (1.0 / policy.abs_tol).ln()).max(2.0);
    while tail(t_cut) > 0.25 * tol {
        t_cut *= 1.05;
    }
    let bose = |t: f64| t / t.exp_m1();
    let body = |t: f64| {
        if t == 0.0 {
            return if s == 2.0 { 1.0 } else { 0.0 };
        }
        if t <= 1.0 {
            t.powf(s - 2.0) * bose(t)
        } else {
            ((s - 1.0) * t.ln() - t).exp() / -(-t).exp_m1()
        }
    };
    let value = if s < 2.0 {
        let p = 1.0 / (s - 1.0);
        let head_f = |v: f64| if v == 0.0 { 1.0 } else { bose(v.powf(p)) };
        let head = integrate_adaptive(&head_f, 0.0, 1.0, 0.25, 0.125 * tol * (s - 1.0), policy.max_panels)?;
        let rest = integrate_adaptive(&body, 1.0, t_cut, 1.0, 0.125 * tol, policy.max_panels)?;
        head.value * p + rest.value
    } else {
        integrate_adaptive(&body, 0.0, t_cut, 1.0, 0.25 * tol, policy.max_panels)?.value
    };
    Ok(value / gamma_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn gk15_is_exact_for_degree_21_polynomials() {
        let f = |t: f64| t.powi(21) + 3.0 * t.powi(4) - 1.0;
        let p = gauss_kronrod_15(&f, 0.0, 2.0);
        let exact = 2f64.powi(22) / 22.0 + 3.0 * 32.0 / 5.0 - 2.0;
        assert!((p.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn gamma_tail_matches_closed_forms() {
        // m = 0 and m = 1 by hand
        assert!((gamma_tail(0, 2.0, 1.5) - (-3.0f64).exp() / 2.0).abs() < 1e-16);
        let expect = (-3.0f64).exp() * (1.5 / 2.0 + 1.0 / 4.0);
        assert!((gamma_tail(1, 2.0, 1.5) - expect).abs() < 1e-16);
    }

    #[test]
    fn truncation_point_honours_tail_bound() {
        for n in [0, 1, 4, 8, 20] {
            for tol in [1e-6, 1e-10, 1e-14] {
                let t = truncation_point(n, tol);
                assert!(t >= 1.0);
                assert!(oscillatory_tail_bound(n, t) <= 0.5 * tol);
            }
        }
    }

    #[test]
    fn integral_at_n0_is_coth_expression() {
        let p = QuadPolicy::default();
        let r = damped_sine_integral(0, 1.0, &p).unwrap();
        let expect = 0.040988353434663212193;
        assert!((r.value - expect).abs() < 1e-13);
        assert!(r.abs_err_estimate < 1e-12);
        assert!(r.n_evals > 0);
    }

    #[test]
    fn integral_at_ln2_order1() {
        let p = QuadPolicy::default();
        let r = damped_sine_integral(1, LN_2, &p).unwrap();
        let expect = (1.0 / (LN_2 * LN_2) - 2.0) / 2.0;
        assert!((r.value - expect).abs() < 1e-12);
    }

    #[test]
    fn phase_shift_by_pi_flips_sign() {
        // I(2, x) is the integral of -t^2 sin(xt)/(e^{2πt}-1); evaluate that
        // directly with a plain composite rule and compare
        let p = QuadPolicy::default();
        for x in [0.5, 1.0, 3.0] {
            let i2 = damped_sine_integral(2, x, &p).unwrap().value;
            let h = 1e-3;
            let direct: f64 = (0..20_000)
                .map(|k| {
                    let t = (k as f64 + 0.5) * h;
                    -t * t * (x * t).sin() / (TWO_PI * t).exp_m1() * h
                })
                .sum();
            assert!((i2 - direct).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn quadrature_derivatives_at_ln2() {
        let p = QuadPolicy::default();
        let d1 = deriv_quadrature(1, LN_2, &p).unwrap();
        assert!((d1.value + 2.0).abs() < 1e-11, "{}", d1.value);
        let d2 = deriv_quadrature(2, LN_2, &p).unwrap();
        assert!((d2.value - 6.0).abs() < 1e-11);
        let d3 = deriv_quadrature(3, 1.0, &p).unwrap();
        assert!((d3.value + 6.0065127966367601483).abs() < 1e-10);
        assert!((d3.value + 6.0065127966367601483).abs() <= d3.err_estimate);
        assert!(matches!(deriv_quadrature(0, 1.0, &p), Err(Error::UnsupportedOrder { .. })));
        assert!(deriv_quadrature(1, 0.0, &p).is_err());
        assert!(deriv_quadrature(1, -1.0, &p).is_err());
    }

    #[test]
    fn regularized_quadrature_matches_frozen_values() {
        let p = QuadPolicy::default();
        let frozen = [
            (1, 0.1, 0.083291683195273042348),
            (2, 0.1, -0.00083267230474392534909),
            (1, 1.0, 0.079326405792207681055),
            (2, 1.0, -0.007705232875012607074),
        ];
        for (n, x, expect) in frozen {
            let r = reg_deriv_quadrature(n, x, &p).unwrap();
            assert!((r.value - expect).abs() < 1e-12, "n={n} x={x}");
        }
        let near_zero = reg_deriv_quadrature(1, 1e-4, &p).unwrap().value;
        assert!((near_zero - 1.0 / 12.0).abs() < 1e-6);
    }

    #[test]
    fn coth_identity() {
        let p = QuadPolicy::default();
        for x in [0.5, 1.0, 2.0, 7.0] {
            assert!(fourier_sine_coth_check(x, &p).unwrap() < 1e-12, "x={x}");
        }
        let small = coth_identity_rhs(1e-3);
        assert!(small > 0.0 && small < 1e-4);
        assert!((small - 1e-3 / 24.0).abs() < 1e-12);
        // both branches agree at the switch
        let x = 1.0 - 1e-12;
        let direct = 0.25 + 0.5 * (inv_expm1(x) - 1.0 / x);
        assert!((coth_identity_rhs(x) - direct).abs() < 1e-15);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(5.0), 24.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(3.5) - 15.0 / 8.0 * PI.sqrt()).abs() < 1e-14);
        // Γ(1.3) = 0.8974706963062772...
        assert!((gamma(1.3) - 0.897_470_696_306_277_2).abs() < 1e-13);
    }

    #[test]
    fn zeta_integral_values() {
        let p = QuadPolicy::default();
        let z2 = zeta_integral(2.0, &p).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-12);
        let z4 = zeta_integral(4.0, &p).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-12);
        let z20 = zeta_integral(20.0, &p).unwrap();
        assert!((z20 - 1.0000009539620338728).abs() < 1e-10);
        // ζ(1.5) = 2.612375348685488...
        let z15 = zeta_integral(1.5, &p).unwrap();
        assert!((z15 - 2.612_375_348_685_488).abs() < 1e-10);
        assert_eq!(zeta_integral(1.0, &p), Err(Error::DivergentZeta { s: 1.0 }));
    }

    #[test]
    fn panel_budget_exhaustion_reports_best_estimate() {
        let p = QuadPolicy::new(1e-300, 8).unwrap();
        match damped_sine_integral(3, 1.0, &p) {
            Err(Error::ConvergenceFailure { best, .. }) => assert!(best.is_finite()),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }
}
