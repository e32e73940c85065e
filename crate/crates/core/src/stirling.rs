//! Stirling numbers of the second kind and geometric polynomials.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{factorial, ExactInt, ExactRational};

/// Exact triangle of `S(m, k)` for `0 <= k <= m <= max_order`.
///
/// Built once from the base row `S(0,0) = 1` with
/// `S(m+1, k) = k S(m, k) + S(m, k-1)`; immutable afterwards, so a single
/// table can be shared across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTriangle {
    rows: Vec<Vec<ExactInt>>,
    zero: ExactInt,
}

impl StirlingTriangle {
    pub fn new(max_order: u32) -> Self {
        let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(max_order as usize + 1);
        rows.push(vec![ExactInt::one()]);
        for m in 0..max_order as usize {
            let prev = &rows[m];
            let mut next = Vec::with_capacity(m + 2);
            next.push(ExactInt::zero());
            for k in 1..=m + 1 {
                let stay = if k <= m {
                    &ExactInt::from(k) * &prev[k]
                } else {
                    ExactInt::zero()
                };
                next.push(stay + prev[k - 1].clone());
            }
            rows.push(next);
        }
        StirlingTriangle {
            rows,
            zero: ExactInt::zero(),
        }
    }

    pub fn max_order(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// `S(n, k)`; zero for `k > n`, `None` when `n` is past the table.
    pub fn get(&self, n: u32, k: u32) -> Option<&ExactInt> {
        let row = self.rows.get(n as usize)?;
        Some(row.get(k as usize).unwrap_or(&self.zero))
    }

    /// Row `n`: `[S(n,0), ..., S(n,n)]`.
    pub fn row(&self, n: u32) -> Option<&[ExactInt]> {
        self.rows.get(n as usize).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExactInt]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub(crate) fn check_order(&self, n: u32) -> Result<&[ExactInt]> {
        self.row(n).ok_or(Error::OrderOutOfRange {
            n,
            max: self.max_order(),
        })
    }
}

pub fn stirling_table(max_order: u32) -> StirlingTriangle {
    StirlingTriangle::new(max_order)
}

/// `ω_n(x) = Σ_{k=0}^{n} S(n,k) k! x^k`, stored as its exact coefficients.
///
/// The `k = 0` slot is kept so that `ω_0 = 1` needs no special case; for
/// `n >= 1` it is zero. Values at `x = 1` are the ordered Bell (Fubini)
/// numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricPolynomial {
    order: u32,
    coeffs: Vec<ExactInt>,
}

impl GeometricPolynomial {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[ExactInt] {
        &self.coeffs
    }

    /// Horner evaluation in binary64.
    ///
    /// Coefficients are rounded to binary64 first; past `n ≈ 140` the
    /// leading ones overflow and the result is no longer finite.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &ExactRational) -> ExactRational {
        self.coeffs.iter().rev().fold(ExactRational::zero(), |acc, c| {
            &(&acc * x) + &ExactRational::from_integer(c.clone())
        })
    }

    /// `ω_n(1) = Σ S(n,k) k!`, the n-th ordered Bell number.
    pub fn fubini(&self) -> ExactInt {
        self.coeffs
            .iter()
            .fold(ExactInt::zero(), |acc, c| acc + c.clone())
    }
}

/// Coefficients `S(n,k)·k!` of `ω_n` read off the triangle.
pub fn geometric_polynomial(n: u32, triangle: &StirlingTriangle) -> Result<GeometricPolynomial> {
    let row = triangle.check_order(n)?;
    let coeffs = row
        .iter()
        .enumerate()
        .map(|(k, s)| s * &factorial(k.to_u32().expect("row index fits u32")))
        .collect();
    Ok(GeometricPolynomial { order: n, coeffs })
}

pub fn eval_geometric_polynomial(p: &GeometricPolynomial, x: f64) -> f64 {
    p.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Counts set partitions of {0..n} into exactly k blocks by walking all
    /// restricted growth strings.
    fn brute_force_partitions(n: usize, k: usize) -> u64 {
        fn walk(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
            if pos == n {
                return (blocks == k) as u64;
            }
            // the next element joins an existing block or opens a new one
            let mut total = 0;
            for b in 0..=blocks {
                let opened = if b == blocks { blocks + 1 } else { blocks };
                if opened <= k {
                    total += walk(pos + 1, n, opened, k);
                }
            }
            total
        }
        walk(0, n, 0, k)
    }

    #[test]
    fn base_row_and_diagonal() {
        let t = stirling_table(0);
        assert_eq!(t.row(0).unwrap(), &[ExactInt::one()]);
        let t = stirling_table(20);
        for n in 0..=20 {
            assert_eq!(t.get(n, n).unwrap(), &ExactInt::one());
            if n >= 1 {
                assert!(t.get(n, 0).unwrap().is_zero());
            }
            assert!(t.get(n, n + 3).unwrap().is_zero());
        }
        assert!(t.get(21, 0).is_none());
    }

    #[test]
    fn known_entries() {
        let t = stirling_table(10);
        assert_eq!(t.get(4, 2).unwrap(), &ExactInt::from(7));
        assert_eq!(t.get(3, 2).unwrap(), &ExactInt::from(3));
        assert_eq!(t.get(10, 5).unwrap(), &ExactInt::from(42525));
    }

    #[test]
    fn matches_set_partition_enumeration() {
        let t = stirling_table(10);
        for n in 0..=10u32 {
            for k in 0..=n {
                let expect = brute_force_partitions(n as usize, k as usize);
                assert_eq!(t.get(n, k).unwrap(), &ExactInt::from(expect), "S({n},{k})");
            }
        }
    }

    #[test]
    fn geometric_polynomial_small_orders() {
        let t = stirling_table(5);
        let w0 = geometric_polynomial(0, &t).unwrap();
        assert_eq!(w0.coeffs(), &[ExactInt::one()]);
        let w1 = geometric_polynomial(1, &t).unwrap();
        assert_eq!(w1.coeffs(), &[ExactInt::zero(), ExactInt::one()]);
        let w2 = geometric_polynomial(2, &t).unwrap();
        assert_eq!(
            w2.coeffs(),
            &[ExactInt::zero(), ExactInt::one(), ExactInt::from(2)]
        );
        assert_eq!(eval_geometric_polynomial(&w2, 1.0), 3.0);
        assert_eq!(eval_geometric_polynomial(&w1, -0.5), -0.5);
        for n in 1..=5 {
            assert_eq!(geometric_polynomial(n, &t).unwrap().eval(0.0), 0.0);
        }
        assert_eq!(
            geometric_polynomial(6, &t),
            Err(Error::OrderOutOfRange { n: 6, max: 5 })
        );
    }

    #[test]
    fn fubini_numbers() {
        // ordered Bell numbers, OEIS A000670
        let expected = [1u64, 1, 3, 13, 75, 541, 4683, 47293, 545835, 7087261];
        let t = stirling_table(9);
        for (n, &f) in expected.iter().enumerate() {
            let p = geometric_polynomial(n as u32, &t).unwrap();
            assert_eq!(p.fubini(), ExactInt::from(f));
            assert_eq!(p.eval_exact(&ExactRational::one()), ExactRational::from(f as i64));
            assert_eq!(p.eval(1.0), f as f64);
        }
    }

    #[test]
    fn geometric_polynomial_invariants() {
        let t = stirling_table(40);
        for n in 0..=40 {
            let p = geometric_polynomial(n, &t).unwrap();
            let c = p.coeffs();
            assert_eq!(c.len(), n as usize + 1);
            assert_eq!(c[0], if n == 0 { ExactInt::one() } else { ExactInt::zero() });
            assert_eq!(c[n as usize], factorial(n));
            assert!(c.iter().all(|a| !a.is_negative()));
        }
    }

    proptest! {
        #[test]
        fn recurrence_holds_everywhere(m in 0u32..60, k in 1u32..62) {
            let t = stirling_table(61);
            prop_assume!(k <= m + 1);
            let lhs = t.get(m + 1, k).unwrap().clone();
            let rhs = &ExactInt::from(k) * t.get(m, k).unwrap() + t.get(m, k - 1).unwrap().clone();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
