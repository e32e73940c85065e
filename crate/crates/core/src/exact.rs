//! Exact integers and rationals.
//!
//! [`ExactInt`] and [`ExactRational`] are thin newtypes over `num-bigint` and
//! `num-rational`. They exist so the rest of the crate speaks one vocabulary
//! for exact values and one decimal-string format for serializing them:
//! integers print as `"-12"`, rationals as reduced `"p/q"` (or `"p"` when the
//! denominator is one).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactInt(BigInt);

impl ExactInt {
    pub fn zero() -> Self {
        ExactInt(BigInt::zero())
    }

    pub fn one() -> Self {
        ExactInt(BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.sign() == Sign::Minus
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Nearest binary64; `±inf` when the magnitude exceeds `f64::MAX`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(if self.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }

    pub fn into_bigint(self) -> BigInt {
        self.0
    }
}

impl From<BigInt> for ExactInt {
    fn from(v: BigInt) -> Self {
        ExactInt(v)
    }
}

macro_rules! exact_int_from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactInt {
            fn from(v: $t) -> Self {
                ExactInt(BigInt::from(v))
            }
        }
    )*};
}
exact_int_from_prim!(i32, i64, u32, u64, usize);

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for ExactInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigInt>()
            .map(ExactInt)
            .map_err(|_| Error::Parse(format!("invalid integer literal {s:?}")))
    }
}

macro_rules! exact_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl $trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                $ty($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

exact_binop!(ExactInt, Add, add);
exact_binop!(ExactInt, Sub, sub);
exact_binop!(ExactInt, Mul, mul);

impl Neg for ExactInt {
    type Output = ExactInt;
    fn neg(self) -> ExactInt {
        ExactInt(-self.0)
    }
}

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// `numer / denom`, reduced. Fails when `denom` is zero.
    pub fn new(numer: ExactInt, denom: ExactInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numer.0, denom.0)))
    }

    pub fn from_integer(v: ExactInt) -> Self {
        ExactRational(BigRational::from_integer(v.0))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// The exact value of a finite binary64 (every finite double is a dyadic
    /// rational). Returns `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(ExactRational)
    }

    pub fn numer(&self) -> ExactInt {
        ExactInt(self.0.numer().clone())
    }

    pub fn denom(&self) -> ExactInt {
        ExactInt(self.0.denom().clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Nearest binary64 (`num-rational` rounds correctly, including for
    /// operands whose numerator and denominator individually overflow).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, exp: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<ExactInt> for ExactRational {
    fn from(v: ExactInt) -> Self {
        ExactRational::from_integer(v)
    }
}

impl From<BigRational> for ExactRational {
    fn from(v: BigRational) -> Self {
        ExactRational(v)
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }
}

exact_binop!(ExactRational, Add, add);
exact_binop!(ExactRational, Sub, sub);
exact_binop!(ExactRational, Mul, mul);
exact_binop!(ExactRational, Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"`; the result is reduced.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            None => Ok(ExactRational::from_integer(s.parse()?)),
            Some((p, q)) => ExactRational::new(p.parse()?, q.parse()?),
        }
    }
}

impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n!` exactly.
pub fn factorial(n: u32) -> ExactInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    ExactInt(acc)
}

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> ExactInt {
    if k > n {
        return ExactInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    // acc = C(n-k+i, i) after step i; each division is exact
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    ExactInt(acc)
}

/// `n!` as binary64, accumulated left to right. Exact for `n <= 22`,
/// `+inf` past 170.
pub fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal(n: usize) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![1u64]];
        for m in 1..=n {
            let prev = &rows[m - 1];
            let mut row = vec![1u64; m + 1];
            for k in 1..m {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), ExactInt::one());
        assert_eq!(factorial(1), ExactInt::one());
        assert_eq!(factorial(5), ExactInt::from(120u32));
        assert_eq!(
            factorial(25).to_string(),
            "15511210043330985984000000"
        );
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let rows = pascal(40);
        for (n, row) in rows.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                assert_eq!(binomial(n as u32, k as u32), ExactInt::from(v), "C({n},{k})");
            }
        }
        assert_eq!(binomial(5, 2), ExactInt::from(10u32));
        assert_eq!(binomial(7, 7), ExactInt::one());
        assert_eq!(binomial(3, 4), ExactInt::zero());
    }

    #[test]
    fn rational_is_reduced_with_positive_denominator() {
        let r = ExactRational::new(ExactInt::from(6), ExactInt::from(-12)).unwrap();
        assert_eq!(r.to_string(), "-1/2");
        assert_eq!(r.denom(), ExactInt::from(2));
        assert_eq!("4/8".parse::<ExactRational>().unwrap().to_string(), "1/2");
        assert_eq!("-10/5".parse::<ExactRational>().unwrap().to_string(), "-2");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn from_f64_is_exact() {
        let r = ExactRational::from_f64(0.1).unwrap();
        assert_eq!(r.to_f64(), 0.1);
        assert_eq!(r.denom().to_string(), "36028797018963968");
        assert!(ExactRational::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn factorial_f64_boundary() {
        assert_eq!(factorial_f64(22), factorial(22).to_f64());
        assert!(factorial_f64(170).is_finite());
        assert!(factorial_f64(171).is_infinite());
    }

    proptest! {
        #[test]
        fn rational_string_round_trip(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000) {
            let r = ExactRational::new(ExactInt::from(p), ExactInt::from(q)).unwrap();
            let back: ExactRational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn binomial_symmetry(n in 0u32..200, k in 0u32..200) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        }
    }
}
