//! Higher derivatives of `1/(e^x - 1)`.
//!
//! The n-th derivative is computed four ways:
//!
//! * [`deriv::deriv_eq1`] and [`deriv::deriv_eq2`], polynomials in
//!   `u = 1/(e^x - 1)` with Stirling-number coefficients;
//! * [`deriv::deriv_series`], the series `(-1)^n Σ k^n e^{-kx}`;
//! * [`quad::deriv_quadrature`], adaptive quadrature of an integral
//!   representation.
//!
//! Exact Stirling, Bernoulli and geometric-polynomial tables live in
//! [`stirling`], [`bernoulli`] and [`exact`]; [`zeta`] checks the identities
//! linking Bernoulli numbers to zeta values; [`verify`] bundles everything
//! into reproducible reports, and [`cli`] is the `expderiv` binary.
//!
//! ```
//! use expderiv::{deriv_eq2, stirling_table};
//!
//! let t = stirling_table(3);
//! let r = deriv_eq2(2, std::f64::consts::LN_2, &t).unwrap();
//! assert!((r.value - 6.0).abs() < 1e-12);
//! ```

// Frozen reference values keep all their digits; `!(a > b)` comparisons
// deliberately route NaN to the error branch.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bernoulli;
pub mod cli;
pub mod deriv;
pub mod error;
pub mod exact;
pub mod quad;
pub mod stirling;
pub mod verify;
pub mod zeta;

pub use bernoulli::{bernoulli, bernoulli_numbers};
pub use deriv::{deriv_eq1, deriv_eq2, deriv_series, EvalResult, Method, SeriesPolicy};
pub use error::{Error, Result};
pub use exact::{ExactInt, ExactRational};
pub use quad::{deriv_quadrature, QuadPolicy, QuadratureResult};
pub use stirling::{geometric_polynomial, stirling_table, GeometricPolynomial, StirlingTriangle};
pub use verify::{run_suite, Suite, VerifyReport};
pub use zeta::IdentityCertificate;

// Book chapters, compiled and run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/stirling.md")]
    mod stirling {}
    #[doc = include_str!("../../../book/src/geometric.md")]
    mod geometric {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
