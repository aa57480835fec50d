//! Exact coefficient arithmetic: Laurent polynomials, rational functions and
//! truncated q-series with plethystic exponential and logarithm.
//!
//! All coefficients are arbitrary-precision rationals, so every identity
//! checked downstream is exact; there is no floating point anywhere.

pub mod laurent;
pub mod parse;
pub mod qseries;
pub mod ratfun;

pub use laurent::LaurentPoly;
pub use parse::{expand_in_q, format_qseries, parse_q_expr, parse_ratfun, qseries_from_expr};
pub use qseries::{plethystic_exp, plethystic_log, QSeries};
pub use ratfun::RatFun;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

use num_bigint::BigInt;

/// Integer as a `Rat`.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Fraction `p/q` as a `Rat`. Panics if `q == 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}
