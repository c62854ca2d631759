//! Exact rational coefficients.
//!
//! The coefficient field is fixed to the rationals, backed by
//! arbitrary-precision integers. `num_rational::BigRational` already keeps
//! every value in lowest terms with a positive denominator, which is exactly
//! the canonical form the rest of the crate relies on for structural
//! equality.

use num_bigint::BigInt;

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
