//! Exact algebra of spatially separable exponential-polynomial functions.
//!
//! Scalars are [`ParamPoly`]: polynomials over exact rationals in a declared
//! set of control parameters. A numeric value is the zero-parameter case.
//! [`Exponomial`] carries the `t`-dependence, [`Field`] adds the `e^{−kx}`
//! channels. Every operation returns canonical form, so structural equality
//! is mathematical equality.

mod exponomial;
mod field;
mod param;

pub use exponomial::{ExpTerm, Exponomial};
pub use field::Field;
pub use param::{Monomial, ParamPoly, ParamSpace};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
