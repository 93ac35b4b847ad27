//! Exact symbolic arithmetic: rationals, polynomials in coordinates, group
//! parameters and exponential units, rational expressions, and the linear
//! algebra built on them.

mod error;
pub mod gcd;
pub mod linalg;
pub mod matrix;
pub mod parse;
mod poly;
mod power;
mod ratexpr;
pub mod sample;
mod var;

pub use error::SymbolicError;
pub use poly::{Monomial, Poly};
pub use power::PowerProduct;
pub use ratexpr::RationalExpr;
pub use var::{ExpScales, Var, VarKind, VarNames};

/// Arbitrary-precision rational, always stored in lowest terms.
pub type Rational = num_rational::BigRational;

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
