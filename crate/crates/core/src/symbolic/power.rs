//! Products of rational expressions raised to rational powers.
//!
//! Determinant invariants of the triangular families carry fractional or
//! negative exponents; such an expression is not a rational function, so it
//! is kept as `c * B_1^a_1 * ... * B_m^a_m` and differentiated
//! logarithmically.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::error::SymbolicError;
use super::ratexpr::RationalExpr;
use super::var::{Var, VarKind, VarNames};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    coeff: Rational,
    /// At most one base carries an integer exponent and that exponent is 1.
    /// Fractional powers of constants stay as formal factors.
    factors: Vec<(RationalExpr, Rational)>,
}

impl PowerProduct {
    pub fn constant(c: Rational) -> Self {
        PowerProduct {
            coeff: c,
            factors: Vec::new(),
        }
    }

    pub fn new(coeff: Rational, factors: Vec<(RationalExpr, Rational)>) -> Self {
        let mut p = PowerProduct::constant(coeff);
        for (b, e) in factors {
            p = p.mul(&PowerProduct::power(&b, &e));
        }
        p
    }

    /// `base^e`. Integer exponents are folded into the rational part.
    pub fn power(base: &RationalExpr, e: &Rational) -> Self {
        if e.is_zero() {
            return PowerProduct::constant(Rational::one());
        }
        if let Some(c) = base.constant_value() {
            if c.is_one() {
                return PowerProduct::constant(c);
            }
            if e.is_integer() {
                let k = e.to_integer();
                let k: i32 = k.try_into().expect("exponent fits in i32");
                return PowerProduct::constant(num_traits::pow::Pow::pow(&c, k));
            }
        }
        if e.is_integer() {
            let k: i64 = e.to_integer().try_into().expect("exponent fits in i64");
            let r = base.pow(k).expect("nonzero base for negative power");
            return PowerProduct::from(r);
        }
        PowerProduct {
            coeff: Rational::one(),
            factors: vec![(base.clone(), e.clone())],
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn factors(&self) -> &[(RationalExpr, Rational)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The rational expression this equals, if every exponent is an integer.
    pub fn as_rational(&self) -> Option<RationalExpr> {
        let mut acc = RationalExpr::constant(self.coeff.clone());
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k: i64 = e.to_integer().try_into().ok()?;
            acc = acc.mul(&b.pow(k).ok()?);
        }
        Some(acc)
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let coeff = &self.coeff * &other.coeff;
        if coeff.is_zero() {
            return PowerProduct::constant(coeff);
        }
        let mut rational = RationalExpr::one();
        let mut fractional: Vec<(RationalExpr, Rational)> = Vec::new();
        for (b, e) in self.factors.iter().chain(&other.factors) {
            if e.is_one() {
                rational = rational.mul(b);
                continue;
            }
            match fractional.iter_mut().find(|(fb, _)| fb == b) {
                Some((_, fe)) => *fe += e,
                None => fractional.push((b.clone(), e.clone())),
            }
        }
        let mut out = PowerProduct::constant(coeff);
        for (b, e) in fractional {
            if e.is_zero() {
                continue;
            }
            if e.is_integer() {
                let k: i64 = e.to_integer().try_into().expect("exponent fits in i64");
                rational = rational.mul(&b.pow(k).expect("nonzero base"));
            } else {
                out.factors.push((b, e));
            }
        }
        if let Some(c) = rational.constant_value() {
            out.coeff *= c;
        } else {
            out.factors.insert(0, (rational, Rational::one()));
        }
        out
    }

    pub fn pow(&self, e: &Rational) -> Result<PowerProduct, SymbolicError> {
        if e.is_zero() {
            return Ok(PowerProduct::constant(Rational::one()));
        }
        if self.coeff.is_zero() {
            if e.is_negative() {
                return Err(SymbolicError::DivisionByZero);
            }
            return Ok(self.clone());
        }
        let mut out = PowerProduct::power(&RationalExpr::constant(self.coeff.clone()), e);
        for (b, be) in &self.factors {
            out = out.mul(&PowerProduct::power(b, &(be * e)));
        }
        Ok(out)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.factors.iter().flat_map(|(b, _)| b.vars()).collect()
    }

    pub fn contains_kind(&self, kind: VarKind) -> bool {
        self.factors.iter().any(|(b, _)| b.contains_kind(kind))
    }

    pub fn is_parameter_free(&self) -> bool {
        self.factors.iter().all(|(b, _)| b.is_parameter_free())
    }

    /// `(d/dv self) / self = sum_m a_m * (d B_m / dv) / B_m`.
    pub fn log_partial(&self, v: Var) -> RationalExpr {
        let mut acc = RationalExpr::zero();
        for (b, e) in &self.factors {
            let d = b.partial(v);
            if d.is_zero() {
                continue;
            }
            let term = d.div(b).expect("base is nonzero").scale(e);
            acc = acc.add(&term);
        }
        acc
    }

    pub fn eval_f64(&self, point: &std::collections::HashMap<Var, f64>) -> Option<f64> {
        let c = num_traits::ToPrimitive::to_f64(&self.coeff)?;
        self.factors.iter().try_fold(c, |acc, (b, e)| {
            let e = num_traits::ToPrimitive::to_f64(e)?;
            Some(acc * b.eval_f64(point)?.powf(e))
        })
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> PowerDisplay<'a> {
        PowerDisplay { p: self, names }
    }
}

impl From<RationalExpr> for PowerProduct {
    fn from(r: RationalExpr) -> Self {
        if let Some(c) = r.constant_value() {
            return PowerProduct::constant(c);
        }
        PowerProduct {
            coeff: Rational::one(),
            factors: vec![(r, Rational::one())],
        }
    }
}

/// A printed factor can stand in a product without parentheses.
fn is_atomic(s: &str) -> bool {
    !s.starts_with('-')
        && s
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'*' || b == b'^')
}

pub struct PowerDisplay<'a> {
    p: &'a PowerProduct,
    names: &'a VarNames,
}

impl fmt::Display for PowerDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let PowerProduct { coeff, factors } = self.p;
        if factors.is_empty() {
            return write!(f, "{coeff}");
        }
        if let [(b, e)] = factors.as_slice() {
            if e.is_one() {
                let r = b.scale(coeff);
                return write!(f, "{}", r.display(self.names));
            }
        }
        let mut first = true;
        if !coeff.is_one() {
            if (-coeff).is_one() {
                write!(f, "-")?;
            } else if coeff.is_integer() {
                write!(f, "{coeff}")?;
                first = false;
            } else {
                write!(f, "({coeff})")?;
                first = false;
            }
        }
        for (b, e) in factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let s = b.display(self.names).to_string();
            if e.is_one() && is_atomic(&s) {
                write!(f, "{s}")?;
            } else {
                write!(f, "({s})")?;
            }
            if !e.is_one() {
                if e.is_integer() && e.is_positive() {
                    write!(f, "^{e}")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::plain();
        write!(f, "{}", self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn x(i: u32) -> RationalExpr {
        RationalExpr::var(Var::x(i))
    }

    #[test]
    fn integer_exponents_collapse_to_rational() {
        let p = PowerProduct::power(&x(1), &rat(2, 1)).mul(&PowerProduct::power(&x(1), &rat(-1, 1)));
        assert_eq!(p.as_rational().unwrap(), x(1));
    }

    #[test]
    fn half_powers_merge() {
        let b = &x(1) + &x(2);
        let h = PowerProduct::power(&b, &rat(1, 2));
        let p = h.mul(&h);
        assert_eq!(p.as_rational().unwrap(), b);
    }

    #[test]
    fn log_partial_of_square_root() {
        let p = PowerProduct::power(&x(1), &rat(1, 2));
        assert_eq!(p.log_partial(Var::x(1)), (&RationalExpr::constant(rat(1, 2))) / &x(1));
    }

    #[test]
    fn printing() {
        let b = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
        let p = PowerProduct::from(x(5)).mul(&PowerProduct::power(&b, &rat(-1, 2)));
        assert_eq!(p.to_string(), "x5*(x1*x4 - x2*x3)^(-1/2)");
        assert_eq!(PowerProduct::from(x(1).scale(&rat(3, 1))).to_string(), "3*x1");
    }
}
