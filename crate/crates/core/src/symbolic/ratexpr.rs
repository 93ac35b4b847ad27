//! Rational expressions: quotients of polynomials kept in a canonical form.
//!
//! Canonical form: numerator and denominator share no polynomial factor, all
//! coefficients are integers with overall gcd 1, and the denominator's
//! leading coefficient is positive. Negative powers of exponential units live
//! in the denominator, so the Laurent structure is carried by the quotient.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::error::SymbolicError;
use super::gcd::gcd;
use super::poly::{coefficient_content, Monomial, Poly};
use super::var::{ExpScales, Var, VarKind, VarNames};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl Default for RationalExpr {
    fn default() -> Self {
        RationalExpr::zero()
    }
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RationalExpr {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::normalize_content(Poly::constant(c), Poly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::normalize_content(p, Poly::one())
    }

    /// Quotient `num / den` reduced to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// `v^e` for any integer `e`; negative powers go to the denominator.
    pub fn var_pow(v: Var, e: i64) -> Self {
        let m = Poly::term(Rational::one(), Monomial::var_pow(v, e.unsigned_abs() as u32));
        if e >= 0 {
            Self::from_poly(m)
        } else {
            RationalExpr {
                num: Poly::one(),
                den: m,
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    /// The expression as a polynomial when the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly> {
        let d = self.den.constant_value()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn contains_kind(&self, kind: VarKind) -> bool {
        self.num.contains_kind(kind) || self.den.contains_kind(kind)
    }

    /// Free of group parameters and exponential units.
    pub fn is_parameter_free(&self) -> bool {
        !self.contains_kind(VarKind::GroupParam) && !self.contains_kind(VarKind::ExpUnit)
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        if den.is_constant() {
            return Self::normalize_content(num, den);
        }
        let g = gcd(&num, &den);
        if g.is_constant() {
            return Self::normalize_content(num, den);
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Self::normalize_content(num, den)
    }

    /// Fixes the constant factor only; callers guarantee coprimality.
    fn normalize_content(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        let c = coefficient_content(num.terms().iter().chain(den.terms()).map(|(_, c)| c));
        let c = if den.leading_coeff().is_negative() { -c } else { c };
        if c.is_one() {
            return RationalExpr { num, den };
        }
        let inv = c.recip();
        RationalExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce_against(self.num.add(&other.num), self.den.clone(), &self.den);
        }
        let g = if self.den.is_constant() || other.den.is_constant() {
            Poly::one()
        } else {
            gcd(&self.den, &other.den)
        };
        if g.is_constant() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Self::normalize_content(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = self.den.mul(&d1);
        Self::reduce_against(num, den, &g)
    }

    /// Reduces `num / den` when any common factor is known to divide `hint`.
    fn reduce_against(num: Poly, den: Poly, hint: &Poly) -> Self {
        if num.is_zero() {
            return RationalExpr::zero();
        }
        if hint.is_constant() {
            return Self::normalize_content(num, den);
        }
        let g = gcd(&num, hint);
        if g.is_constant() {
            return Self::normalize_content(num, den);
        }
        Self::normalize_content(
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        )
    }

    pub fn neg(&self) -> Self {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalExpr::zero();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = other.den.div_exact(&g1).expect("gcd divides");
        let c = other.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Self::normalize_content(a.mul(&c), b.mul(&d))
    }

    pub fn recip(&self) -> Result<Self, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::normalize_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymbolicError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalExpr::zero();
        }
        Self::normalize_content(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self, SymbolicError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        // Powers of coprime polynomials stay coprime.
        Ok(Self::normalize_content(base.num.pow(k), base.den.pow(k)))
    }

    /// Formal partial derivative; units are treated as independent symbols.
    pub fn partial(&self, v: Var) -> Self {
        self.apply_derivation(|p| p.derivative(v))
    }

    /// Derivative with respect to `v`. For a group parameter `t_k` this is
    /// the total derivative, with `v_k = exp(t_k / q_k)` contributing
    /// `(m / q_k) v_k^m` for each power `v_k^m`.
    pub fn differentiate(&self, v: Var, scales: &ExpScales) -> Self {
        self.apply_derivation(|p| p.total_derivative(v, scales))
    }

    fn apply_derivation(&self, d: impl Fn(&Poly) -> Poly) -> Self {
        let dn = d(&self.num);
        if self.den.is_constant() {
            return Self::normalize_content(dn, self.den.clone());
        }
        let dd = d(&self.den);
        if dd.is_zero() {
            return Self::reduce_against(dn, self.den.clone(), &self.den);
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(num, self.den.mul(&self.den))
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalExpr>) -> Result<Self, SymbolicError> {
        for (v, b) in bindings {
            if v.kind == VarKind::ExpUnit && b.is_zero() {
                return Err(SymbolicError::ZeroUnitBinding(*v));
            }
        }
        let (nn, nd) = substitute_poly(&self.num, bindings);
        let (dn, dd) = substitute_poly(&self.den, bindings);
        if dn.is_zero() {
            return Err(SymbolicError::SubstitutionPole);
        }
        Ok(Self::reduce(nn.mul(&dd), nd.mul(&dn)))
    }

    pub fn substitute_one(&self, v: Var, value: &RationalExpr) -> Result<Self, SymbolicError> {
        let mut b = BTreeMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }

    /// Value at a rational point; `None` if a variable is unbound or the
    /// denominator vanishes.
    pub fn eval(&self, point: &HashMap<Var, Rational>) -> Option<Rational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn eval_f64(&self, point: &HashMap<Var, f64>) -> Option<f64> {
        Some(self.num.eval_f64(point)? / self.den.eval_f64(point)?)
    }

    /// Drops the constant factor: numerator made primitive with positive
    /// leading coefficient. Used for invariants, where scalars are irrelevant.
    pub fn without_constant_factor(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        RationalExpr {
            num: self.num.primitive(),
            den: self.den.primitive(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> Displayed<'a> {
        Displayed { expr: self, names }
    }
}

/// `p(bindings)` as `(numerator, denominator)` without any gcd work.
fn substitute_poly(p: &Poly, bindings: &BTreeMap<Var, RationalExpr>) -> (Poly, Poly) {
    let bound: Vec<(Var, &RationalExpr, u32)> = bindings
        .iter()
        .filter_map(|(v, b)| {
            let d = p.degree_in(*v);
            (d > 0).then_some((*v, b, d))
        })
        .collect();
    if bound.is_empty() {
        return (p.clone(), Poly::one());
    }
    // Cached powers p_v^e and q_v^e for e = 0..=deg.
    let powers: Vec<(Vec<Poly>, Vec<Poly>)> = bound
        .iter()
        .map(|(_, b, d)| (power_table(b.numer(), *d), power_table(b.denom(), *d)))
        .collect();
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let mut factor = Poly::one();
        for (i, (v, _, d)) in bound.iter().enumerate() {
            let (e, r) = rest.split_off(*v);
            rest = r;
            let (ps, qs) = &powers[i];
            factor = factor.mul(&ps[e as usize]).mul(&qs[(*d - e) as usize]);
        }
        num = num.add(&factor.mul_term(&rest, c));
    }
    let den = bound
        .iter()
        .enumerate()
        .fold(Poly::one(), |acc, (i, _)| acc.mul(powers[i].1.last().expect("nonempty")));
    (num, den)
}

fn power_table(p: &Poly, d: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(d as usize + 1);
    out.push(Poly::one());
    for e in 1..=d as usize {
        let next = out[e - 1].mul(p);
        out.push(next);
    }
    out
}

pub struct Displayed<'a> {
    expr: &'a RationalExpr,
    names: &'a VarNames,
}

impl fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let RationalExpr { num, den } = self.expr;
        if let Some(d) = den.constant_value() {
            if d.is_one() {
                return write_poly(f, num, self.names);
            }
        }
        if num.len() > 1 {
            write!(f, "(")?;
            write_poly(f, num, self.names)?;
            write!(f, ")")?;
        } else {
            write_poly(f, num, self.names)?;
        }
        write!(f, "/")?;
        let bare = den.len() == 1 && {
            let (m, c) = &den.terms()[0];
            (m.is_one() && c.is_integer()) || (c.is_one() && m.powers().len() == 1)
        };
        if bare {
            write_poly(f, den, self.names)
        } else {
            write!(f, "(")?;
            write_poly(f, den, self.names)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::plain();
        write!(f, "{}", self.display(&names))
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &VarNames) -> fmt::Result {
    for (i, &(v, e)) in m.powers().iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        write!(f, "{}", names.name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, names: &VarNames) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if m.is_one() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write_monomial(f, m, names)?;
        }
    }
    Ok(())
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::add(self, rhs)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::sub(self, rhs)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::mul(self, rhs)
    }
}

/// Panics on division by zero; use [`RationalExpr::div`] to handle it.
impl Div for &RationalExpr {
    type Output = RationalExpr;
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::div(self, rhs).expect("division by zero expression")
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr::neg(self)
    }
}

impl From<Poly> for RationalExpr {
    fn from(p: Poly) -> Self {
        RationalExpr::from_poly(p)
    }
}

impl Zero for RationalExpr {
    fn zero() -> Self {
        RationalExpr::zero()
    }
    fn is_zero(&self) -> bool {
        RationalExpr::is_zero(self)
    }
}

impl Add for RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: RationalExpr) -> RationalExpr {
        RationalExpr::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> RationalExpr {
        RationalExpr::var(Var::x(i))
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = &x(1) / &x(2);
        let b = &x(2) / &x(1);
        assert!((&a * &b).is_one());
    }

    #[test]
    fn additive_inverse_is_zero() {
        assert!((&x(1) + &(-&x(1))).is_zero());
        assert_eq!((&x(1) - &x(1)).to_string(), "0");
    }

    #[test]
    fn difference_of_squares_divides() {
        let num = &(&x(1) * &x(1)) - &(&x(2) * &x(2));
        let q = &num / &(&x(1) - &x(2));
        assert_eq!(q, &x(1) + &x(2));
        // Oracle: expanding the product with the same engine gives back num.
        assert_eq!(&q * &(&x(1) - &x(2)), num);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(x(1).div(&RationalExpr::zero()), Err(SymbolicError::DivisionByZero));
    }

    #[test]
    fn printing_of_quotients() {
        let e = &(&x(1) * &x(4)) - &(&(&x(2) * &x(3)) / &x(1));
        assert_eq!(e.to_string(), "(x1^2*x4 - x2*x3)/x1");
        let half = RationalExpr::constant(Rational::new(1.into(), 2.into()));
        assert_eq!((&half * &x(1)).to_string(), "x1/2");
        assert_eq!((&x(1) / &(&x(2) * &x(3))).to_string(), "x1/(x2*x3)");
        assert_eq!((&RationalExpr::from_int(-3) / &x(2)).to_string(), "-3/x2");
    }

    #[test]
    fn partial_derivatives() {
        let f = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
        assert_eq!(f.partial(Var::x(4)), x(1));
        let g = &(&x(2) * &x(3)) / &x(1);
        let expected = -&(&(&x(2) * &x(3)) / &(&x(1) * &x(1)));
        assert_eq!(g.partial(Var::x(1)), expected);
    }

    #[test]
    fn unit_derivative_uses_scale() {
        let v3 = RationalExpr::var_pow(Var::v(4), 3);
        let d = v3.differentiate(Var::t(4), &ExpScales::default());
        assert_eq!(d, v3.scale(&Rational::from_integer(3.into())));
        // Finite-difference oracle for v = e^t at t = 0.1.
        let f = |t: f64| (3.0 * t).exp();
        let h = 1e-6;
        let numeric = (f(0.1 + h) - f(0.1 - h)) / (2.0 * h);
        let mut pt = HashMap::new();
        pt.insert(Var::v(4), (0.1f64).exp());
        let symbolic = d.eval_f64(&pt).unwrap();
        assert!((numeric - symbolic).abs() < 1e-9 * symbolic.abs().max(1.0) * 10.0);

        let mut scales = ExpScales::default();
        scales.0.insert(4, 2);
        let d2 = v3.differentiate(Var::t(4), &scales);
        assert_eq!(d2, v3.scale(&Rational::new(3.into(), 2.into())));
    }

    #[test]
    fn substitution_examples() {
        let v4 = RationalExpr::var(Var::v(4));
        let f = &v4 * &x(1);
        let r = f.substitute_one(Var::v(4), &(&RationalExpr::one() / &x(1))).unwrap();
        assert!(r.is_one());

        let t3 = RationalExpr::var(Var::t(3));
        let g = &(-&(&t3 * &x(1))) + &x(2);
        let r = g.substitute_one(Var::t(3), &(&x(2) / &x(1))).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn substitution_pole_detected() {
        let f = &RationalExpr::one() / &(&x(1) - &x(2));
        let err = f.substitute_one(Var::x(1), &x(2)).unwrap_err();
        assert_eq!(err, SymbolicError::SubstitutionPole);
        let err = x(1).substitute_one(Var::v(1), &RationalExpr::zero()).unwrap_err();
        assert_eq!(err, SymbolicError::ZeroUnitBinding(Var::v(1)));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = &x(1) - &(&x(2) * &x(2));
        let mut b = BTreeMap::new();
        b.insert(Var::x(1), x(2));
        b.insert(Var::x(2), x(1));
        assert_eq!(f.substitute(&b).unwrap(), &x(2) - &(&x(1) * &x(1)));
    }
}
