//! Text syntax for expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" ("-")? power)?
//! atom   := integer | name | "(" expr ")"
//! ```
//!
//! Exponents must evaluate to rational constants. Non-integer exponents are
//! only accepted by [`parse_power_product`].

use std::fmt;

use num_traits::{One, Zero};

use super::power::PowerProduct;
use super::ratexpr::RationalExpr;
use super::var::VarNames;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    /// The input with a caret under the offending position.
    pub fn caret(&self, input: &str) -> String {
        format!("{input}\n{}^", " ".repeat(self.offset))
    }
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        offset,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Name(String),
    Op(char),
    End,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = input[start..i].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Name(input[start..i].to_string()), start));
        } else if b"+-*/^()".contains(&b) {
            out.push((Tok::Op(b as char), i));
            i += 1;
        } else {
            let c = input[i..].chars().next().unwrap_or('?');
            return err(i, format!("unexpected character '{c}'"));
        }
    }
    out.push((Tok::End, input.len()));
    Ok(out)
}

/// Either a rational expression or, once a fractional power appears, a
/// power product.
#[derive(Clone, Debug)]
enum Value {
    Rat(RationalExpr),
    Pow(PowerProduct),
}

impl Value {
    fn into_power(self) -> PowerProduct {
        match self {
            Value::Rat(r) => PowerProduct::from(r),
            Value::Pow(p) => p,
        }
    }

    fn normalize(p: PowerProduct) -> Value {
        match p.as_rational() {
            Some(r) => Value::Rat(r),
            None => Value::Pow(p),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    names: &'a VarNames,
    allow_fractional: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let at = self.offset();
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            acc = match (acc, rhs) {
                (Value::Rat(a), Value::Rat(b)) => {
                    Value::Rat(if sign > 0 { a.add(&b) } else { a.sub(&b) })
                }
                _ => return err(at, "sums involving fractional powers are not supported"),
            };
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            let divide = if self.eat('*') {
                false
            } else if self.eat('/') {
                true
            } else {
                return Ok(acc);
            };
            let rhs = self.unary()?;
            acc = match (acc, rhs, divide) {
                (Value::Rat(a), Value::Rat(b), false) => Value::Rat(a.mul(&b)),
                (Value::Rat(a), Value::Rat(b), true) => match a.div(&b) {
                    Ok(r) => Value::Rat(r),
                    Err(_) => return err(at, "division by zero"),
                },
                (a, b, false) => Value::normalize(a.into_power().mul(&b.into_power())),
                (a, b, true) => {
                    let b = b.into_power();
                    if b.is_zero() {
                        return err(at, "division by zero");
                    }
                    let inv = b.pow(&-Rational::one()).expect("nonzero");
                    Value::normalize(a.into_power().mul(&inv))
                }
            };
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Value::Rat(r) => Value::Rat(r.neg()),
                Value::Pow(p) => Value::Pow(PowerProduct::constant(-Rational::one()).mul(&p)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let negative = self.eat('-');
        let exp = match self.power()? {
            Value::Rat(r) => r.constant_value(),
            Value::Pow(_) => None,
        };
        let Some(mut e) = exp else {
            return err(at, "exponent must be a rational constant");
        };
        if negative {
            e = -e;
        }
        if e.is_integer() {
            let k: i64 = match e.to_integer().try_into() {
                Ok(k) => k,
                Err(_) => return err(at, "exponent too large"),
            };
            return match base {
                Value::Rat(r) => match r.pow(k) {
                    Ok(r) => Ok(Value::Rat(r)),
                    Err(_) => err(at, "negative power of zero"),
                },
                Value::Pow(p) => match p.pow(&e) {
                    Ok(p) => Ok(Value::normalize(p)),
                    Err(_) => err(at, "negative power of zero"),
                },
            };
        }
        if !self.allow_fractional {
            return err(at, "exponent must be an integer");
        }
        let p = base.into_power();
        if p.is_zero() && e < Rational::zero() {
            return err(at, "negative power of zero");
        }
        Ok(Value::normalize(p.pow(&e).expect("nonzero base")))
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Value::Rat(RationalExpr::constant(Rational::from_integer(n))))
            }
            Tok::Name(name) => {
                self.pos += 1;
                match self.names.resolve(&name) {
                    Some(v) => Ok(Value::Rat(RationalExpr::var(v))),
                    None => err(at, format!("unknown variable '{name}'")),
                }
            }
            Tok::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return err(self.offset(), "expected ')'");
                }
                Ok(inner)
            }
            Tok::Op(c) => err(at, format!("unexpected '{c}'")),
            Tok::End => err(at, "unexpected end of input"),
        }
    }
}

fn run(input: &str, names: &VarNames, allow_fractional: bool) -> Result<Value, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names,
        allow_fractional,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(v)
}

/// Parses a rational expression.
pub fn parse_expr(input: &str, names: &VarNames) -> Result<RationalExpr, ParseError> {
    match run(input, names, false)? {
        Value::Rat(r) => Ok(r),
        Value::Pow(_) => err(0, "expression is not rational"),
    }
}

/// Parses an expression that may contain rational powers.
pub fn parse_power_product(input: &str, names: &VarNames) -> Result<PowerProduct, ParseError> {
    Ok(run(input, names, true)?.into_power())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{rat, Var};

    fn p(s: &str) -> RationalExpr {
        parse_expr(s, &VarNames::plain()).unwrap()
    }

    fn x(i: u32) -> RationalExpr {
        RationalExpr::var(Var::x(i))
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x1^2"), x(1).pow(2).unwrap().neg());
        assert_eq!(p("x1 + x2*x3"), &x(1) + &(&x(2) * &x(3)));
        assert_eq!(p("x1 - x2 - x3"), &(&x(1) - &x(2)) - &x(3));
        assert_eq!(p("x1/x2/x3"), &(&x(1) / &x(2)) / &x(3));
        assert_eq!(p("2^3^2"), RationalExpr::from_int(512));
        assert_eq!(p("x1^-1"), x(1).pow(-1).unwrap());
        assert_eq!(p("x1^(-2)"), x(1).pow(-2).unwrap());
    }

    #[test]
    fn determinant_invariant() {
        let e = p("x1*x4 - x2*x3");
        assert_eq!(e, &(&x(1) * &x(4)) - &(&x(2) * &x(3)));
        assert_eq!(e.to_string(), "x1*x4 - x2*x3");
    }

    #[test]
    fn unclosed_parenthesis_reports_offset() {
        let e = parse_expr("x1*(x1", &VarNames::plain()).unwrap_err();
        assert_eq!(e.offset, 6);
    }

    #[test]
    fn errors() {
        let names = VarNames::plain();
        assert_eq!(parse_expr("x1 / 0", &names).unwrap_err().offset, 3);
        assert_eq!(parse_expr("x1 + y", &names).unwrap_err().offset, 5);
        assert_eq!(parse_expr("x1^(1/2)", &names).unwrap_err().offset, 3);
        assert_eq!(parse_expr("x1 x2", &names).unwrap_err().offset, 3);
        assert_eq!(parse_expr("x1 $", &names).unwrap_err().offset, 3);
        assert!(parse_expr("", &names).is_err());
    }

    #[test]
    fn custom_coordinate_names() {
        let names = VarNames::new(vec!["x12".into(), "x13".into(), "x23".into()]);
        let e = parse_expr("x13*x12", &names).unwrap();
        assert_eq!(e, &x(1) * &x(2));
        assert_eq!(e.display(&names).to_string(), "x12*x13");
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "x1*x4 - x2*x3",
            "(x1^2*x4 - x2*x3)/x1",
            "x1/2",
            "x1/(x2*x3)",
            "-3/x2",
            "x1*v4^3",
            "(x1*t3 - x2)/(v4^2 + 1)",
        ] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn fractional_powers() {
        let names = VarNames::plain();
        let pp = parse_power_product("x5*(x1*x4 - x2*x3)^(-1/2)", &names).unwrap();
        assert_eq!(pp.to_string(), "x5*(x1*x4 - x2*x3)^(-1/2)");
        assert_eq!(pp.factors()[1].1, rat(-1, 2));
        let sq = parse_power_product("x1^(1/2)*x1^(1/2)", &names).unwrap();
        assert_eq!(sq.as_rational().unwrap(), x(1));
    }
}
