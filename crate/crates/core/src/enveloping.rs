//! The universal enveloping algebra: noncommutative polynomials in the basis,
//! symmetrization of commutative invariants, and reduction to the ordered
//! (PBW) basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::symbolic::{Poly, Rational, RationalExpr, VarKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopingError {
    #[error("only polynomial invariants can be symmetrized")]
    NotPolynomial,
    #[error("expression involves group parameters or exponential units")]
    NotParameterFree,
}

/// A word `e_{i_1} ... e_{i_r}` (1-based letters). The empty word is the
/// unit. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcWord(pub Vec<usize>);

impl Ord for NcWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NcWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NcWord {
    /// Nondecreasing letters.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NcPolynomial {
    terms: BTreeMap<NcWord, Rational>,
}

impl NcPolynomial {
    pub fn zero() -> Self {
        NcPolynomial::default()
    }

    pub fn scalar(c: Rational) -> Self {
        NcPolynomial::term(Vec::new(), c)
    }

    pub fn generator(i: usize) -> Self {
        NcPolynomial::term(vec![i], Rational::one())
    }

    pub fn term(letters: Vec<usize>, c: Rational) -> Self {
        let mut p = NcPolynomial::zero();
        p.add_term(NcWord(letters), c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NcWord, &Rational)> {
        self.terms.iter()
    }

    pub fn scalar_part(&self) -> Rational {
        self.terms.get(&NcWord(Vec::new())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: NcWord, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = NcPolynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = NcPolynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.0.clone();
                w.extend_from_slice(&b.0);
                out.add_term(NcWord(w), ca * cb);
            }
        }
        out
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(NcWord::is_ordered)
    }

    pub fn display<'a>(&'a self, basis: &'a [String]) -> NcDisplay<'a> {
        NcDisplay { p: self, basis }
    }
}

/// Distinct arrangements of a multiset given in sorted order.
fn multiset_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    // Lexicographic successor until the last arrangement.
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// `Sym`: each monomial `prod x_i^a_i` of degree `r` becomes the average of
/// all `r!` orderings of its letters. Distinct orderings are weighted by
/// `prod a_i! / r!`.
pub fn symmetrize(f: &RationalExpr) -> Result<NcPolynomial, EnvelopingError> {
    if !f.is_parameter_free() {
        return Err(EnvelopingError::NotParameterFree);
    }
    let p = f.as_poly().ok_or(EnvelopingError::NotPolynomial)?;
    Ok(symmetrize_poly(&p))
}

pub fn symmetrize_poly(p: &Poly) -> NcPolynomial {
    let mut out = NcPolynomial::zero();
    for (m, c) in p.terms() {
        let mut letters = Vec::new();
        let mut weight = Rational::one();
        for &(v, e) in m.powers() {
            debug_assert_eq!(v.kind, VarKind::Coordinate);
            letters.extend(std::iter::repeat(v.index as usize).take(e as usize));
            weight *= factorial(e);
        }
        letters.sort_unstable();
        let coeff = c * weight / factorial(letters.len() as u32);
        for w in multiset_permutations(&letters) {
            out.add_term(NcWord(w), coeff.clone());
        }
    }
    out
}

/// Rewrites into nondecreasing words with `e_j e_i = e_i e_j + [e_j, e_i]`,
/// always at the leftmost inversion.
pub fn pbw_reduce(p: &NcPolynomial, alg: &LieAlgebra) -> NcPolynomial {
    let mut done = NcPolynomial::zero();
    let mut pending = p.clone();
    while !pending.is_zero() {
        let mut next = NcPolynomial::zero();
        for (w, c) in &pending.terms {
            let Some(i) = (0..w.0.len().saturating_sub(1)).find(|&i| w.0[i] > w.0[i + 1]) else {
                done.add_term(w.clone(), c.clone());
                continue;
            };
            let (a, b) = (w.0[i], w.0[i + 1]);
            let mut swapped = w.0.clone();
            swapped.swap(i, i + 1);
            next.add_term(NcWord(swapped), c.clone());
            for (k, ck) in alg.bracket(a, b) {
                let mut shorter = w.0[..i].to_vec();
                shorter.push(k);
                shorter.extend_from_slice(&w.0[i + 2..]);
                next.add_term(NcWord(shorter), c * &ck);
            }
        }
        pending = next;
    }
    done
}

/// `pbw_reduce(p e_i - e_i p)` for each generator.
pub fn commutes_with_generators(p: &NcPolynomial, alg: &LieAlgebra) -> Vec<NcPolynomial> {
    (1..=alg.dim())
        .map(|i| {
            let e = NcPolynomial::generator(i);
            pbw_reduce(&p.mul(&e).sub(&e.mul(p)), alg)
        })
        .collect()
}

pub struct NcDisplay<'a> {
    p: &'a NcPolynomial,
    basis: &'a [String],
}

impl fmt::Display for NcDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.p.terms.iter().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.0.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let letters: Vec<&str> = w.0.iter().map(|&i| self.basis[i - 1].as_str()).collect();
            write!(f, "{}", letters.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_basis;
    use crate::symbolic::parse::parse_expr;
    use crate::symbolic::{int, rat, VarNames};

    fn g48_bm1() -> LieAlgebra {
        LieAlgebra::new(
            default_basis(4),
            [(2, 3, vec![(1, int(1))]), (2, 4, vec![(2, int(1))]), (3, 4, vec![(3, int(-1))])],
        )
        .unwrap()
    }

    fn sym(s: &str) -> NcPolynomial {
        symmetrize(&parse_expr(s, &VarNames::plain()).unwrap()).unwrap()
    }

    fn show(p: &NcPolynomial) -> String {
        p.display(&default_basis(4)).to_string()
    }

    #[test]
    fn symmetrization_examples() {
        assert_eq!(sym("x1"), NcPolynomial::generator(1));
        assert_eq!(show(&sym("x2*x3")), "1/2*e2*e3 + 1/2*e3*e2");
        assert_eq!(show(&sym("x1^2")), "e1*e1");
        assert_eq!(show(&sym("x1^2*x2")), "1/3*e1*e1*e2 + 1/3*e1*e2*e1 + 1/3*e2*e1*e1");
        let r = symmetrize(&parse_expr("x1/x2", &VarNames::plain()).unwrap());
        assert_eq!(r, Err(EnvelopingError::NotPolynomial));
    }

    #[test]
    fn reorders_with_bracket_correction() {
        let a = g48_bm1();
        let r = pbw_reduce(&NcPolynomial::term(vec![3, 2], int(1)), &a);
        assert_eq!(show(&r), "-e1 + e2*e3");
        let ordered = NcPolynomial::term(vec![1, 2, 4], int(1));
        assert_eq!(pbw_reduce(&ordered, &a), ordered);
    }

    #[test]
    fn symmetrized_invariant_matches_expected_form() {
        let a = g48_bm1();
        let s = pbw_reduce(&sym("x1*x4 - x2*x3"), &a);
        let by_hand = NcPolynomial::term(vec![1, 4], int(1))
            .sub(&NcPolynomial::term(vec![2, 3], rat(1, 2)))
            .sub(&NcPolynomial::term(vec![3, 2], rat(1, 2)));
        assert_eq!(s, pbw_reduce(&by_hand, &a));
        assert!(commutes_with_generators(&sym("x1*x4 - x2*x3"), &a).iter().all(NcPolynomial::is_zero));
        assert!(commutes_with_generators(&sym("x1"), &a).iter().all(NcPolynomial::is_zero));
    }

    #[test]
    fn heisenberg_generator_is_not_central() {
        let h = LieAlgebra::new(default_basis(3), [(2, 3, vec![(1, int(1))])]).unwrap();
        let r = commutes_with_generators(&NcPolynomial::generator(2), &h);
        assert!(r[0].is_zero() && r[1].is_zero());
        // e2 e3 - e3 e2 = e1
        assert_eq!(r[2], NcPolynomial::generator(1));
    }
}
