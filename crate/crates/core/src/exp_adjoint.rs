//! One-parameter exponentials `exp(t ad_e)`, their ordered product `B(t)`
//! and the lifted invariants `I = x . B(t)`.
//!
//! A generator whose adjoint matrix is nilpotent contributes polynomials in
//! `t_k`. Otherwise the matrix must be triangular up to a simultaneous
//! permutation of rows and columns; its eigenvalues `lambda` then enter as
//! powers `v_k^(lambda q_k)` of the unit `v_k = exp(t_k / q_k)`, where `q_k`
//! clears every eigenvalue denominator.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{check_order, AlgebraError, LieAlgebra};
use crate::symbolic::linalg::RatMatrix;
use crate::symbolic::matrix::Matrix;
use crate::symbolic::{ExpScales, Rational, RationalExpr, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpError {
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("generator e{generator} cannot be exponentiated: off-diagonal support has the cycle {cycle:?}")]
    UnsupportedSpectrum { generator: usize, cycle: Vec<usize> },
    #[error(transparent)]
    Order(#[from] AlgebraError),
}

/// `sum_m t^m A^m / m!`, requiring `A^n = 0`.
pub fn exp_nilpotent(a: &RatMatrix, t: Var) -> Result<Matrix, ExpError> {
    let n = a.len();
    let mut out = Matrix::identity(n);
    let mut power = identity(n);
    let mut fact = Rational::one();
    for m in 1..=n {
        power = mat_mul(&power, a);
        if power.iter().flatten().all(Zero::is_zero) {
            return Ok(out);
        }
        if m == n {
            break;
        }
        fact *= Rational::from_integer(m.into());
        let tm = RationalExpr::var_pow(t, m as i64);
        for i in 0..n {
            for j in 0..n {
                if power[i][j].is_zero() {
                    continue;
                }
                let term = tm.scale(&(&power[i][j] / &fact));
                out.set(i, j, out.get(i, j).add(&term));
            }
        }
    }
    Err(ExpError::NotNilpotent)
}

/// Least common denominator of the diagonal entries.
pub fn unit_denominator(a: &RatMatrix) -> u32 {
    let l = (0..a.len()).fold(num_bigint::BigInt::one(), |acc, i| acc.lcm(a[i][i].denom()));
    u32::try_from(l).expect("eigenvalue denominators fit in u32")
}

/// Exponential of a permutation-triangular matrix in the variables `t` and
/// `v = exp(t / q)` where `q = unit_denominator(a)`.
///
/// Each column solves `X' = A X`, `X(0) = e_c` by back substitution along a
/// topological order of the off-diagonal support; every entry is a finite
/// sum of `p(t) exp(mu t)` terms with polynomial `p`.
pub fn exp_triangular(a: &RatMatrix, t: Var, v: Var) -> Result<(Matrix, u32), ExpError> {
    let n = a.len();
    let order = topological_order(a).map_err(|cycle| ExpError::UnsupportedSpectrum {
        generator: 0,
        cycle: cycle.into_iter().map(|c| c + 1).collect(),
    })?;
    let q = unit_denominator(a);
    let mut out = Matrix::zero(n, n);
    for c in 0..n {
        let mut col: Vec<ExpPoly> = vec![ExpPoly::default(); n];
        for &k in &order {
            let mut forcing = ExpPoly::default();
            for j in 0..n {
                if j != k && !a[k][j].is_zero() {
                    forcing.add_scaled(&col[j], &a[k][j]);
                }
            }
            let lambda = &a[k][k];
            let mut x = forcing.shift(&-lambda).integrate().shift(lambda);
            if k == c {
                x.add_term(lambda.clone(), 0, Rational::one());
            }
            col[k] = x;
        }
        for (k, x) in col.iter().enumerate() {
            out.set(k, c, x.to_expr(t, v, q));
        }
    }
    Ok((out, q))
}

/// Vertices in an order where every `j` with `a[k][j] != 0` (`j != k`) comes
/// before `k`; on failure returns one cycle.
fn topological_order(a: &RatMatrix) -> Result<Vec<usize>, Vec<usize>> {
    let n = a.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = Vec::new();
    fn visit(
        k: usize,
        a: &RatMatrix,
        state: &mut [u8],
        order: &mut Vec<usize>,
        stack: &mut Vec<usize>,
    ) -> Result<(), Vec<usize>> {
        state[k] = 1;
        stack.push(k);
        for j in 0..a.len() {
            if j == k || a[k][j].is_zero() {
                continue;
            }
            match state[j] {
                0 => visit(j, a, state, order, stack)?,
                1 => {
                    let start = stack.iter().position(|&s| s == j).expect("on stack");
                    return Err(stack[start..].to_vec());
                }
                _ => {}
            }
        }
        stack.pop();
        state[k] = 2;
        order.push(k);
        Ok(())
    }
    for k in 0..n {
        if state[k] == 0 {
            visit(k, a, &mut state, &mut order, &mut stack)?;
        }
    }
    Ok(order)
}

/// `sum_mu p_mu(t) exp(mu t)`; `p_mu` stored as coefficient vectors.
#[derive(Clone, Debug, Default)]
struct ExpPoly(BTreeMap<Rational, Vec<Rational>>);

impl ExpPoly {
    fn add_term(&mut self, mu: Rational, p: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let coeffs = self.0.entry(mu.clone()).or_default();
        if coeffs.len() <= p {
            coeffs.resize(p + 1, Rational::zero());
        }
        coeffs[p] += c;
        if coeffs.iter().all(Zero::is_zero) {
            self.0.remove(&mu);
        }
    }

    fn add_scaled(&mut self, other: &ExpPoly, s: &Rational) {
        for (mu, coeffs) in &other.0 {
            for (p, c) in coeffs.iter().enumerate() {
                self.add_term(mu.clone(), p, c * s);
            }
        }
    }

    fn shift(&self, by: &Rational) -> ExpPoly {
        ExpPoly(self.0.iter().map(|(mu, c)| (mu + by, c.clone())).collect())
    }

    /// `int_0^t`.
    fn integrate(&self) -> ExpPoly {
        let mut out = ExpPoly::default();
        for (nu, coeffs) in &self.0 {
            for (p, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if nu.is_zero() {
                    out.add_term(Rational::zero(), p + 1, c / Rational::from_integer((p + 1).into()));
                    continue;
                }
                // int_0^t s^p e^{nu s} ds
                //   = e^{nu t} sum_i (-1)^i p!/(p-i)! t^(p-i) / nu^(i+1) - (-1)^p p! / nu^(p+1)
                let mut falling = Rational::one();
                let mut nu_pow = nu.clone();
                for i in 0..=p {
                    let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                    out.add_term(nu.clone(), p - i, c * &sign * &falling / &nu_pow);
                    if i == p {
                        out.add_term(Rational::zero(), 0, -(c * &sign * &falling / &nu_pow));
                    }
                    falling *= Rational::from_integer((p - i).into());
                    nu_pow *= nu;
                }
            }
        }
        out
    }

    fn to_expr(&self, t: Var, v: Var, q: u32) -> RationalExpr {
        let mut acc = RationalExpr::zero();
        for (mu, coeffs) in &self.0 {
            let e = mu * Rational::from_integer(q.into());
            assert!(e.is_integer(), "unit exponent must be integral");
            let e: i64 = e.to_integer().try_into().expect("unit exponent fits in i64");
            let unit = RationalExpr::var_pow(v, e);
            for (p, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = unit.mul(&RationalExpr::var_pow(t, p as i64)).scale(c);
                acc = acc.add(&term);
            }
        }
        acc
    }
}

fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map(Vec::len).unwrap_or(0);
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

fn scale_matrix(a: &RatMatrix, s: i8) -> RatMatrix {
    let s = Rational::from_integer(s.into());
    a.iter().map(|r| r.iter().map(|c| c * &s).collect()).collect()
}

/// `exp(t_k A)` with the parameterization chosen by the shape of `A`;
/// returns the unit denominator when a unit `v_k` is used.
pub fn one_parameter(a: &RatMatrix, k: u32) -> Result<(Matrix, Option<u32>), ExpError> {
    match exp_nilpotent(a, Var::t(k)) {
        Ok(m) => Ok((m, None)),
        Err(ExpError::NotNilpotent) => {
            let (m, q) = exp_triangular(a, Var::t(k), Var::v(k)).map_err(|e| match e {
                ExpError::UnsupportedSpectrum { cycle, .. } => ExpError::UnsupportedSpectrum {
                    generator: k as usize,
                    cycle,
                },
                other => other,
            })?;
            Ok((m, Some(q)))
        }
        Err(e) => Err(e),
    }
}

/// `B(t)` together with the lifted invariants it induces.
#[derive(Clone, Debug)]
pub struct LiftedInvariantSet {
    pub algebra: LieAlgebra,
    pub b: Matrix,
    /// `I_1..I_n`, linear in the coordinates.
    pub exprs: Vec<RationalExpr>,
    /// Parameter indices `k` of the non-central generators, in product order.
    pub params: Vec<u32>,
    /// Parameters carrying a unit `v_k`, with their denominators.
    pub scales: ExpScales,
    pub order: Vec<usize>,
    pub signs: Vec<i8>,
}

impl LiftedInvariantSet {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn has_unit(&self, k: u32) -> bool {
        self.scales.0.contains_key(&k)
    }
}

/// `B(t) = prod exp(s_g t_g ad_{e_g})` over non-central generators `g` in
/// `order`, and `I_j = sum_i x_i B_ij`. Parameter `t_g` is indexed by the
/// generator itself.
pub fn inner_automorphism_matrix(
    alg: &LieAlgebra,
    order: &[usize],
    signs: &[i8],
) -> Result<LiftedInvariantSet, ExpError> {
    let n = alg.dim();
    check_order(order, signs, n)?;
    let mut b = Matrix::identity(n);
    let mut params = Vec::new();
    let mut scales = BTreeMap::new();
    for (&g, &s) in order.iter().zip(signs) {
        if alg.is_central(g) {
            continue;
        }
        let a = scale_matrix(&alg.ad_matrix(g), s);
        let (factor, q) = one_parameter(&a, g as u32)?;
        if let Some(q) = q {
            scales.insert(g as u32, q);
        }
        params.push(g as u32);
        b = b.mul(&factor).expect("square factors");
    }
    let exprs = (0..n)
        .map(|j| {
            (0..n).fold(RationalExpr::zero(), |acc, i| {
                let e = b.get(i, j);
                if e.is_zero() {
                    acc
                } else {
                    acc.add(&e.mul(&RationalExpr::var(Var::x(i as u32 + 1))))
                }
            })
        })
        .collect();
    Ok(LiftedInvariantSet {
        algebra: alg.clone(),
        b,
        exprs,
        params,
        scales: ExpScales(scales),
        order: order.to_vec(),
        signs: signs.to_vec(),
    })
}

/// Lifted invariants using the algebra's default generator order and signs.
pub fn lift(alg: &LieAlgebra) -> Result<LiftedInvariantSet, ExpError> {
    let (order, signs) = alg.generator_order();
    inner_automorphism_matrix(alg, order, signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_basis;
    use crate::symbolic::{int, rat, VarNames};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    fn g48(b: Rational) -> LieAlgebra {
        LieAlgebra::new(
            default_basis(4),
            [
                (1, 4, vec![(1, int(1) + &b)]),
                (2, 3, vec![(1, int(1))]),
                (2, 4, vec![(2, int(1))]),
                (3, 4, vec![(3, b)]),
            ],
        )
        .unwrap()
    }

    fn show(e: &RationalExpr) -> String {
        e.display(&VarNames::plain()).to_string()
    }

    #[test]
    fn zero_matrix_exponentiates_to_identity() {
        assert_eq!(exp_nilpotent(&m(&[&[0, 0], &[0, 0]]), Var::t(1)).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn jordan_block() {
        let n = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = exp_nilpotent(&n, Var::t(1)).unwrap();
        assert_eq!(show(e.get(0, 2)), "t1^2/2");
        assert_eq!(show(e.get(0, 1)), "t1");
        assert!(e.get(2, 0).is_zero());
        assert!(exp_nilpotent(&m(&[&[1]]), Var::t(1)).is_err());
    }

    #[test]
    fn two_by_two_triangular() {
        let (e, q) = exp_triangular(&m(&[&[1, 1], &[0, 0]]), Var::t(1), Var::v(1)).unwrap();
        assert_eq!(q, 1);
        assert_eq!(show(e.get(0, 0)), "v1");
        assert_eq!(show(e.get(0, 1)), "v1 - 1");
        assert_eq!(show(e.get(1, 1)), "1");
        assert!(e.get(1, 0).is_zero());
    }

    #[test]
    fn cycle_is_unsupported() {
        let r = exp_triangular(&m(&[&[1, 1], &[1, 0]]), Var::t(1), Var::v(1));
        assert!(matches!(r, Err(ExpError::UnsupportedSpectrum { .. })));
    }

    #[test]
    fn g48_half_diagonal_and_first_invariant() {
        let alg = g48(rat(1, 2));
        let l = inner_automorphism_matrix(&alg, &[1, 2, 3, 4], &[1, 1, 1, -1]).unwrap();
        assert_eq!(l.scales.get(4), 2);
        let diag: Vec<String> = (0..4).map(|i| show(l.b.get(i, i))).collect();
        assert_eq!(diag, ["v4^3", "v4^2", "v4", "1"]);
        assert_eq!(show(&l.exprs[0]), "x1*v4^3");
    }

    #[test]
    fn heisenberg_first_invariant_is_fixed() {
        let alg = LieAlgebra::new(default_basis(3), [(2, 3, vec![(1, int(1))])]).unwrap();
        let l = lift(&alg).unwrap();
        assert_eq!(l.params, vec![2, 3]);
        assert_eq!(show(&l.exprs[0]), "x1");
    }

    #[test]
    fn abelian_lift_is_trivial() {
        let l = lift(&LieAlgebra::abelian(3)).unwrap();
        assert_eq!(l.param_count(), 0);
        assert_eq!(l.b, Matrix::identity(3));
    }
}
