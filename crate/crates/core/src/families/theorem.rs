//! Determinant invariants of `t_gamma(n)` for a reduced parameter matrix.
//!
//! With `kappa = n - k + 1` and `D_k = |(x_ij)_{i=1..k, j=kappa..n}|`:
//!
//! * for `k` not among the pivots `k_q`: `D_k * prod_q D_{k_q}^beta_qk`;
//! * for each non-pivot row `p`:
//!   `f_p + sum_k (-1)^(k+1) (gamma_pk - gamma_p,k+1) / D_k * sum_{k<i<kappa} B_ki`,
//!   where `B_ki` is `D_k`'s block bordered by column `i` on the left and
//!   row `i` at the bottom.
//!
//! `D_k` has weight `alpha_qk = -sum_{k'<=k} (gamma_q,kappa' - gamma_qk')`
//! under `f_q`. The exponents `beta` are chosen so the product has weight
//! zero under every `f_q`; when `alpha_q',k_q = 0` for `q' != q` (always the
//! case for `s' <= 1`) this gives `beta_qk = alpha_qk`.

use num_traits::Zero;

use super::{nilradical_dim, triangular_index, ReducedGamma};
use crate::symbolic::linalg::{self, RatMatrix};
use crate::symbolic::matrix::Matrix;
use crate::symbolic::{PowerProduct, Rational, RationalExpr, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentRule {
    /// `beta_qk = alpha_qk`.
    ClosedForm,
    /// `beta` solves the weight-zero conditions.
    WeightBalanced,
}

#[derive(Clone, Debug)]
pub struct TheoremBasis {
    pub n: usize,
    /// `(k, expression)` for each non-pivot `k`.
    pub products: Vec<(usize, PowerProduct)>,
    /// `(p, expression)` for each row `p > s'`.
    pub f_terms: Vec<(usize, RationalExpr)>,
}

impl TheoremBasis {
    pub fn len(&self) -> usize {
        self.products.len() + self.f_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> Vec<PowerProduct> {
        self.products
            .iter()
            .map(|(_, e)| e.clone())
            .chain(self.f_terms.iter().map(|(_, e)| PowerProduct::from(e.clone())))
            .collect()
    }
}

fn x(n: usize, i: usize, j: usize) -> RationalExpr {
    RationalExpr::var(Var::x(triangular_index(n, i, j) as u32))
}

/// `D_k`, the `k x k` upper right corner.
pub fn corner_det(n: usize, k: usize) -> RationalExpr {
    let kappa = n - k + 1;
    Matrix::from_fn(k, k, |r, c| x(n, r + 1, kappa + c)).det().expect("polynomial entries")
}

fn bordered_det(n: usize, k: usize, i: usize) -> RationalExpr {
    let kappa = n - k + 1;
    Matrix::from_fn(k + 1, k + 1, |r, c| match (r < k, c) {
        (true, 0) => x(n, r + 1, i),
        (true, c) => x(n, r + 1, kappa + c - 1),
        (false, 0) => RationalExpr::zero(),
        (false, c) => x(n, i, kappa + c - 1),
    })
    .det()
    .expect("polynomial entries")
}

/// `alpha_qk` for row `q` of the reduced matrix.
pub fn alpha(reduced: &ReducedGamma, q: usize, k: usize) -> Rational {
    let g = &reduced.gamma;
    let n = g.n();
    -(1..=k).fold(Rational::zero(), |a, kp| a + g.get(q, n - kp + 1) - g.get(q, kp))
}

fn exponents(reduced: &ReducedGamma, k: usize, rule: ExponentRule) -> Vec<Rational> {
    let sp = reduced.s_prime;
    let w: Vec<Rational> = (1..=sp).map(|q| alpha(reduced, q, k)).collect();
    if rule == ExponentRule::ClosedForm || sp == 0 {
        return w;
    }
    // sum_q beta_q alpha_q',k_q = -alpha_q'k for every q'
    let mut aug: RatMatrix = (1..=sp)
        .map(|qp| {
            let mut row: Vec<Rational> = reduced.k_values.iter().map(|&kq| alpha(reduced, qp, kq)).collect();
            row.push(-w[qp - 1].clone());
            row
        })
        .collect();
    let pivots = linalg::rref(&mut aug);
    assert_eq!(pivots.len(), sp, "pivot weights are triangular with -1 diagonal");
    aug.into_iter().map(|row| row[sp].clone()).collect()
}

pub fn theorem_basis(reduced: &ReducedGamma) -> TheoremBasis {
    theorem_basis_with(reduced, ExponentRule::WeightBalanced)
}

pub fn theorem_basis_with(reduced: &ReducedGamma, rule: ExponentRule) -> TheoremBasis {
    let g = &reduced.gamma;
    let n = g.n();
    let h = n / 2;
    let dets: Vec<RationalExpr> = (1..=h).map(|k| corner_det(n, k)).collect();
    let mut products = Vec::new();
    for k in (1..=h).filter(|k| !reduced.k_values.contains(k)) {
        let mut e = PowerProduct::from(dets[k - 1].clone());
        for (q0, beta) in exponents(reduced, k, rule).iter().enumerate() {
            let kq = reduced.k_values[q0];
            e = e.mul(&PowerProduct::power(&dets[kq - 1], beta));
        }
        products.push((k, e));
    }
    let mut f_terms = Vec::new();
    for p in reduced.s_prime + 1..=g.s() {
        let mut e = RationalExpr::var(Var::x((nilradical_dim(n) + p) as u32));
        for k in 1..=h {
            let c = g.get(p, k) - g.get(p, k + 1);
            if c.is_zero() {
                continue;
            }
            let kappa = n - k + 1;
            let inner = (k + 1..kappa).fold(RationalExpr::zero(), |a, i| a.add(&bordered_det(n, k, i)));
            let sign = if k % 2 == 1 { c } else { -c };
            let term = inner.div(&dets[k - 1]).expect("corner determinant is nonzero").scale(&sign);
            e = e.add(&term);
        }
        f_terms.push((p, e));
    }
    TheoremBasis { n, products, f_terms }
}

/// Weight of `D_k` under `f_q` for every pivot row, i.e. the obstruction to
/// the closed-form exponents.
pub fn cross_weights(reduced: &ReducedGamma) -> Vec<(usize, usize, Rational)> {
    let mut out = Vec::new();
    for qp in 1..=reduced.s_prime {
        for (q0, &kq) in reduced.k_values.iter().enumerate() {
            let a = alpha(reduced, qp, kq);
            if q0 + 1 != qp && !a.is_zero() {
                out.push((qp, q0 + 1, a));
            }
        }
    }
    out
}
