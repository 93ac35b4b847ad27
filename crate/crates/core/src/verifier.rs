//! Exact certification of invariants.
//!
//! `F` is an invariant iff `X_i F = sum_j M_ij dF/dx_j = 0` for every basis
//! element, where `M_ij = sum_k c_ij^k x_k`. Residuals are computed
//! symbolically and must vanish identically.

use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::symbolic::matrix::Matrix;
use crate::symbolic::{PowerProduct, RationalExpr, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("expression {0} involves group parameters or exponential units")]
    NotParameterFree(usize),
}

/// Outcome of checking a candidate basis.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// Per expression, the residual `X_i F` for each generator `i = 1..n`.
    /// For expressions with fractional powers the residual is `X_i F / F`.
    pub checks: Vec<Vec<RationalExpr>>,
    pub jacobian_rank: usize,
    pub expected_count: usize,
    pub passed: bool,
}

impl Certificate {
    pub fn all_residuals_zero(&self) -> bool {
        self.checks.iter().flatten().all(RationalExpr::is_zero)
    }

    /// `(expression index, generator index)` of every nonzero residual,
    /// both 1-based for the generator.
    pub fn failures(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (f, row) in self.checks.iter().enumerate() {
            for (i, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    out.push((f, i + 1));
                }
            }
        }
        out
    }
}

/// `X_i` applied through a precomputed gradient.
fn vector_fields(alg: &LieAlgebra, grad: &[RationalExpr]) -> Vec<RationalExpr> {
    let n = alg.dim();
    let mut out = vec![RationalExpr::zero(); n];
    for (i, j, terms) in alg.brackets() {
        // M_ij = sum_k c_ij^k x_k, M_ji = -M_ij
        let m = terms.iter().fold(RationalExpr::zero(), |acc, (k, c)| {
            acc.add(&RationalExpr::var(Var::x(*k as u32)).scale(c))
        });
        if !grad[j - 1].is_zero() {
            out[i - 1] = out[i - 1].add(&m.mul(&grad[j - 1]));
        }
        if !grad[i - 1].is_zero() {
            out[j - 1] = out[j - 1].sub(&m.mul(&grad[i - 1]));
        }
    }
    out
}

fn gradient(f: &RationalExpr, n: usize) -> Vec<RationalExpr> {
    (1..=n).map(|j| f.partial(Var::x(j as u32))).collect()
}

fn log_gradient(f: &PowerProduct, n: usize) -> Vec<RationalExpr> {
    (1..=n).map(|j| f.log_partial(Var::x(j as u32))).collect()
}

/// Residuals `X_1 F, ..., X_n F`.
pub fn infinitesimal_check(f: &RationalExpr, alg: &LieAlgebra) -> Result<Vec<RationalExpr>, VerifyError> {
    if !f.is_parameter_free() {
        return Err(VerifyError::NotParameterFree(0));
    }
    Ok(vector_fields(alg, &gradient(f, alg.dim())))
}

/// Residuals `X_i F / F` for a product of rational powers; these vanish
/// exactly when `X_i F` does.
pub fn infinitesimal_check_power(f: &PowerProduct, alg: &LieAlgebra) -> Result<Vec<RationalExpr>, VerifyError> {
    if !f.is_parameter_free() {
        return Err(VerifyError::NotParameterFree(0));
    }
    if let Some(r) = f.as_rational() {
        return infinitesimal_check(&r, alg);
    }
    Ok(vector_fields(alg, &log_gradient(f, alg.dim())))
}

/// Rank of the Jacobian `(dF_l / dx_i)` over the function field. Rows of
/// power products are divided by `F`, which does not change the rank.
pub fn independence_rank(fs: &[PowerProduct], dim: usize) -> usize {
    if fs.is_empty() {
        return 0;
    }
    let rows = fs
        .iter()
        .map(|f| match f.as_rational() {
            Some(r) => gradient(&r, dim),
            None => log_gradient(f, dim),
        })
        .collect();
    Matrix::from_rows(rows).generic_rank()
}

pub fn independence_rank_rational(fs: &[RationalExpr], dim: usize) -> usize {
    let fs: Vec<PowerProduct> = fs.iter().cloned().map(PowerProduct::from).collect();
    independence_rank(&fs, dim)
}

/// Infinitesimal checks on every expression, the Jacobian rank, and the
/// comparison with `N_g`.
pub fn certify_basis(fs: &[PowerProduct], alg: &LieAlgebra) -> Result<Certificate, VerifyError> {
    let expected_count = alg.coadjoint_profile().n_invariants;
    certify_with_count(fs, alg, expected_count)
}

/// [`certify_basis`] with a precomputed invariant count.
pub fn certify_with_count(
    fs: &[PowerProduct],
    alg: &LieAlgebra,
    expected_count: usize,
) -> Result<Certificate, VerifyError> {
    let checks = fs
        .iter()
        .enumerate()
        .map(|(l, f)| infinitesimal_check_power(f, alg).map_err(|_| VerifyError::NotParameterFree(l)))
        .collect::<Result<Vec<_>, _>>()?;
    let jacobian_rank = independence_rank(fs, alg.dim());
    let zero = checks.iter().flatten().all(RationalExpr::is_zero);
    Ok(Certificate {
        passed: zero && jacobian_rank == expected_count && fs.len() == expected_count,
        checks,
        jacobian_rank,
        expected_count,
    })
}

pub fn certify_rational(fs: &[RationalExpr], alg: &LieAlgebra) -> Result<Certificate, VerifyError> {
    let fs: Vec<PowerProduct> = fs.iter().cloned().map(PowerProduct::from).collect();
    certify_basis(&fs, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_basis;
    use crate::symbolic::parse::parse_expr;
    use crate::symbolic::{int, VarNames};

    fn g48_bm1() -> LieAlgebra {
        LieAlgebra::new(
            default_basis(4),
            [(2, 3, vec![(1, int(1))]), (2, 4, vec![(2, int(1))]), (3, 4, vec![(3, int(-1))])],
        )
        .unwrap()
    }

    fn p(s: &str) -> RationalExpr {
        parse_expr(s, &VarNames::plain()).unwrap()
    }

    #[test]
    fn known_invariants_have_zero_residuals() {
        let a = g48_bm1();
        for f in ["x1", "x1*x4 - x2*x3", "x4 - x2*x3/x1"] {
            assert!(infinitesimal_check(&p(f), &a).unwrap().iter().all(RationalExpr::is_zero), "{f}");
        }
    }

    #[test]
    fn heisenberg_x2_residual() {
        let h = LieAlgebra::new(default_basis(3), [(2, 3, vec![(1, int(1))])]).unwrap();
        let r = infinitesimal_check(&p("x2"), &h).unwrap();
        // X_3 = -x1 d/dx2
        assert!(r[0].is_zero() && r[1].is_zero());
        assert_eq!(r[2], p("-x1"));
    }

    #[test]
    fn parameters_are_rejected() {
        assert!(infinitesimal_check(&p("t1*x1"), &g48_bm1()).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(independence_rank_rational(&[p("x1"), p("x1*x4 - x2*x3")], 4), 2);
        assert_eq!(independence_rank_rational(&[p("x1"), p("x1^2"), p("x1^3")], 4), 1);
        assert_eq!(independence_rank_rational(&[], 4), 0);
    }

    #[test]
    fn certificates() {
        let a = g48_bm1();
        assert!(certify_rational(&[p("x1"), p("x1*x4 - x2*x3")], &a).unwrap().passed);
        let c = certify_rational(&[p("x1"), p("x1^2")], &a).unwrap();
        assert!(!c.passed);
        assert_eq!(c.jacobian_rank, 1);
        assert!(certify_rational(&[], &LieAlgebra::new(default_basis(2), [(1, 2, vec![(2, int(1))])]).unwrap())
            .unwrap()
            .passed);
    }
}
