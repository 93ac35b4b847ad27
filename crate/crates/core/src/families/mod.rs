//! Triangular matrix families and a catalog of small algebras.
//!
//! `t0(n)` has basis `e_ij`, `i < j`, in row-major order with
//! `[e_ij, e_i'j'] = delta_i'j e_ij' - delta_ij' e_i'j`. `t_gamma(n)` adds
//! `f_1..f_s` acting diagonally: `[f_p, e_ij] = (gamma_pi - gamma_pj) e_ij`.

pub mod catalog;
mod gamma;
mod theorem;

pub use gamma::{is_reduced, reduce_gamma, GammaFile, GammaMatrix, ReducedGamma};
pub use theorem::{alpha, corner_det, cross_weights, theorem_basis, theorem_basis_with, ExponentRule, TheoremBasis};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, LieAlgebra};
use crate::symbolic::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid gamma matrix: {0}")]
    InvalidGamma(String),
    #[error("n must be at least 2 (got {0})")]
    InvalidDimension(usize),
    #[error("unknown catalog algebra '{0}'")]
    UnknownAlgebra(String),
    #[error("parameter '{name}': {message}")]
    BadParam { name: String, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Flat 1-based index of `e_ij` in row-major order.
pub fn triangular_index(n: usize, i: usize, j: usize) -> usize {
    assert!(1 <= i && i < j && j <= n, "e_{i}{j} is not strictly upper triangular in size {n}");
    // rows 1..i-1 contribute (n-1) + ... + (n-i+1) entries
    (i - 1) * n - (i - 1) * i / 2 + (j - i)
}

/// Inverse of [`triangular_index`].
pub fn triangular_pair(n: usize, index: usize) -> (usize, usize) {
    let mut rest = index;
    for i in 1..n {
        let len = n - i;
        if rest <= len {
            return (i, i + rest);
        }
        rest -= len;
    }
    panic!("index {index} out of range for size {n}");
}

pub fn nilradical_dim(n: usize) -> usize {
    n * (n - 1) / 2
}

fn e_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("e{i}{j}")
    } else {
        format!("e{i}_{j}")
    }
}

fn check_n(n: usize) -> Result<(), FamilyError> {
    if n < 2 {
        return Err(FamilyError::InvalidDimension(n));
    }
    Ok(())
}

fn t0_entries(n: usize) -> Vec<(usize, usize, Vec<(usize, Rational)>)> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in i + 1..=n {
            // only [e_ij, e_jl] = e_il survives for a < b in flat order
            for l in j + 1..=n {
                out.push((
                    triangular_index(n, i, j),
                    triangular_index(n, j, l),
                    vec![(triangular_index(n, i, l), Rational::one())],
                ));
            }
        }
    }
    out
}

fn t0_basis(n: usize) -> Vec<String> {
    (1..=nilradical_dim(n))
        .map(|a| {
            let (i, j) = triangular_pair(n, a);
            e_name(n, i, j)
        })
        .collect()
}

pub fn build_t0(n: usize) -> Result<LieAlgebra, FamilyError> {
    check_n(n)?;
    Ok(LieAlgebra::new(t0_basis(n), t0_entries(n))?.with_name(format!("t0({n})")))
}

pub fn build_tgamma(gamma: &GammaMatrix) -> Result<LieAlgebra, FamilyError> {
    let n = gamma.n();
    check_n(n)?;
    let m = nilradical_dim(n);
    let mut basis = t0_basis(n);
    basis.extend((1..=gamma.s()).map(|p| format!("f{p}")));
    let mut entries = t0_entries(n);
    for (p, row) in gamma.rows().iter().enumerate() {
        for a in 1..=m {
            let (i, j) = triangular_pair(n, a);
            let c = &row[i - 1] - &row[j - 1];
            if !c.is_zero() {
                // stored as [e_ij, f_p] = -(gamma_pi - gamma_pj) e_ij
                entries.push((a, m + p + 1, vec![(a, -c)]));
            }
        }
    }
    Ok(LieAlgebra::new(basis, entries)?.with_name(format!("t_gamma({n})")))
}

/// Rows `E_pp - E_(p+1)(p+1)`: all trace-free diagonal matrices.
pub fn st_gamma(n: usize) -> Result<GammaMatrix, FamilyError> {
    check_n(n)?;
    let rows = (0..n - 1)
        .map(|p| {
            let mut r = vec![Rational::zero(); n];
            r[p] = Rational::one();
            r[p + 1] = -Rational::one();
            r
        })
        .collect();
    GammaMatrix::new(n, rows)
}

/// `st(n)`, built with the reduced form of [`st_gamma`] so that the
/// determinant basis applies to it directly.
pub fn build_st(n: usize) -> Result<LieAlgebra, FamilyError> {
    let reduced = reduce_gamma(&st_gamma(n)?);
    Ok(build_tgamma(&reduced.gamma)?.with_name(format!("st({n})")))
}

/// `st(n)` plus a central element `z` (the identity matrix).
pub fn build_t(n: usize) -> Result<LieAlgebra, FamilyError> {
    let st = build_st(n)?;
    let mut basis = st.basis().to_vec();
    basis.push("z".into());
    let entries: Vec<_> = st.brackets().map(|(i, j, t)| (i, j, t.to_vec())).collect();
    Ok(LieAlgebra::new(basis, entries)?.with_name(format!("t({n})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{int, rat};

    #[test]
    fn flat_indices_are_row_major() {
        assert_eq!(triangular_index(4, 1, 2), 1);
        assert_eq!(triangular_index(4, 1, 4), 3);
        assert_eq!(triangular_index(4, 2, 3), 4);
        assert_eq!(triangular_index(4, 3, 4), 6);
        for n in 2..8 {
            for a in 1..=nilradical_dim(n) {
                let (i, j) = triangular_pair(n, a);
                assert_eq!(triangular_index(n, i, j), a);
            }
        }
    }

    #[test]
    fn t0_3_is_heisenberg_like() {
        let a = build_t0(3).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.basis(), ["e12", "e13", "e23"]);
        assert_eq!(a.bracket_count(), 1);
        assert_eq!(a.bracket(1, 3), vec![(2, int(1))]);
    }

    #[test]
    fn builders_satisfy_jacobi() {
        for n in 2..=6 {
            let t0 = build_t0(n).unwrap();
            assert_eq!(t0.dim(), nilradical_dim(n));
            t0.validate().unwrap();
            build_st(n).unwrap().validate().unwrap();
            let t = build_t(n).unwrap();
            assert_eq!(t.dim(), nilradical_dim(n) + n);
            t.validate().unwrap();
        }
        assert_eq!(build_t0(1).unwrap_err(), FamilyError::InvalidDimension(1));
    }

    #[test]
    fn diagonal_action() {
        let g = GammaMatrix::new(3, vec![vec![rat(-1, 2), int(0), rat(1, 2)]]).unwrap();
        let a = build_tgamma(&g).unwrap();
        // [f1, e13] = (gamma_11 - gamma_13) e13 = -e13
        assert_eq!(a.bracket(4, 2), vec![(2, int(-1))]);
        assert_eq!(a.bracket(4, 1), vec![(1, rat(-1, 2))]);
    }
}
