//! Lie algebras given by structure constants in a fixed basis.

mod json;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::symbolic::linalg::{self, RatMatrix};
use crate::symbolic::matrix::Matrix;
use crate::symbolic::{Rational, RationalExpr, Var, VarNames};

pub use json::AlgebraFile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed algebra JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("invalid rational \"{value}\" in {context}")]
    InvalidRational { value: String, context: String },
    #[error("index {index} out of range 1..={dim} in {context}")]
    IndexOutOfRange { index: usize, dim: usize, context: String },
    #[error("bracket [e{i}, e{j}] must be listed with i < j")]
    BracketOrder { i: usize, j: usize },
    #[error("bracket [e{i}, e{j}] listed twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error("dimension {dim} does not match {count} basis names")]
    BasisMismatch { dim: usize, count: usize },
    #[error("basis name \"{0}\" is repeated")]
    DuplicateBasisName(String),
    #[error("Jacobi identity fails for {} (i, j, k, l) quadruples", .0.len())]
    JacobiViolation(Vec<[usize; 4]>),
    #[error("generator order/signs invalid: {0}")]
    GeneratorOrder(String),
}

/// A Lie algebra `[e_i, e_j] = sum_k c_ij^k e_k` with exact rational
/// structure constants. Indices are 1-based throughout the public API.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: Option<String>,
    basis: Vec<String>,
    /// Only `i < j`; coefficient lists sorted by `k` with no zeros.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    /// Generator order and signs used for the automorphism product.
    order: Vec<usize>,
    signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoadjointProfile {
    pub rank: usize,
    pub n_invariants: usize,
    pub center_dim: usize,
    pub center_basis: Vec<Vec<Rational>>,
    pub aut_param_count: usize,
}

impl LieAlgebra {
    /// Builds an algebra from bracket entries `(i, j, [(k, c)])`. Entries with
    /// `i > j` are stored with the sign flipped; repeated `(i, j)` pairs are
    /// summed. The Jacobi identity is not checked here, see [`validate`].
    ///
    /// [`validate`]: LieAlgebra::validate
    pub fn new(
        basis: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vec<(usize, Rational)>)>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        for (a, name) in basis.iter().enumerate() {
            if basis[..a].contains(name) {
                return Err(AlgebraError::DuplicateBasisName(name.clone()));
            }
        }
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for (i, j, terms) in brackets {
            for idx in [i, j] {
                check_index(idx, n, || format!("bracket [e{i}, e{j}]"))?;
            }
            if i == j {
                return Err(AlgebraError::BracketOrder { i, j });
            }
            let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
            let entry = table.entry(key).or_default();
            for (k, c) in terms {
                check_index(k, n, || format!("bracket [e{i}, e{j}]"))?;
                *entry.entry(k).or_insert_with(Rational::zero) += c * Rational::from_integer(sign.into());
            }
        }
        let brackets = table
            .into_iter()
            .map(|(key, terms)| (key, terms.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        Ok(LieAlgebra {
            name: None,
            basis,
            brackets,
            order: (1..=n).collect(),
            signs: vec![1; n],
        })
    }

    /// Abelian algebra with basis `e1..en`.
    pub fn abelian(n: usize) -> Self {
        LieAlgebra::new(default_basis(n), []).expect("no brackets")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Default generator order and signs for the automorphism product.
    pub fn with_generator_order(mut self, order: Vec<usize>, signs: Vec<i8>) -> Result<Self, AlgebraError> {
        check_order(&order, &signs, self.dim())?;
        self.order = order;
        self.signs = signs;
        Ok(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn generator_order(&self) -> (&[usize], &[i8]) {
        (&self.order, &self.signs)
    }

    /// Stored brackets, `i < j` only.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Rational)])> {
        self.brackets.iter().map(|(&(i, j), t)| (i, j, t.as_slice()))
    }

    pub fn bracket_count(&self) -> usize {
        self.brackets.len()
    }

    /// `[e_i, e_j]` as a sparse coefficient list.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rational)> {
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else if i > j {
            self.brackets
                .get(&(j, i))
                .map(|t| t.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default()
        } else {
            Vec::new()
        }
    }

    /// `c_ij^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.bracket(i, j)
            .into_iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c)
            .unwrap_or_else(Rational::zero)
    }

    /// Bracket of two coefficient vectors (0-based storage, length `dim`).
    pub fn bracket_vectors(&self, u: &[Rational], w: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (&(i, j), terms) in &self.brackets {
            let a = &u[i - 1] * &w[j - 1] - &u[j - 1] * &w[i - 1];
            if a.is_zero() {
                continue;
            }
            for (k, c) in terms {
                out[k - 1] += &a * c;
            }
        }
        out
    }

    /// Checks the Jacobi identity; reports every failing `(i, j, k, l)` with
    /// `i < j < k`.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let mut sum: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, c1) in self.bracket(a, b) {
                            for (l, c2) in self.bracket(m, c) {
                                *sum.entry(l).or_insert_with(Rational::zero) += &c1 * &c2;
                            }
                        }
                    }
                    bad.extend(sum.into_iter().filter(|(_, v)| !v.is_zero()).map(|(l, _)| [i, j, k, l]));
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(AlgebraError::JacobiViolation(bad))
        }
    }

    /// Matrix of `ad_{e_i}` with entry `(k, j)` equal to `c_ij^k`, so column
    /// `j` holds the coordinates of `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for j in 1..=n {
            for (k, c) in self.bracket(i, j) {
                m[k - 1][j - 1] = c;
            }
        }
        m
    }

    pub fn is_central(&self, i: usize) -> bool {
        (1..=self.dim()).all(|j| self.bracket(i, j).is_empty())
    }

    /// Basis of the center as coefficient vectors.
    pub fn center(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        // Rows indexed by (i, k), columns by j: sum_j u_j c_ij^k = 0.
        let mut rows: RatMatrix = Vec::new();
        for i in 1..=n {
            let ad = self.ad_matrix(i);
            rows.extend(ad.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
        }
        linalg::nullspace(&rows, n)
    }

    /// Coordinate names on the dual space: `e12 -> x12`, other names kept.
    pub fn coordinate_names(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|b| match b.strip_prefix('e') {
                Some(rest) if !rest.is_empty() => format!("x{rest}"),
                _ => b.clone(),
            })
            .collect()
    }

    pub fn var_names(&self) -> VarNames {
        VarNames::new(self.coordinate_names())
    }

    /// `M_ij = sum_k c_ij^k x_k`.
    pub fn coadjoint_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(n, n);
        for (&(i, j), terms) in &self.brackets {
            let e = terms.iter().fold(RationalExpr::zero(), |acc, (k, c)| {
                acc.add(&RationalExpr::var(Var::x(*k as u32)).scale(c))
            });
            m.set(j - 1, i - 1, e.neg());
            m.set(i - 1, j - 1, e);
        }
        m
    }

    pub fn coadjoint_profile(&self) -> CoadjointProfile {
        let rank = self.coadjoint_matrix().generic_rank();
        let center_basis = self.center();
        CoadjointProfile {
            rank,
            n_invariants: self.dim() - rank,
            center_dim: center_basis.len(),
            aut_param_count: self.dim() - center_basis.len(),
            center_basis,
        }
    }

    /// Same basis with every structure constant multiplied by `c`.
    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for terms in out.brackets.values_mut() {
            for (_, v) in terms.iter_mut() {
                *v *= c;
            }
            terms.retain(|(_, v)| !v.is_zero());
        }
        out.brackets.retain(|_, t| !t.is_empty());
        out
    }
}

pub fn default_basis(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

fn check_index(index: usize, dim: usize, context: impl Fn() -> String) -> Result<(), AlgebraError> {
    if index == 0 || index > dim {
        return Err(AlgebraError::IndexOutOfRange {
            index,
            dim,
            context: context(),
        });
    }
    Ok(())
}

pub(crate) fn check_order(order: &[usize], signs: &[i8], dim: usize) -> Result<(), AlgebraError> {
    if order.len() != dim || signs.len() != dim {
        return Err(AlgebraError::GeneratorOrder(format!(
            "expected {dim} entries, got order {} and signs {}",
            order.len(),
            signs.len()
        )));
    }
    let mut seen = vec![false; dim];
    for &g in order {
        if g == 0 || g > dim || seen[g - 1] {
            return Err(AlgebraError::GeneratorOrder(format!("{order:?} is not a permutation of 1..={dim}")));
        }
        seen[g - 1] = true;
    }
    if signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(AlgebraError::GeneratorOrder("signs must be +1 or -1".into()));
    }
    Ok(())
}

impl CoadjointProfile {
    pub fn is_rank_even(&self) -> bool {
        self.rank % 2 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{int, rat};

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::new(default_basis(3), [(2, 3, vec![(1, int(1))])]).unwrap()
    }

    /// `[e1,e4] = (1+b) e1, [e2,e3] = e1, [e2,e4] = e2, [e3,e4] = b e3`.
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

    #[test]
    fn abelian_is_valid_with_full_center() {
        let a = LieAlgebra::abelian(5);
        assert!(a.validate().is_ok());
        assert_eq!(LieAlgebra::abelian(3).center().len(), 3);
        let p = LieAlgebra::abelian(4).coadjoint_profile();
        assert_eq!((p.rank, p.n_invariants), (0, 4));
        assert!(a.ad_matrix(2).iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn g48_ad_matrices_match_display() {
        let b = rat(1, 2);
        let a = g48(b.clone());
        assert!(a.validate().is_ok());
        let ad1 = a.ad_matrix(1);
        for (k, row) in ad1.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let expected = if (k, j) == (0, 3) { int(1) + &b } else { int(0) };
                assert_eq!(*c, expected);
            }
        }
        let ad4 = a.ad_matrix(4);
        let diag = [-int(1) - &b, int(-1), -b.clone(), int(0)];
        for k in 0..4 {
            for j in 0..4 {
                let expected = if k == j { diag[k].clone() } else { int(0) };
                assert_eq!(ad4[k][j], expected);
            }
        }
    }

    #[test]
    fn ad_columns_reproduce_brackets() {
        let a = g48(int(-1));
        for i in 1..=4 {
            let ad = a.ad_matrix(i);
            for j in 1..=4 {
                for k in 1..=4 {
                    assert_eq!(ad[k - 1][j - 1], a.structure_constant(i, j, k));
                }
            }
        }
    }

    #[test]
    fn centers() {
        assert_eq!(heisenberg().center(), vec![vec![int(1), int(0), int(0)]]);
        assert_eq!(g48(int(-1)).center(), vec![vec![int(1), int(0), int(0), int(0)]]);
        assert!(g48(rat(1, 2)).center().is_empty());
    }

    #[test]
    fn center_vectors_are_annihilated() {
        let a = g48(int(-1));
        for u in a.center() {
            for i in 1..=4 {
                let mut e = vec![int(0); 4];
                e[i - 1] = int(1);
                assert!(a.bracket_vectors(&u, &e).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn profiles() {
        let p = g48(rat(1, 2)).coadjoint_profile();
        assert_eq!((p.rank, p.n_invariants, p.aut_param_count), (4, 0, 4));
        let p = g48(int(-1)).coadjoint_profile();
        assert_eq!((p.rank, p.n_invariants, p.aut_param_count), (2, 2, 3));
    }

    #[test]
    fn cyclic_three_dimensional_brackets_always_satisfy_jacobi() {
        // Any [e1,e2] = a e3, [e2,e3] = b e1, [e3,e1] = c e2 is a Lie algebra.
        let a = LieAlgebra::new(
            default_basis(3),
            [(1, 2, vec![(3, int(1))]), (2, 3, vec![(1, int(1))]), (1, 3, vec![(2, int(1))])],
        )
        .unwrap();
        assert!(a.validate().is_ok());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = 0 + 0 + [-e1, e2] = -e3.
        let a = LieAlgebra::new(
            default_basis(3),
            [(1, 2, vec![(3, int(1))]), (2, 3, vec![(1, int(1))]), (1, 3, vec![(1, int(1))])],
        )
        .unwrap();
        assert_eq!(a.validate(), Err(AlgebraError::JacobiViolation(vec![[1, 2, 3, 3]])));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            LieAlgebra::new(default_basis(2), [(1, 3, vec![])]),
            Err(AlgebraError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            LieAlgebra::new(vec!["a".into(), "a".into()], []),
            Err(AlgebraError::DuplicateBasisName(_))
        ));
        let flipped = LieAlgebra::new(default_basis(3), [(3, 2, vec![(1, int(-1))])]).unwrap();
        assert_eq!(flipped, heisenberg());
    }

    #[test]
    fn coordinate_names_follow_basis() {
        let a = LieAlgebra::new(vec!["e12".into(), "e13".into(), "f1".into()], []).unwrap();
        assert_eq!(a.coordinate_names(), vec!["x12", "x13", "f1"]);
    }
}
