//! Square and rectangular matrices of rational expressions.
//!
//! This is the carrier for adjoint matrices, one-parameter exponentials and
//! the automorphism matrix `B(t)`, as well as coefficient and Jacobian
//! matrices whose determinant or rank is needed.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::error::SymbolicError;
use super::gcd::gcd;
use super::linalg::{self, RatMatrix};
use super::poly::Poly;
use super::ratexpr::RationalExpr;
use super::sample::Sampler;
use super::var::{Var, VarNames};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalExpr>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![RationalExpr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, RationalExpr::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RationalExpr) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<RationalExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_rational(m: &RatMatrix) -> Self {
        Matrix::from_rows(
            m.iter()
                .map(|row| row.iter().cloned().map(RationalExpr::constant).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &RationalExpr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RationalExpr) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[RationalExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &RationalExpr> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalExpr::is_zero)
    }

    /// Constant entries as a rational matrix, if every entry is constant.
    pub fn to_rational(&self) -> Option<RatMatrix> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(RationalExpr::constant_value).collect())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, SymbolicError> {
        if self.cols != other.rows {
            return Err(SymbolicError::DimensionMismatch);
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, SymbolicError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SymbolicError::DimensionMismatch);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, SymbolicError> {
        self.add(&other.scale(&RationalExpr::from_int(-1)))
    }

    pub fn scale(&self, c: &RationalExpr) -> Matrix {
        self.map(|e| e.mul(c))
    }

    pub fn map(&self, f: impl Fn(&RationalExpr) -> RationalExpr) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&RationalExpr) -> Result<RationalExpr, SymbolicError>,
    ) -> Result<Matrix, SymbolicError> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn pow(&self, e: u32) -> Result<Matrix, SymbolicError> {
        if !self.is_square() {
            return Err(SymbolicError::NotSquare(self.rows, self.cols));
        }
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.data.iter().flat_map(|e| e.vars()).collect()
    }

    pub fn eval(&self, point: &HashMap<Var, Rational>) -> Option<RatMatrix> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    /// Determinant: cofactor expansion up to dimension 4, fraction-free
    /// elimination beyond.
    pub fn det(&self) -> Result<RationalExpr, SymbolicError> {
        if !self.is_square() {
            return Err(SymbolicError::NotSquare(self.rows, self.cols));
        }
        if self.rows <= 4 {
            Ok(self.det_cofactor())
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> RationalExpr {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.rows).collect();
        cofactor(self, &idx, &idx)
    }

    /// Bareiss elimination over the polynomial ring after clearing row
    /// denominators.
    pub fn det_bareiss(&self) -> Result<RationalExpr, SymbolicError> {
        if !self.is_square() {
            return Err(SymbolicError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RationalExpr::one());
        }
        let (mut a, scale) = self.clear_row_denominators();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n.saturating_sub(1) {
            let pivot = (k..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].len());
            let Some(p) = pivot else {
                return Ok(RationalExpr::zero());
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Poly::zero();
            }
            prev = a[k][k].clone();
        }
        let d = RationalExpr::from_poly(a[n - 1][n - 1].clone());
        let d = if negate { d.neg() } else { d };
        d.div(&scale)
    }

    /// Multiplies each row by the lcm of its denominators; returns the
    /// polynomial rows and the product of the multipliers.
    fn clear_row_denominators(&self) -> (Vec<Vec<Poly>>, RationalExpr) {
        let mut scale = RationalExpr::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut l = Poly::one();
                for e in row {
                    let d = e.denom();
                    if d.is_constant() {
                        l = l.mul(d);
                        continue;
                    }
                    let g = gcd(&l, d);
                    l = l.mul(&d.div_exact(&g).expect("gcd divides"));
                }
                scale = scale.mul(&RationalExpr::from_poly(l.clone()));
                row.iter()
                    .map(|e| {
                        e.numer()
                            .mul(&l.div_exact(e.denom()).expect("lcm is divisible by each denominator"))
                    })
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank over the field of rational functions in all variables present.
    ///
    /// A nonsingular numeric evaluation certifies full rank immediately;
    /// otherwise symbolic elimination with sparsity-aware pivoting is run.
    pub fn generic_rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        if full == 0 {
            return 0;
        }
        let vars = self.vars();
        let mut sampler = Sampler::new(0x5eed);
        if let Some(m) = self.eval(&sampler.point(vars.iter().copied())) {
            if linalg::rank(&m) == full {
                return full;
            }
        }
        symbolic_rank(self)
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> MatrixDisplay<'a> {
        MatrixDisplay { m: self, names }
    }
}

fn cofactor(m: &Matrix, rows: &[usize], cols: &[usize]) -> RationalExpr {
    match rows.len() {
        0 => RationalExpr::one(),
        1 => m.get(rows[0], cols[0]).clone(),
        2 => {
            let a = m.get(rows[0], cols[0]).mul(m.get(rows[1], cols[1]));
            let b = m.get(rows[0], cols[1]).mul(m.get(rows[1], cols[0]));
            a.sub(&b)
        }
        _ => {
            let mut acc = RationalExpr::zero();
            let r0 = rows[0];
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(r0, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = cofactor(m, &rows[1..], &sub_cols);
                let term = e.mul(&minor);
                acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Gaussian elimination over the fraction field. Pivots minimize the
/// Markowitz fill estimate, then expression size, so sparse matrices with
/// monomial entries stay sparse.
fn symbolic_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<RationalExpr>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut live_rows: Vec<usize> = (0..m.rows).collect();
    let mut live_cols: Vec<usize> = (0..m.cols).collect();
    let mut rank = 0;
    loop {
        let row_nnz: HashMap<usize, usize> = live_rows
            .iter()
            .map(|&i| (i, live_cols.iter().filter(|&&j| !a[i][j].is_zero()).count()))
            .collect();
        let col_nnz: HashMap<usize, usize> = live_cols
            .iter()
            .map(|&j| (j, live_rows.iter().filter(|&&i| !a[i][j].is_zero()).count()))
            .collect();
        let mut best: Option<((usize, usize, usize), usize, usize)> = None;
        for &i in &live_rows {
            for &j in &live_cols {
                let e = &a[i][j];
                if e.is_zero() {
                    continue;
                }
                let fill = (row_nnz[&i] - 1) * (col_nnz[&j] - 1);
                let size = e.numer().len() + e.denom().len();
                let key = (fill, size, e.numer().total_degree() as usize + e.denom().total_degree() as usize);
                if best.as_ref().map(|(k, _, _)| key < *k).unwrap_or(true) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            return rank;
        };
        rank += 1;
        live_rows.retain(|&i| i != pi);
        live_cols.retain(|&j| j != pj);
        let pivot = a[pi][pj].clone();
        for &r in &live_rows {
            if a[r][pj].is_zero() {
                continue;
            }
            let f = a[r][pj].div(&pivot).expect("pivot is nonzero");
            for &c in &live_cols {
                if a[pi][c].is_zero() {
                    continue;
                }
                let upd = a[r][c].sub(&f.mul(&a[pi][c]));
                a[r][c] = upd;
            }
            a[r][pj] = RationalExpr::zero();
        }
    }
}

/// Rank of the numeric evaluation of `m` at `point` (exact rationals).
pub fn numeric_rank(m: &Matrix, point: &HashMap<Var, Rational>) -> Option<usize> {
    m.eval(point).map(|r| linalg::rank(&r))
}

pub struct MatrixDisplay<'a> {
    m: &'a Matrix,
    names: &'a VarNames,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m.rows {
            write!(f, "[")?;
            for (j, e) in self.m.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e.display(self.names))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::int;

    fn x(i: u32) -> RationalExpr {
        RationalExpr::var(Var::x(i))
    }

    #[test]
    fn identity_determinant_is_one() {
        assert!(Matrix::identity(3).det().unwrap().is_one());
        assert!(Matrix::identity(6).det_bareiss().unwrap().is_one());
    }

    #[test]
    fn two_by_two_coordinate_determinant() {
        // Rows (x13, x14), (x23, x24) with flat indices 2, 3, 4, 5.
        let m = Matrix::from_rows(vec![vec![x(2), x(3)], vec![x(4), x(5)]]);
        let expected = &(&x(2) * &x(5)) - &(&x(3) * &x(4));
        assert_eq!(m.det().unwrap(), expected);
        assert_eq!(m.det_bareiss().unwrap(), expected);
    }

    #[test]
    fn repeated_row_is_singular() {
        let m = Matrix::from_rows(vec![
            vec![x(1), x(2), x(3)],
            vec![x(4), x(5), x(6)],
            vec![x(1), x(2), x(3)],
        ]);
        assert!(m.det().unwrap().is_zero());
        assert!(m.det_bareiss().unwrap().is_zero());
        assert_eq!(m.generic_rank(), 2);
    }

    #[test]
    fn bareiss_handles_rational_entries_and_pivoting() {
        let m = Matrix::from_rows(vec![
            vec![RationalExpr::zero(), &x(1) / &x(2), RationalExpr::from_int(1)],
            vec![x(3), RationalExpr::zero(), &x(1) + &x(2)],
            vec![RationalExpr::from_int(2), x(2), RationalExpr::zero()],
        ]);
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor());
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(Matrix::zero(4, 4).generic_rank(), 0);
    }

    #[test]
    fn antisymmetric_rank_is_even() {
        let m = Matrix::from_rows(vec![
            vec![RationalExpr::zero(), x(1), RationalExpr::zero()],
            vec![-&x(1), RationalExpr::zero(), RationalExpr::zero()],
            vec![RationalExpr::zero(), RationalExpr::zero(), RationalExpr::zero()],
        ]);
        assert_eq!(m.generic_rank(), 2);
        let r = Matrix::from_rational(&vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert_eq!(r.generic_rank(), 1);
    }
}
