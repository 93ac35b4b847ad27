//! Parameter matrices of `t_gamma(n)` and their reduced form.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::FamilyError;
use crate::symbolic::linalg::{self, RatMatrix};
use crate::symbolic::{parse_rational, Rational};

/// `s x n` matrix of diagonal weights, shifted so every row has trace zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMatrix {
    n: usize,
    rows: RatMatrix,
}

/// `{"s": 1, "n": 4, "gamma": [["1", "0", "0", "-1"]]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaFile {
    pub s: usize,
    pub n: usize,
    pub gamma: Vec<Vec<String>>,
}

impl GammaMatrix {
    pub fn new(n: usize, rows: RatMatrix) -> Result<Self, FamilyError> {
        if n < 2 {
            return Err(FamilyError::InvalidDimension(n));
        }
        if rows.len() > n - 1 {
            return Err(FamilyError::InvalidGamma(format!("s = {} exceeds n - 1 = {}", rows.len(), n - 1)));
        }
        let size = Rational::from_integer(n.into());
        let mut shifted = Vec::with_capacity(rows.len());
        for (p, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(FamilyError::InvalidGamma(format!("row {} has {} entries, expected {n}", p + 1, row.len())));
            }
            let mean = row.iter().fold(Rational::zero(), |a, x| a + x) / &size;
            shifted.push(row.into_iter().map(|x| x - &mean).collect::<Vec<_>>());
        }
        let mut with_ones = shifted.clone();
        with_ones.push(vec![Rational::one(); n]);
        if linalg::rank(&with_ones) != with_ones.len() {
            return Err(FamilyError::InvalidGamma(
                "rows and the all-ones row are linearly dependent".into(),
            ));
        }
        Ok(GammaMatrix { n, rows: shifted })
    }

    /// The `s = 0` matrix.
    pub fn empty(n: usize) -> Result<Self, FamilyError> {
        GammaMatrix::new(n, Vec::new())
    }

    pub fn from_file(file: GammaFile) -> Result<Self, FamilyError> {
        if file.gamma.len() != file.s {
            return Err(FamilyError::InvalidGamma(format!("s = {} but {} rows given", file.s, file.gamma.len())));
        }
        let rows = file
            .gamma
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .map(|c| {
                        parse_rational(c)
                            .ok_or_else(|| FamilyError::InvalidGamma(format!("invalid rational '{c}' in row {}", p + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        GammaMatrix::new(file.n, rows)
    }

    pub fn from_json(text: &str) -> Result<Self, FamilyError> {
        let file: GammaFile = serde_json::from_str(text).map_err(|e| FamilyError::InvalidGamma(e.to_string()))?;
        GammaMatrix::from_file(file)
    }

    pub fn to_file(&self) -> GammaFile {
        GammaFile {
            s: self.s(),
            n: self.n,
            gamma: self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &RatMatrix {
        &self.rows
    }

    /// `gamma_pi`, both indices 1-based.
    pub fn get(&self, p: usize, i: usize) -> &Rational {
        &self.rows[p - 1][i - 1]
    }

    /// `d_pk = gamma_p,n-k+1 - gamma_pk` for `k = 1..[n/2]`.
    pub fn differences(&self) -> RatMatrix {
        let h = self.n / 2;
        self.rows
            .iter()
            .map(|r| (1..=h).map(|k| &r[self.n - k] - &r[k - 1]).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGamma {
    pub gamma: GammaMatrix,
    pub s_prime: usize,
    /// `k_1 < ... < k_s'`, 1-based.
    pub k_values: Vec<usize>,
    /// Row transform: reduced rows are `lambda * gamma + mu`.
    pub lambda: RatMatrix,
    pub mu: Vec<Rational>,
}

/// Row-reduces the difference matrix `d`; pivot columns become the `k_q`.
pub fn reduce_gamma(gamma: &GammaMatrix) -> ReducedGamma {
    let s = gamma.s();
    let h = gamma.n / 2;
    let mut aug: RatMatrix = gamma
        .differences()
        .into_iter()
        .enumerate()
        .map(|(p, mut row)| {
            row.extend((0..s).map(|q| if q == p { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h {
        let Some(p) = (r..s).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..s {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..h + s {
                    let d = &aug[r][j] * &f;
                    aug[i][j] -= d;
                }
            }
        }
        pivots.push(c + 1);
        r += 1;
    }
    let lambda: RatMatrix = aug.into_iter().map(|row| row[h..].to_vec()).collect();
    let size = Rational::from_integer(gamma.n.into());
    let mut rows = Vec::with_capacity(s);
    let mut mu = Vec::with_capacity(s);
    for l in &lambda {
        let row: Vec<Rational> = (0..gamma.n)
            .map(|i| l.iter().zip(&gamma.rows).fold(Rational::zero(), |a, (c, g)| a + c * &g[i]))
            .collect();
        let shift = -(row.iter().fold(Rational::zero(), |a, x| a + x) / &size);
        rows.push(row.into_iter().map(|x| x + &shift).collect());
        mu.push(shift);
    }
    ReducedGamma {
        gamma: GammaMatrix { n: gamma.n, rows },
        s_prime: pivots.len(),
        k_values: pivots,
        lambda,
        mu,
    }
}

/// Checks the reduced-form conditions directly and returns `(s', k)` when
/// they hold.
pub fn is_reduced(gamma: &GammaMatrix) -> Option<(usize, Vec<usize>)> {
    let n = gamma.n;
    let kappa = |k: usize| n - k + 1;
    let g = |p: usize, i: usize| gamma.get(p, i);
    let mut ks = Vec::new();
    for q in 1..=gamma.s() {
        match (1..=n / 2).find(|&k| g(q, k) != g(q, kappa(k))) {
            Some(k) if ks.len() + 1 == q => ks.push(k),
            Some(_) => return None,
            None => {}
        }
    }
    if !ks.windows(2).all(|w| w[0] < w[1]) {
        return None;
    }
    for (q0, &kq) in ks.iter().enumerate() {
        let q = q0 + 1;
        if g(q, kappa(kq)) - g(q, kq) != Rational::one() {
            return None;
        }
        for p in (1..=gamma.s()).filter(|&p| p != q) {
            if g(p, kq) != g(p, kappa(kq)) {
                return None;
            }
        }
    }
    for p in ks.len() + 1..=gamma.s() {
        if (1..=n / 2).any(|k| g(p, k) != g(p, kappa(k))) {
            return None;
        }
    }
    Some((ks.len(), ks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn trace_shift_and_independence() {
        let g = GammaMatrix::new(3, vec![ints(&[3, 0, 0])]).unwrap();
        assert_eq!(g.rows()[0], ints(&[2, -1, -1]));
        assert!(GammaMatrix::new(3, vec![ints(&[1, 1, 1])]).is_err());
        assert!(GammaMatrix::new(3, vec![ints(&[1, 0, 0]), ints(&[2, 0, 0])]).is_err());
        assert!(GammaMatrix::new(3, vec![ints(&[1, 0, 0]); 3]).is_err());
    }

    #[test]
    fn single_row_reduction() {
        let g = GammaMatrix::new(4, vec![ints(&[2, 0, 0, -2])]).unwrap();
        let r = reduce_gamma(&g);
        assert_eq!((r.s_prime, r.k_values.clone()), (1, vec![1]));
        assert_eq!(r.lambda, vec![vec![rat(-1, 4)]]);
        assert_eq!(r.gamma.rows()[0], vec![rat(-1, 2), int(0), int(0), rat(1, 2)]);
        assert_eq!(is_reduced(&r.gamma), Some((1, vec![1])));
        let again = reduce_gamma(&r.gamma);
        assert_eq!(again.gamma, r.gamma);
        assert_eq!(again.lambda, vec![vec![int(1)]]);
    }

    #[test]
    fn symmetric_row_has_no_pivot() {
        let g = GammaMatrix::new(4, vec![ints(&[1, -1, -1, 1])]).unwrap();
        let r = reduce_gamma(&g);
        assert_eq!(r.s_prime, 0);
        assert_eq!(is_reduced(&r.gamma), Some((0, vec![])));
    }

    #[test]
    fn unreduced_is_detected() {
        let g = GammaMatrix::new(4, vec![ints(&[2, 0, 0, -2])]).unwrap();
        assert_eq!(is_reduced(&g), None);
    }

    #[test]
    fn json_format() {
        let g = GammaMatrix::from_json(r#"{"s":1,"n":4,"gamma":[["1","0","0","-1"]]}"#).unwrap();
        assert_eq!(g.s(), 1);
        assert_eq!(GammaMatrix::from_json(&serde_json::to_string(&g.to_file()).unwrap()).unwrap(), g);
        assert!(GammaMatrix::from_json(r#"{"s":2,"n":4,"gamma":[["1","0","0","-1"]]}"#).is_err());
    }
}
