//! Named algebras with known invariant bases.

use num_traits::{One, ToPrimitive};

use super::{build_st, build_t, build_t0, reduce_gamma, st_gamma, theorem_basis, FamilyError, GammaMatrix};
use crate::algebra::{default_basis, LieAlgebra};
use crate::symbolic::{int, rat, PowerProduct, Rational, RationalExpr, Var};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// `(parameter, default)`.
    pub params: &'static [(&'static str, &'static str)],
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "abelian",
        description: "abelian algebra of dimension n",
        params: &[("n", "3")],
    },
    CatalogEntry {
        name: "g3.1",
        description: "Heisenberg algebra, [e2,e3] = e1",
        params: &[],
    },
    CatalogEntry {
        name: "g4.8",
        description: "[e2,e3] = e1, [e1,e4] = (1+b)e1, [e2,e4] = e2, [e3,e4] = b e3",
        params: &[("b", "-1")],
    },
    CatalogEntry {
        name: "sl2",
        description: "sl(2) with e1 = e, e2 = h, e3 = f",
        params: &[],
    },
    CatalogEntry {
        name: "t0",
        description: "strictly upper triangular n x n matrices",
        params: &[("n", "4")],
    },
    CatalogEntry {
        name: "st",
        description: "trace-free upper triangular n x n matrices",
        params: &[("n", "4")],
    },
    CatalogEntry {
        name: "t",
        description: "upper triangular n x n matrices",
        params: &[("n", "4")],
    },
];

pub const MAX_FAMILY_N: usize = 7;

pub fn entry(name: &str) -> Result<&'static CatalogEntry, FamilyError> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| FamilyError::UnknownAlgebra(name.to_string()))
}

/// Resolved parameter values, defaults filled in.
fn resolve(entry: &CatalogEntry, given: &[(String, Rational)]) -> Result<Vec<Rational>, FamilyError> {
    for (name, _) in given {
        if !entry.params.iter().any(|(p, _)| p == name) {
            return Err(FamilyError::BadParam {
                name: name.clone(),
                message: format!("not a parameter of {}", entry.name),
            });
        }
    }
    Ok(entry
        .params
        .iter()
        .map(|(p, default)| {
            given
                .iter()
                .rev()
                .find(|(name, _)| name == p)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| crate::symbolic::parse_rational(default).expect("valid default"))
        })
        .collect())
}

fn size_param(v: &Rational, lo: usize, hi: usize) -> Result<usize, FamilyError> {
    v.is_integer()
        .then(|| v.to_integer().to_usize())
        .flatten()
        .filter(|n| (lo..=hi).contains(n))
        .ok_or_else(|| FamilyError::BadParam {
            name: "n".into(),
            message: format!("expected an integer in {lo}..={hi}, got {v}"),
        })
}

pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::new(default_basis(3), [(2, 3, vec![(1, int(1))])])
        .expect("valid")
        .with_name("g3.1")
}

pub fn g48(b: &Rational) -> LieAlgebra {
    LieAlgebra::new(
        default_basis(4),
        [
            (2, 3, vec![(1, int(1))]),
            (1, 4, vec![(1, Rational::one() + b)]),
            (2, 4, vec![(2, int(1))]),
            (3, 4, vec![(3, b.clone())]),
        ],
    )
    .expect("valid")
    .with_name(format!("g4.8(b={b})"))
    .with_generator_order(vec![1, 2, 3, 4], vec![1, 1, 1, -1])
    .expect("valid order")
}

pub fn sl2() -> LieAlgebra {
    LieAlgebra::new(
        default_basis(3),
        [(1, 2, vec![(1, int(-2))]), (1, 3, vec![(2, int(1))]), (2, 3, vec![(3, int(-2))])],
    )
    .expect("valid")
    .with_name("sl2")
}

pub fn build(name: &str, params: &[(String, Rational)]) -> Result<LieAlgebra, FamilyError> {
    let e = entry(name)?;
    let v = resolve(e, params)?;
    Ok(match name {
        "abelian" => LieAlgebra::abelian(size_param(&v[0], 1, 64)?).with_name(format!("abelian({})", v[0])),
        "g3.1" => heisenberg(),
        "g4.8" => g48(&v[0]),
        "sl2" => sl2(),
        "t0" => build_t0(size_param(&v[0], 2, MAX_FAMILY_N)?)?,
        "st" => build_st(size_param(&v[0], 2, MAX_FAMILY_N)?)?,
        "t" => build_t(size_param(&v[0], 2, MAX_FAMILY_N)?)?,
        _ => unreachable!("entry exists"),
    })
}

fn x(k: usize) -> RationalExpr {
    RationalExpr::var(Var::x(k as u32))
}

/// A known basis of invariants for the catalog algebra.
pub fn golden_basis(name: &str, params: &[(String, Rational)]) -> Result<Vec<PowerProduct>, FamilyError> {
    let e = entry(name)?;
    let v = resolve(e, params)?;
    let exprs: Vec<PowerProduct> = match name {
        "abelian" => (1..=size_param(&v[0], 1, 64)?).map(|k| x(k).into()).collect(),
        "g3.1" => vec![x(1).into()],
        "g4.8" if v[0] == -Rational::one() => vec![x(1).into(), x(1).mul(&x(4)).sub(&x(2).mul(&x(3))).into()],
        "g4.8" => Vec::new(),
        "sl2" => vec![x(2).mul(&x(2)).add(&x(1).mul(&x(3)).scale(&int(4))).into()],
        "t0" => {
            let n = size_param(&v[0], 2, MAX_FAMILY_N)?;
            theorem_basis(&reduce_gamma(&GammaMatrix::empty(n)?)).all()
        }
        "st" | "t" => {
            let n = size_param(&v[0], 2, MAX_FAMILY_N)?;
            let mut b = theorem_basis(&reduce_gamma(&st_gamma(n)?)).all();
            if name == "t" {
                b.push(x(build_t(n)?.dim()).into());
            }
            b
        }
        _ => unreachable!("entry exists"),
    };
    Ok(exprs)
}

/// Fixed instances used for sweeps: every fixed algebra, `g4.8` at
/// `b = -1, 1/2, 1`, and the triangular families for `n = 2..=4`.
pub fn instances() -> Vec<(String, Vec<(String, Rational)>)> {
    let mut out: Vec<(String, Vec<(String, Rational)>)> = vec![
        ("abelian".into(), vec![("n".into(), int(2))]),
        ("g3.1".into(), vec![]),
        ("sl2".into(), vec![]),
    ];
    for b in [int(-1), rat(1, 2), int(1)] {
        out.push(("g4.8".into(), vec![("b".into(), b)]));
    }
    for name in ["t0", "st", "t"] {
        for n in 2..=4 {
            out.push((name.into(), vec![("n".into(), int(n))]));
        }
    }
    out
}

/// `"b=-1"` into `("b", -1)`.
pub fn parse_param(s: &str) -> Result<(String, Rational), FamilyError> {
    let bad = |message: &str| FamilyError::BadParam {
        name: s.to_string(),
        message: message.to_string(),
    };
    let (name, value) = s.split_once('=').ok_or_else(|| bad("expected NAME=VALUE"))?;
    let value = crate::symbolic::parse_rational(value).ok_or_else(|| bad("invalid rational value"))?;
    Ok((name.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier;

    #[test]
    fn every_instance_is_valid_and_certified() {
        for (name, params) in instances() {
            let alg = build(&name, &params).unwrap();
            alg.validate().unwrap();
            assert!(alg.coadjoint_profile().is_rank_even());
            let basis = golden_basis(&name, &params).unwrap();
            let cert = verifier::certify_basis(&basis, &alg).unwrap();
            assert!(cert.passed, "{name} {params:?}: {cert:?}");
        }
    }

    #[test]
    fn parameters() {
        assert_eq!(parse_param("b=-1").unwrap(), ("b".to_string(), int(-1)));
        assert_eq!(parse_param("b = 1/2").unwrap().1, rat(1, 2));
        assert!(parse_param("b").is_err());
        assert!(build("g4.8", &[("c".into(), int(1))]).is_err());
        assert!(build("t0", &[("n".into(), int(8))]).is_err());
        assert!(build("t0", &[("n".into(), rat(5, 2))]).is_err());
        assert_eq!(build("nope", &[]).unwrap_err(), FamilyError::UnknownAlgebra("nope".into()));
        assert_eq!(build("g4.8", &[]).unwrap().structure_constant(1, 4, 1), int(0));
    }
}
