use std::collections::{BTreeMap, HashMap};

use lie_inv::symbolic::matrix::{numeric_rank, Matrix};
use lie_inv::symbolic::parse::parse_expr;
use lie_inv::symbolic::sample::Sampler;
use lie_inv::symbolic::{int, ExpScales, Rational, RationalExpr, Var, VarNames};
use proptest::prelude::*;

/// Sum of `c * x1^a x2^b t1^d` terms.
fn poly_strategy() -> impl Strategy<Value = RationalExpr> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3, 0u32..2), 0..4).prop_map(|terms| {
        terms.into_iter().fold(RationalExpr::zero(), |acc, (c, a, b, d)| {
            let m = RationalExpr::var(Var::x(1))
                .pow(a as i64)
                .unwrap()
                .mul(&RationalExpr::var(Var::x(2)).pow(b as i64).unwrap())
                .mul(&RationalExpr::var(Var::t(1)).pow(d as i64).unwrap());
            acc.add(&m.scale(&int(c)))
        })
    })
}

fn ratexpr_strategy() -> impl Strategy<Value = RationalExpr> {
    (poly_strategy(), poly_strategy())
        .prop_filter_map("nonzero denominator", |(n, d)| n.div(&d.add(&RationalExpr::var(Var::x(3)))).ok())
}

fn show(e: &RationalExpr) -> String {
    e.display(&VarNames::plain()).to_string()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in ratexpr_strategy(), b in ratexpr_strategy(), c in ratexpr_strategy()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn self_difference_is_zero(a in ratexpr_strategy()) {
        prop_assert_eq!(show(&a.sub(&a)), "0");
    }

    #[test]
    fn product_rule(f in ratexpr_strategy(), g in ratexpr_strategy()) {
        let scales = ExpScales::default();
        for v in [Var::x(1), Var::x(3), Var::t(1)] {
            let lhs = f.mul(&g).differentiate(v, &scales);
            let rhs = f.differentiate(v, &scales).mul(&g).add(&f.mul(&g.differentiate(v, &scales)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn substitution_commutes_with_derivative(f in ratexpr_strategy(), k in 1i64..5) {
        let mut bindings = BTreeMap::new();
        bindings.insert(Var::x(2), RationalExpr::from_int(k));
        bindings.insert(Var::t(1), RationalExpr::var(Var::x(3)).scale(&int(k)));
        // x1 is untouched by the bindings
        if let Ok(sub) = f.substitute(&bindings) {
            let a = f.partial(Var::x(1)).substitute(&bindings).unwrap();
            prop_assert_eq!(a, sub.partial(Var::x(1)));
        }
    }

    #[test]
    fn printed_expressions_reparse(f in ratexpr_strategy()) {
        let text = show(&f);
        prop_assert_eq!(parse_expr(&text, &VarNames::plain()).unwrap(), f);
    }

    #[test]
    fn determinant_algorithms_agree(entries in prop::collection::vec(poly_strategy(), 16), n in 1usize..=4) {
        let m = Matrix::from_fn(n, n, |i, j| entries[i * 4 + j].clone());
        prop_assert_eq!(m.det_cofactor(), m.det_bareiss().unwrap());
    }

    #[test]
    fn generic_rank_matches_sampled_rank(
        entries in prop::collection::vec(poly_strategy(), 12),
        dependent in any::<bool>(),
    ) {
        let mut rows: Vec<Vec<RationalExpr>> = entries.chunks(4).map(<[RationalExpr]>::to_vec).collect();
        if dependent {
            let combo: Vec<RationalExpr> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a.add(&b.scale(&int(2)))).collect();
            rows[2] = combo;
        }
        let m = Matrix::from_rows(rows);
        let mut best = 0;
        for seed in 0..5 {
            let mut s = Sampler::new(seed);
            let point: HashMap<Var, Rational> = s.point(m.vars());
            best = best.max(numeric_rank(&m, &point).unwrap_or(0));
        }
        prop_assert_eq!(m.generic_rank(), best);
    }
}

#[test]
fn scalar_and_structural_examples() {
    let names = VarNames::plain();
    let f = parse_expr("x1*x4 - x2*x3", &names).unwrap();
    assert_eq!(show(&f), "x1*x4 - x2*x3");
    assert_eq!(show(&f.sub(&f)), "0");
    let g = parse_expr("(x1^2*x4 - x2*x3)/x1", &names).unwrap();
    assert_eq!(show(&g.partial(Var::x(4))), "x1");
    assert_eq!(show(&g.partial(Var::x(2))), "-x3/x1");
}
