use lie_inv::algebra::LieAlgebra;
use lie_inv::enveloping::{commutes_with_generators, pbw_reduce, symmetrize, NcPolynomial};
use lie_inv::families::catalog;
use lie_inv::symbolic::{int, RationalExpr, Var};
use proptest::prelude::*;

fn algebras() -> Vec<LieAlgebra> {
    vec![catalog::g48(&int(-1)), catalog::sl2(), catalog::heisenberg()]
}

/// Up to four words of length at most three over `dim` letters.
fn nc_strategy(dim: usize) -> impl Strategy<Value = NcPolynomial> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(1..=dim, 0..=3)), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(NcPolynomial::zero(), |acc, (c, w)| acc.add(&NcPolynomial::term(w, int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_normal_and_idempotent(which in 0usize..3, p in nc_strategy(3)) {
        let alg = &algebras()[which];
        let r = pbw_reduce(&p, alg);
        prop_assert!(r.is_normal());
        prop_assert_eq!(pbw_reduce(&r, alg), r);
    }

    #[test]
    fn reduction_respects_products(which in 0usize..3, p in nc_strategy(3), q in nc_strategy(3)) {
        let alg = &algebras()[which];
        let direct = pbw_reduce(&p.mul(&q), alg);
        let staged = pbw_reduce(&pbw_reduce(&p, alg).mul(&pbw_reduce(&q, alg)), alg);
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn reduction_is_linear(p in nc_strategy(4), q in nc_strategy(4), c in -3i64..=3) {
        let alg = catalog::g48(&int(-1));
        let lhs = pbw_reduce(&p.add(&q.scale(&int(c))), &alg);
        let rhs = pbw_reduce(&p, &alg).add(&pbw_reduce(&q, &alg).scale(&int(c)));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn symmetrized_coordinates_are_generators() {
    for i in 1..=4u32 {
        let s = symmetrize(&RationalExpr::var(Var::x(i))).unwrap();
        assert_eq!(s, NcPolynomial::generator(i as usize));
    }
}

#[test]
fn polynomial_invariants_give_central_elements() {
    let cases = [(catalog::sl2(), "4*x1*x3 + x2^2"), (catalog::g48(&int(-1)), "x1*x4 - x2*x3"), (catalog::heisenberg(), "x1")];
    for (alg, f) in cases {
        let f = lie_inv::symbolic::parse::parse_expr(f, &alg.var_names()).unwrap();
        let c = symmetrize(&f).unwrap();
        assert!(commutes_with_generators(&c, &alg).iter().all(NcPolynomial::is_zero), "{f:?}");
    }
}
