use lie_inv::exp_adjoint::lift;
use lie_inv::families::{build_st, build_t, build_t0, build_tgamma, is_reduced, reduce_gamma, theorem_basis, GammaMatrix};
use lie_inv::normalization::{normalize, NormalizeOptions};
use lie_inv::symbolic::{int, rat, Rational};
use lie_inv::verifier::certify_basis;
use proptest::prelude::*;

fn gamma_strategy() -> impl Strategy<Value = GammaMatrix> {
    (3usize..=6, 1usize..=2)
        .prop_flat_map(|(n, s)| prop::collection::vec(prop::collection::vec(-3i64..=3, n), s).prop_map(move |rows| (n, rows)))
        .prop_filter_map("independent rows", |(n, rows)| {
            let rows: Vec<Vec<Rational>> = rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
            GammaMatrix::new(n, rows).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduction_is_canonical(g in gamma_strategy()) {
        let r = reduce_gamma(&g);
        prop_assert!(is_reduced(&r.gamma).is_some());
        prop_assert_eq!(&reduce_gamma(&r.gamma).gamma, &r.gamma);
        let before = build_tgamma(&g).unwrap().coadjoint_profile();
        let after = build_tgamma(&r.gamma).unwrap().coadjoint_profile();
        prop_assert_eq!(before.n_invariants, after.n_invariants);
    }

    #[test]
    fn theorem_basis_certifies(g in gamma_strategy().prop_filter("small", |g| g.n() <= 5)) {
        let r = reduce_gamma(&g);
        let alg = build_tgamma(&r.gamma).unwrap();
        let cert = certify_basis(&theorem_basis(&r).all(), &alg).unwrap();
        prop_assert!(cert.passed, "rank {} of {}", cert.jacobian_rank, cert.expected_count);
    }
}

#[test]
fn family_dimensions_and_counts() {
    for n in 2..=6 {
        assert_eq!(build_t0(n).unwrap().coadjoint_profile().n_invariants, n / 2);
        assert_eq!(build_st(n).unwrap().dim(), n * (n + 1) / 2 - 1);
        assert_eq!(build_t(n).unwrap().dim(), n * (n + 1) / 2);
    }
}

#[test]
fn engine_agrees_with_determinants_on_t0() {
    for n in 3..=5 {
        let alg = build_t0(n).unwrap();
        let basis = normalize(&lift(&alg).unwrap(), NormalizeOptions::default());
        assert!(basis.certified, "n={n}");
        assert_eq!(basis.invariants.len(), n / 2);
    }
}

#[test]
fn reduced_example() {
    let g = GammaMatrix::new(4, vec![vec![int(2), int(0), int(0), int(-2)]]).unwrap();
    let r = reduce_gamma(&g);
    assert_eq!(r.gamma.rows()[0], vec![rat(-1, 2), int(0), int(0), rat(1, 2)]);
    assert_eq!(r.s_prime, 1);
    assert_eq!(r.k_values, vec![1]);
}
