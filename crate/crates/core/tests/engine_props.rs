use lie_inv::exp_adjoint::lift;
use lie_inv::families::catalog;
use lie_inv::normalization::{normalize, replay, NormalizeOptions};
use lie_inv::symbolic::{int, rat};
use lie_inv::verifier;

#[test]
fn rescaling_keeps_the_count() {
    for (name, params) in catalog::instances() {
        let alg = catalog::build(&name, &params).unwrap();
        for c in [int(2), rat(-1, 3)] {
            let scaled = alg.scaled(&c);
            let a = normalize(&lift(&alg).unwrap(), NormalizeOptions::default());
            let b = normalize(&lift(&scaled).unwrap(), NormalizeOptions::default());
            assert_eq!(a.invariants.len(), b.invariants.len(), "{name} {params:?}");
            assert_eq!(a.certified, b.certified, "{name} {params:?}");
        }
    }
}

#[test]
fn normalization_is_deterministic_and_replayable() {
    for (name, params) in catalog::instances() {
        let alg = catalog::build(&name, &params).unwrap();
        let lifted = lift(&alg).unwrap();
        let a = normalize(&lifted, NormalizeOptions::default());
        let b = normalize(&lifted, NormalizeOptions::default());
        assert_eq!(a.invariants, b.invariants, "{name}");
        assert_eq!(a.trace, b.trace, "{name}");
        assert!(replay(&lifted, &a.trace).is_some(), "{name}");
    }
}

#[test]
fn certified_means_rho_matches_rank() {
    for (name, params) in catalog::instances() {
        let alg = catalog::build(&name, &params).unwrap();
        let basis = normalize(&lift(&alg).unwrap(), NormalizeOptions::default());
        assert!(basis.certified, "{name} {params:?}");
        assert_eq!(basis.rho, alg.coadjoint_profile().rank, "{name} {params:?}");
        let cert = verifier::certify_rational(&basis.invariants, &alg).unwrap();
        assert!(cert.passed, "{name} {params:?}");
    }
}
