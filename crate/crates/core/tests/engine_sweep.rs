use std::time::Instant;

use lie_inv::exp_adjoint::lift;
use lie_inv::families::catalog;
use lie_inv::normalization::{normalize, NormalizeOptions};
use lie_inv::verifier;

#[test]
fn engine_on_catalog() {
    for (name, params) in catalog::instances() {
        let alg = catalog::build(&name, &params).unwrap();
        let start = Instant::now();
        let lifted = lift(&alg).unwrap();
        let basis = normalize(&lifted, NormalizeOptions::default());
        let names = alg.var_names();
        let shown: Vec<String> = basis.invariants.iter().map(|f| f.display(&names).to_string()).collect();
        eprintln!("{name} {params:?}: certified={} rho={} {:?} ({:?})", basis.certified, basis.rho, shown, start.elapsed());
        let cert = verifier::certify_rational(&basis.invariants, &alg).unwrap();
        assert!(cert.all_residuals_zero(), "{name}");
    }
}
