//! Seeded random rational sample points for genericity checks.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::var::{Var, VarKind};
use super::Rational;

/// Deterministic source of sample values: integers in `[-99, 99]`, with zero
/// excluded for exponential units (they stand for exponentials).
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn value(&mut self, v: Var) -> Rational {
        loop {
            let k: i64 = self.rng.gen_range(-99..=99);
            if k != 0 || v.kind != VarKind::ExpUnit {
                return Rational::from_integer(k.into());
            }
        }
    }

    pub fn point(&mut self, vars: impl IntoIterator<Item = Var>) -> HashMap<Var, Rational> {
        vars.into_iter().map(|v| (v, self.value(v))).collect()
    }

    /// A nonzero value depending only on `(seed, v)`, so that a witness point
    /// does not depend on the order in which variables are first requested.
    pub fn keyed(seed: u64, v: Var) -> Rational {
        let kind = v.kind as u64;
        let key = seed ^ (kind << 40 | u64::from(v.index)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut s = Sampler::new(key);
        loop {
            let k: i64 = s.rng.gen_range(-99..=99);
            if k != 0 {
                return Rational::from_integer(k.into());
            }
        }
    }
}
