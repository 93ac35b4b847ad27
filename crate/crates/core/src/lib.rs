//! Invariants of Lie algebras by algebraic moving frames.

pub mod algebra;
pub mod enveloping;
pub mod exp_adjoint;
pub mod families;
pub mod normalization;
pub mod symbolic;
pub mod verifier;
