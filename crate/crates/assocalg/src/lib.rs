//! Exact-arithmetic toolkit for finite-dimensional associative algebras
//! given by structure constants: derivation Lie algebras via the Leibniz
//! linear system, symbolic verification of parametric automorphism families,
//! and a brute-force finite-field census as an independent cross-check.

pub mod algebra;
pub mod audit;
pub mod aut;
pub mod catalog;
pub mod census;
pub mod deriv;
pub mod linalg;
pub mod parse;
pub mod scalar;
