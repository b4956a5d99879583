//! Exact scalar arithmetic: rationals, sparse multivariate polynomials over
//! the rationals in named parameters, reduced rational functions, and
//! prime-field elements.
//!
//! Everything downstream (tables, linear systems, family verification) is
//! built on these types; no floating point appears anywhere in the crate.

pub mod fp;
mod poly;
mod ratfun;

pub use fp::{reduce_mod_p, FpCtx};
pub use poly::{Monomial, MultiPoly, PolyRing};
pub use ratfun::{RatFun, RfCtx};

use num::BigRational;

/// Arbitrary-precision rational number in canonical form
/// (reduced, positive denominator).
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched parameter lists: [{0}] vs [{1}]")]
    RingMismatch(String, String),
    #[error("denominator of {0} is divisible by p = {1}")]
    BadPrime(String, u64),
    #[error("unknown parameter `{0}` in target ring")]
    UnknownParameter(String),
}
