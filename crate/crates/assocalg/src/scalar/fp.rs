//! Prime-field scalars for the brute-force oracle.

use num::{BigInt, Integer, ToPrimitive, Zero};

use super::{Rat, ScalarError};

/// Reduces an exact rational into F_p. Errors when p divides the denominator.
pub fn reduce_mod_p(x: &Rat, p: u64) -> Result<u64, ScalarError> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(ScalarError::BadPrime(x.to_string(), p));
    }
    let num = x.numer().mod_floor(&pb);
    let num = num.to_u64().expect("reduced below p");
    let den = den.to_u64().expect("reduced below p");
    Ok(mul(num, inv(den, p), p))
}

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// Multiplicative inverse by Fermat's little theorem; `a` must be nonzero.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    pow(a, p - 2, p)
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field context over F_p for the generic elimination routines.
#[derive(Clone, Copy, Debug)]
pub struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < (1 << 31), "modulus too large");
        FpCtx { p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn half_mod_five() {
        assert_eq!(reduce_mod_p(&rat(1, 2), 5).unwrap(), 3);
    }

    #[test]
    fn negative_one_mod_seven() {
        assert_eq!(reduce_mod_p(&rat(-1, 1), 7).unwrap(), 6);
    }

    #[test]
    fn bad_prime() {
        assert!(matches!(
            reduce_mod_p(&rat(1, 2), 2),
            Err(ScalarError::BadPrime(_, 2))
        ));
    }

    #[test]
    fn ring_homomorphism() {
        // reduce(x*y) = reduce(x)*reduce(y) and same for + on random small inputs
        let p = 11;
        for a in -6i64..6 {
            for b in 1i64..6 {
                for c in -6i64..6 {
                    for d in 1i64..6 {
                        if b % p as i64 == 0 || d % p as i64 == 0 {
                            continue;
                        }
                        let x = rat(a, b);
                        let y = rat(c, d);
                        let prod = reduce_mod_p(&(x.clone() * y.clone()), p).unwrap();
                        let sum = reduce_mod_p(&(x.clone() + y.clone()), p).unwrap();
                        let rx = reduce_mod_p(&x, p).unwrap();
                        let ry = reduce_mod_p(&y, p).unwrap();
                        assert_eq!(prod, mul(rx, ry, p));
                        assert_eq!(sum, add(rx, ry, p));
                    }
                }
            }
        }
    }
}
