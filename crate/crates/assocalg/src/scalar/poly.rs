//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial lives in a [`PolyRing`], a fixed ordered list of parameter
//! names. Terms are kept in a `BTreeMap` keyed by exponent vector, so equal
//! polynomials have identical representations and the leading term under the
//! lexicographic order on the declared list is the maximal key.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use super::{Rat, ScalarError};

/// An ordered list of parameter names shared by all polynomials of a context.
#[derive(Clone, Debug, Eq)]
pub struct PolyRing(Arc<Vec<String>>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PolyRing {
    /// Builds a ring over the given parameter names. Duplicates are rejected.
    pub fn new<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            assert!(!vars[..i].contains(v), "duplicate parameter `{v}`");
        }
        PolyRing(Arc::new(vars))
    }

    /// The ring with no parameters: plain rationals.
    pub fn empty() -> Self {
        PolyRing(Arc::new(Vec::new()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// Ring over the union of both parameter lists, sorted by name.
    pub fn union(&self, other: &PolyRing) -> PolyRing {
        let mut vars: Vec<String> = self.0.iter().chain(other.0.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        PolyRing(Arc::new(vars))
    }

    pub fn describe(&self) -> String {
        self.0.join(", ")
    }
}

/// Exponent vector over a ring's parameter list.
pub type Monomial = Vec<u16>;

/// A sparse multivariate polynomial with rational coefficients.
///
/// Invariant: no stored zero coefficients; every exponent vector has the
/// ring's length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(ring: &PolyRing) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &PolyRing, c: Rat) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.num_vars()], c);
        }
        p
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn var(ring: &PolyRing, idx: usize) -> Self {
        assert!(idx < ring.num_vars());
        let mut exp = vec![0u16; ring.num_vars()];
        exp[idx] = 1;
        let mut p = Self::zero(ring);
        p.terms.insert(exp, Rat::one());
        p
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` iff the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    fn check_ring(&self, other: &MultiPoly) -> Result<(), ScalarError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(ScalarError::RingMismatch(
                self.ring.describe(),
                other.ring.describe(),
            ))
        }
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, ScalarError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, ScalarError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, ScalarError> {
        self.check_ring(other)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                Self::insert_term(&mut terms, m, ca * cb);
            }
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    // Internal unchecked versions; rings are managed by the callers.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.try_add(other).expect("ring mismatch")
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.try_sub(other).expect("ring mismatch")
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.try_mul(other).expect("ring mismatch")
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term under lex on the declared parameter list.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, idx: usize) -> u16 {
        self.terms.keys().map(|m| m[idx]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn vars_used(&self) -> Vec<usize> {
        let n = self.ring.num_vars();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }

    /// Reinterprets the polynomial in a ring whose parameter list contains all
    /// variables used here.
    pub fn map_ring(&self, target: &PolyRing) -> Result<MultiPoly, ScalarError> {
        if self.ring == *target {
            return Ok(self.clone());
        }
        let mut index = Vec::with_capacity(self.ring.num_vars());
        for v in self.ring.vars() {
            match target.var_index(v) {
                Some(i) => index.push(i),
                None => {
                    // Unused variables may be dropped silently.
                    if self.terms.keys().any(|m| m[index.len()] > 0) {
                        return Err(ScalarError::UnknownParameter(v.clone()));
                    }
                    index.push(usize::MAX);
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exp = vec![0u16; target.num_vars()];
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    exp[index[i]] = e;
                }
            }
            terms.insert(exp, c.clone());
        }
        Ok(MultiPoly {
            ring: target.clone(),
            terms,
        })
    }

    /// Full evaluation; `values` is indexed like the ring's parameter list.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.ring.num_vars());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Splits an affine-linear polynomial over the given symbol indices into
    /// (constant part, coefficient of each symbol). The constant part and the
    /// coefficients may involve the remaining variables. Errors when any term
    /// has combined degree ≥ 2 in the symbols.
    pub fn extract_linear(
        &self,
        symbols: &[usize],
    ) -> Result<(MultiPoly, Vec<MultiPoly>), String> {
        let mut constant = MultiPoly::zero(&self.ring);
        let mut coeffs = vec![MultiPoly::zero(&self.ring); symbols.len()];
        for (m, c) in &self.terms {
            let deg: u32 = symbols.iter().map(|&s| m[s] as u32).sum();
            match deg {
                0 => Self::insert_term(&mut constant.terms, m.clone(), c.clone()),
                1 => {
                    let pos = symbols.iter().position(|&s| m[s] == 1).unwrap();
                    let mut rest = m.clone();
                    rest[symbols[pos]] = 0;
                    Self::insert_term(&mut coeffs[pos].terms, rest, c.clone());
                }
                _ => {
                    return Err(format!(
                        "term of degree {deg} in pattern symbols: {self}"
                    ))
                }
            }
        }
        Ok((constant, coeffs))
    }

    /// gcd of all coefficients times the sign of the leading coefficient.
    pub fn content(&self) -> Rat {
        let mut num = num::BigInt::zero();
        let mut den = num::BigInt::one();
        for c in self.terms.values() {
            num = num::Integer::gcd(&num, c.numer());
            den = num::Integer::lcm(&den, c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        let mut content = Rat::new(num, den);
        if let Some((_, lead)) = self.leading() {
            if lead.is_negative() {
                content = -content;
            }
        }
        content
    }

    /// Componentwise minimum exponent vector over all terms.
    pub fn common_monomial(&self) -> Monomial {
        let n = self.ring.num_vars();
        let mut min = vec![u16::MAX; n];
        for m in self.terms.keys() {
            for i in 0..n {
                min[i] = min[i].min(m[i]);
            }
        }
        if self.terms.is_empty() {
            min = vec![0; n];
        }
        min
    }

    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        k.iter().zip(m).map(|(a, b)| a - b).collect(),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Exact multivariate division; `None` when the divisor does not divide
    /// this polynomial exactly.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(&self.ring);
        let (dm, dc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            if !rm.iter().zip(&dm).all(|(a, b)| a >= b) {
                return None;
            }
            let m: Monomial = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let mut t = MultiPoly::zero(&self.ring);
            t.terms.insert(m, c);
            rem = rem.sub(&t.mul(divisor));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    /// Remainder of multivariate division by a list of polynomials
    /// (lead-term reduction, lex order).
    pub fn reduce_mod(&self, eqs: &[MultiPoly]) -> MultiPoly {
        let eqs: Vec<&MultiPoly> = eqs.iter().filter(|e| !e.is_zero()).collect();
        if eqs.is_empty() {
            return self.clone();
        }
        let mut rem = MultiPoly::zero(&self.ring);
        let mut work = self.clone();
        'outer: while !work.is_zero() {
            let (wm, wc) = {
                let (m, c) = work.leading().unwrap();
                (m.clone(), c.clone())
            };
            for eq in &eqs {
                let (em, ec) = eq.leading().unwrap();
                if wm.iter().zip(em).all(|(a, b)| a >= b) {
                    let m: Monomial = wm.iter().zip(em).map(|(a, b)| a - b).collect();
                    let mut t = MultiPoly::zero(&self.ring);
                    t.terms.insert(m, &wc / ec);
                    work = work.sub(&t.mul(eq));
                    continue 'outer;
                }
            }
            let mut t = MultiPoly::zero(&self.ring);
            t.terms.insert(wm.clone(), wc);
            rem = rem.add(&t);
            work = work.sub(&t);
        }
        rem
    }

    /// `Some(idx)` when at most one variable occurs; `None` otherwise.
    /// A constant reports `Some(0)` only for nonempty rings, callers treat
    /// constants separately.
    pub fn single_var(&self) -> Option<usize> {
        let used = self.vars_used();
        match used.len() {
            0 => None,
            1 => Some(used[0]),
            _ => None,
        }
    }

    /// Univariate gcd in ℚ[x] for two polynomials using only variable `idx`.
    pub fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, idx: usize) -> MultiPoly {
        let to_coeffs = |p: &MultiPoly| -> Vec<Rat> {
            let deg = p.degree_in(idx) as usize;
            let mut cs = vec![Rat::zero(); deg + 1];
            for (m, c) in &p.terms {
                cs[m[idx] as usize] = c.clone();
            }
            cs
        };
        let trim = |v: &mut Vec<Rat>| {
            while v.last().map_or(false, |c| c.is_zero()) {
                v.pop();
            }
        };
        let mut f = to_coeffs(a);
        let mut g = to_coeffs(b);
        trim(&mut f);
        trim(&mut g);
        while !g.is_empty() {
            // f mod g
            while f.len() >= g.len() && !f.is_empty() {
                let k = f.len() - g.len();
                let q = f.last().unwrap() / g.last().unwrap();
                for (i, gc) in g.iter().enumerate() {
                    let delta = gc * &q;
                    f[k + i] -= delta;
                }
                trim(&mut f);
            }
            std::mem::swap(&mut f, &mut g);
        }
        // back to a (monic) polynomial
        let mut p = MultiPoly::zero(&a.ring);
        if let Some(lead) = f.last().cloned() {
            for (e, c) in f.into_iter().enumerate() {
                if !c.is_zero() {
                    let mut m = vec![0u16; a.ring.num_vars()];
                    m[idx] = e as u16;
                    p.terms.insert(m, c / &lead);
                }
            }
        }
        p
    }
}

fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending lex order so the leading term prints first
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[i], e)),
                }
            }
            let abs = c.abs();
            let mut parts = Vec::new();
            if factors.is_empty() || !abs.is_one() {
                parts.push(fmt_rat(&abs));
            }
            parts.extend(factors);
            let body = parts.join("*");
            if first {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ring_ab() -> PolyRing {
        PolyRing::new(["a", "b"])
    }

    #[test]
    fn monomial_product() {
        let r = ring_ab();
        let a = MultiPoly::var(&r, 0);
        let sq = a.mul(&a);
        assert_eq!(sq.to_string(), "a^2");
    }

    #[test]
    fn self_cancellation() {
        let r = ring_ab();
        let a = MultiPoly::var(&r, 0);
        let b = MultiPoly::var(&r, 1);
        let p = a.mul(&a).sub(&b);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = PolyRing::new(["alpha"]);
        let x = MultiPoly::var(&r, 0);
        let one = MultiPoly::one(&r);
        let p = x.sub(&one).mul(&x.add(&one));
        assert_eq!(p, x.mul(&x).sub(&one));
        assert_eq!(p.to_string(), "alpha^2 - 1");
    }

    #[test]
    fn mismatched_rings_error() {
        let p = MultiPoly::var(&ring_ab(), 0);
        let q = MultiPoly::var(&PolyRing::new(["c"]), 0);
        assert!(matches!(
            p.try_add(&q),
            Err(ScalarError::RingMismatch(_, _))
        ));
    }

    #[test]
    fn exact_division() {
        let r = ring_ab();
        let a = MultiPoly::var(&r, 0);
        let b = MultiPoly::var(&r, 1);
        let p = a.add(&b).mul(&a.sub(&b));
        assert_eq!(p.div_exact(&a.add(&b)).unwrap(), a.sub(&b));
        assert!(a.mul(&a).div_exact(&b).is_none());
    }

    #[test]
    fn binomial_identity() {
        // (p+q)^2 = p^2 + 2pq + q^2
        let r = ring_ab();
        let p = MultiPoly::var(&r, 0).add(&MultiPoly::constant(&r, rat(2, 3)));
        let q = MultiPoly::var(&r, 1).mul(&MultiPoly::var(&r, 0));
        let lhs = p.add(&q).pow(2);
        let rhs = p.pow(2).add(&p.mul(&q).scale(&rat(2, 1))).add(&q.pow(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn univariate_gcd_common_factor() {
        let r = PolyRing::new(["a"]);
        let x = MultiPoly::var(&r, 0);
        let one = MultiPoly::one(&r);
        let g = MultiPoly::univariate_gcd(&x.mul(&x).sub(&one), &x.sub(&one), 0);
        assert_eq!(g, x.sub(&one));
    }
}
