//! Reduced rational functions num/den over a polynomial ring.
//!
//! Reduction removes the coefficient content, common monomial factors, exact
//! polynomial divisors, and (when numerator and denominator share a single
//! variable) the univariate gcd; the denominator is normalized monic. That is
//! enough to put every family the catalog ships in canonical form. Equality
//! is decided by cross-multiplication and is therefore independent of how far
//! reduction got.

use std::fmt;

use num::{One, Zero};

use super::{MultiPoly, PolyRing, Rat, ScalarError};

/// A rational function with nonzero denominator.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut rf = RatFun { num, den };
        rf.reduce();
        Ok(rf)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.ring());
        RatFun { num: p, den }
    }

    pub fn from_rat(ring: &PolyRing, c: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Self::from_rat(ring, Rat::zero())
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::from_rat(ring, Rat::one())
    }

    pub fn var(ring: &PolyRing, idx: usize) -> Self {
        Self::from_poly(MultiPoly::var(ring, idx))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> &PolyRing {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// `Some(p)` iff the denominator is 1.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.den.ring());
            return;
        }
        // common monomial factor
        let mn = self.num.common_monomial();
        let md = self.den.common_monomial();
        let common: Vec<u16> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&e| e > 0) {
            self.num = self.num.div_monomial(&common);
            self.den = self.den.div_monomial(&common);
        }
        // exact polynomial division either way
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = MultiPoly::one(self.den.ring());
        } else if let Some(q) = self.den.div_exact(&self.num) {
            self.num = MultiPoly::one(self.num.ring());
            self.den = q;
        } else if let (Some(vn), Some(vd)) = (self.num.single_var(), self.den.single_var()) {
            if vn == vd {
                let g = MultiPoly::univariate_gcd(&self.num, &self.den, vn);
                if g.total_degree() > 0 {
                    self.num = self.num.div_exact(&g).expect("gcd divides");
                    self.den = self.den.div_exact(&g).expect("gcd divides");
                }
            }
        }
        // monic denominator
        let lead = self
            .den
            .leading()
            .map(|(_, c)| c.clone())
            .expect("nonzero denominator");
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFun::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, ScalarError> {
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn map_ring(&self, target: &PolyRing) -> Result<RatFun, ScalarError> {
        Ok(RatFun {
            num: self.num.map_ring(target)?,
            den: self.den.map_ring(target)?,
        })
    }

    /// Evaluation at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, values: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(values) / d)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = if self.den.num_terms() > 1 {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

/// Field context for exact linear algebra over rational functions.
#[derive(Clone, Debug)]
pub struct RfCtx {
    pub ring: PolyRing,
}

impl RfCtx {
    pub fn new(ring: PolyRing) -> Self {
        RfCtx { ring }
    }

    pub fn rational() -> Self {
        RfCtx {
            ring: PolyRing::empty(),
        }
    }
}
