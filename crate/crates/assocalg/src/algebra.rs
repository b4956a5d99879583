//! Structure-constant presentation of a finite-dimensional algebra and the
//! basic primitives on it: products, associativity checking, center and
//! centralizer.
//!
//! Convention: `gamma(i, j, k)` is the coefficient of `e_k` in `e_i · e_j`
//! (0-based indices internally, 1-based in all printed output). Products not
//! stated in a table are zero.

use crate::linalg::{nullspace, FieldCtx, Mat, Subspace};
use crate::scalar::{PolyRing, RatFun, RfCtx};

pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the dense storage bound {MAX_DIM}")]
    TooLarge(usize),
}

/// An algebra given by its structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraTable {
    name: Option<String>,
    dim: usize,
    ring: PolyRing,
    gamma: Vec<RatFun>,
}

/// One failed associativity triple with its residual `(eᵢeⱼ)eₖ − eᵢ(eⱼeₖ)`.
#[derive(Clone, Debug)]
pub struct AssocViolation {
    /// 1-based basis indices.
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<RatFun>,
}

impl AlgebraTable {
    pub fn zero(name: Option<String>, dim: usize, ring: PolyRing) -> Result<Self, AlgebraError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(AlgebraError::TooLarge(dim));
        }
        Ok(AlgebraTable {
            name,
            dim,
            gamma: vec![RatFun::zero(&ring); dim * dim * dim],
            ring,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn ctx(&self) -> RfCtx {
        RfCtx::new(self.ring.clone())
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &RatFun {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_gamma(&mut self, i: usize, j: usize, k: usize, v: RatFun) {
        self.gamma[(i * self.dim + j) * self.dim + k] = v;
    }

    /// True when no structure constant involves a parameter.
    pub fn is_constant(&self) -> bool {
        self.gamma.iter().all(|g| g.as_rational().is_some())
    }

    pub fn basis_element(&self, i: usize) -> Vec<RatFun> {
        let mut v = vec![RatFun::zero(&self.ring); self.dim];
        v[i] = RatFun::one(&self.ring);
        v
    }

    /// `(x·y)ₖ = Σᵢⱼ xᵢ yⱼ γᵏᵢⱼ`.
    pub fn multiply(&self, x: &[RatFun], y: &[RatFun]) -> Result<Vec<RatFun>, AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::DimMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if y.len() != self.dim {
            return Err(AlgebraError::DimMismatch {
                expected: self.dim,
                got: y.len(),
            });
        }
        let mut out = vec![RatFun::zero(&self.ring); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = x[i].mul(&y[j]);
                for k in 0..self.dim {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        out[k] = out[k].add(&c.mul(g));
                    }
                }
            }
        }
        Ok(out)
    }

    /// All basis triples violating `(eᵢeⱼ)eₖ = eᵢ(eⱼeₖ)`.
    pub fn check_associativity(&self) -> Vec<AssocViolation> {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let eij = self
                    .multiply(&self.basis_element(i), &self.basis_element(j))
                    .unwrap();
                for k in 0..n {
                    let left = self.multiply(&eij, &self.basis_element(k)).unwrap();
                    let ejk = self
                        .multiply(&self.basis_element(j), &self.basis_element(k))
                        .unwrap();
                    let right = self.multiply(&self.basis_element(i), &ejk).unwrap();
                    let residual: Vec<RatFun> = left
                        .iter()
                        .zip(&right)
                        .map(|(l, r)| l.sub(r))
                        .collect();
                    if residual.iter().any(|r| !r.is_zero()) {
                        violations.push(AssocViolation {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            residual,
                        });
                    }
                }
            }
        }
        violations
    }

    /// Two-sided annihilator `{x : x·eⱼ = eⱼ·x = 0 ∀j}`.
    pub fn center(&self) -> Subspace<RatFun> {
        let h: Vec<Vec<RatFun>> = (0..self.dim).map(|i| self.basis_element(i)).collect();
        self.centralizer(&h).expect("basis has matching dimension")
    }

    /// Coefficient rows of the linear system `x·h = h·x = 0 ∀ h ∈ H` in the
    /// unknown coordinates of x.
    pub fn annihilation_system(&self, h: &[Vec<RatFun>]) -> Mat<RatFun> {
        let n = self.dim;
        let ctx = self.ctx();
        // rows: for each h and output coordinate k, x·h = 0 and h·x = 0
        let mut rows = Vec::with_capacity(2 * h.len() * n);
        for hv in h {
            for k in 0..n {
                let mut left = vec![ctx.zero(); n];
                let mut right = vec![ctx.zero(); n];
                for i in 0..n {
                    for j in 0..n {
                        let g = self.gamma(i, j, k);
                        if g.is_zero() {
                            continue;
                        }
                        // (x·h)ₖ: x contributes through slot i
                        left[i] = left[i].add(&hv[j].mul(g));
                        // (h·x)ₖ: x contributes through slot j
                        right[j] = right[j].add(&hv[i].mul(g));
                    }
                }
                rows.push(left);
                rows.push(right);
            }
        }
        if rows.is_empty() {
            return Mat::filled(0, n, ctx.zero());
        }
        Mat::from_rows(rows)
    }

    /// `{x : x·h = h·x = 0 ∀ h ∈ H}`, an exact null space.
    pub fn centralizer(&self, h: &[Vec<RatFun>]) -> Result<Subspace<RatFun>, AlgebraError> {
        let n = self.dim;
        let ctx = self.ctx();
        for v in h {
            if v.len() != n {
                return Err(AlgebraError::DimMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let m = self.annihilation_system(h);
        if m.rows == 0 {
            let full: Vec<Vec<RatFun>> = (0..n).map(|i| self.basis_element(i)).collect();
            return Ok(Subspace::from_vectors(&ctx, full, n));
        }
        Ok(Subspace::from_echelon(nullspace(&ctx, &m), n))
    }

    /// Span of all products `eᵢ·eⱼ` (the subspace A²).
    pub fn square_span(&self) -> Subspace<RatFun> {
        let ctx = self.ctx();
        let mut vectors = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v: Vec<RatFun> = (0..self.dim)
                    .map(|k| self.gamma(i, j, k).clone())
                    .collect();
                if v.iter().any(|c| !c.is_zero()) {
                    vectors.push(v);
                }
            }
        }
        Subspace::from_vectors(&ctx, vectors, self.dim)
    }

    /// Transports the table along an invertible basis change `m` (columns are
    /// the images of the old basis vectors). Used to generate associative
    /// test tables with dense entries.
    pub fn conjugate(&self, m: &Mat<RatFun>) -> Option<AlgebraTable> {
        let ctx = self.ctx();
        let n = self.dim;
        assert_eq!(m.rows, n);
        let minv = crate::linalg::inverse(&ctx, m)?;
        let mut out = AlgebraTable::zero(None, n, self.ring.clone()).unwrap();
        // new basis f_i = Σ_u m[u][i] e_u;  f_i f_j expressed back in f-basis
        for i in 0..n {
            for j in 0..n {
                let fi: Vec<RatFun> = (0..n).map(|u| m.at(u, i).clone()).collect();
                let fj: Vec<RatFun> = (0..n).map(|u| m.at(u, j).clone()).collect();
                let prod = self.multiply(&fi, &fj).unwrap();
                for k in 0..n {
                    let mut c = ctx.zero();
                    for u in 0..n {
                        c = c.add(&minv.at(k, u).mul(&prod[u]));
                    }
                    out.set_gamma(i, j, k, c);
                }
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    pub fn as_2_1() -> AlgebraTable {
        // e1 e1 = e2
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_2^1".into()), 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::one(&ring));
        a
    }

    pub fn as_3_8() -> AlgebraTable {
        // e1 e3 = e1, e2 e3 = e2, e3 e1 = e1, e3 e3 = e3
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_3^8".into()), 3, ring.clone()).unwrap();
        a.set_gamma(0, 2, 0, RatFun::one(&ring));
        a.set_gamma(1, 2, 1, RatFun::one(&ring));
        a.set_gamma(2, 0, 0, RatFun::one(&ring));
        a.set_gamma(2, 2, 2, RatFun::one(&ring));
        a
    }

    #[test]
    fn basis_products() {
        let a = as_2_1();
        let e1 = a.basis_element(0);
        let prod = a.multiply(&e1, &e1).unwrap();
        assert_eq!(prod, a.basis_element(1));

        let b = as_3_8();
        let e3 = b.basis_element(2);
        assert_eq!(b.multiply(&e3, &e3).unwrap(), e3);

        let zero = vec![RatFun::zero(a.ring()); 2];
        assert_eq!(a.multiply(&zero, &e1).unwrap(), zero);
    }

    #[test]
    fn associativity_of_fixtures() {
        assert!(as_2_1().check_associativity().is_empty());
        assert!(as_3_8().check_associativity().is_empty());
        let zero = AlgebraTable::zero(None, 3, PolyRing::empty()).unwrap();
        assert!(zero.check_associativity().is_empty());
    }

    #[test]
    fn broken_table_has_violation() {
        // e1e1 = e2, e2e1 = e1 is not associative: (e1e1)e1 = e1 but
        // e1(e1e1) = 0
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(None, 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::one(&ring));
        a.set_gamma(1, 0, 0, RatFun::one(&ring));
        let violations = a.check_associativity();
        assert!(violations.iter().any(|v| (v.i, v.j, v.k) == (1, 1, 1)));
    }

    #[test]
    fn centers() {
        let ctx = RfCtx::rational();
        let zero = AlgebraTable::zero(None, 2, PolyRing::empty()).unwrap();
        assert_eq!(zero.center().dim(), 2);

        assert_eq!(as_3_8().center().dim(), 0);

        let a = as_2_1();
        let z = a.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&ctx, &a.basis_element(1)));
    }

    #[test]
    fn centralizer_cases() {
        let a = as_2_1();
        // empty constraint set: whole space
        assert_eq!(a.centralizer(&[]).unwrap().dim(), 2);
        // e2 annihilates everything in As_2^1
        assert_eq!(a.centralizer(&[a.basis_element(1)]).unwrap().dim(), 2);
        // centralizer of a basis equals the center
        let h: Vec<_> = (0..2).map(|i| a.basis_element(i)).collect();
        assert_eq!(a.centralizer(&h).unwrap(), a.center());
    }

    #[test]
    fn multiply_is_bilinear() {
        let a = as_3_8();
        let ring = a.ring().clone();
        let s = |n: i64, d: i64| RatFun::from_rat(&ring, rat(n, d));
        let x: Vec<RatFun> = vec![s(1, 2), s(-3, 1), s(2, 5)];
        let y: Vec<RatFun> = vec![s(0, 1), s(7, 3), s(1, 1)];
        let z: Vec<RatFun> = vec![s(4, 1), s(-1, 2), s(5, 7)];
        let ca = s(3, 4);
        let cb = s(-2, 3);
        let lin: Vec<RatFun> = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| ca.mul(xi).add(&cb.mul(yi)))
            .collect();
        let lhs = a.multiply(&lin, &z).unwrap();
        let rhs: Vec<RatFun> = a
            .multiply(&x, &z)
            .unwrap()
            .iter()
            .zip(&a.multiply(&y, &z).unwrap())
            .map(|(u, v)| ca.mul(u).add(&cb.mul(v)))
            .collect();
        assert_eq!(lhs, rhs);
    }
}
