//! Exact dense linear algebra over an arbitrary field, driven by a field
//! context object (rationals, rational functions, or F_p).
//!
//! Elimination uses a fixed pivot rule — first nonzero entry scanning columns
//! left to right and rows top to bottom, pivot normalized to 1 — so reduced
//! echelon forms, null-space bases and therefore [`Subspace`] representations
//! are deterministic.

use std::fmt::Debug;

use crate::scalar::{fp, FpCtx, RatFun, RfCtx};

/// The field operations elimination needs.
pub trait FieldCtx: Clone {
    type El: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Division by a nonzero element.
    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
}

impl FieldCtx for RfCtx {
    type El = RatFun;

    fn zero(&self) -> RatFun {
        RatFun::zero(&self.ring)
    }

    fn one(&self) -> RatFun {
        RatFun::one(&self.ring)
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.add(b)
    }

    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.sub(b)
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.mul(b)
    }

    fn div(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.div(b).expect("division by zero")
    }

    fn neg(&self, a: &RatFun) -> RatFun {
        a.neg()
    }

    fn is_zero(&self, a: &RatFun) -> bool {
        a.is_zero()
    }
}

impl FieldCtx for FpCtx {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        fp::add(*a, *b, self.p)
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        fp::sub(*a, *b, self.p)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        fp::mul(*a, *b, self.p)
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        fp::mul(*a, fp::inv(*b, self.p), self.p)
    }

    fn neg(&self, a: &u64) -> u64 {
        fp::sub(0, *a, self.p)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn filled(rows: usize, cols: usize, fill: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn identity<C: FieldCtx<El = T>>(ctx: &C, n: usize) -> Self {
        let mut m = Mat::filled(n, n, ctx.zero());
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn matmul<C: FieldCtx<El = T>>(&self, ctx: &C, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::filled(self.rows, other.cols, ctx.zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                if ctx.is_zero(self.at(i, k)) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.add(out.at(i, j), &ctx.mul(self.at(i, k), other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref<C: FieldCtx>(ctx: &C, m: &mut Mat<C::El>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !ctx.is_zero(m.at(r, col))) else {
            continue;
        };
        if pr != row {
            for c in 0..m.cols {
                let a = m.at(row, c).clone();
                let b = m.at(pr, c).clone();
                m.set(row, c, b);
                m.set(pr, c, a);
            }
        }
        let inv_pivot = ctx.div(&ctx.one(), m.at(row, col));
        for c in col..m.cols {
            let v = ctx.mul(m.at(row, c), &inv_pivot);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r != row && !ctx.is_zero(m.at(r, col)) {
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = ctx.sub(m.at(r, c), &ctx.mul(&factor, m.at(row, c)));
                    m.set(r, c, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<C: FieldCtx>(ctx: &C, m: &Mat<C::El>) -> usize {
    let mut work = m.clone();
    rref(ctx, &mut work).len()
}

/// Reduced echelon basis of `{v : Mv = 0}`.
pub fn nullspace<C: FieldCtx>(ctx: &C, m: &Mat<C::El>) -> Vec<Vec<C::El>> {
    let mut work = m.clone();
    let pivots = rref(ctx, &mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![ctx.zero(); m.cols];
        v[fc] = ctx.one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(work.at(ri, fc));
        }
        basis.push(v);
    }
    // normalize the basis itself so the output is in reduced echelon form
    if basis.is_empty() {
        return basis;
    }
    let mut bm = Mat::from_rows(basis);
    rref(ctx, &mut bm);
    bm.row_vecs()
}

/// Exact determinant by fraction-producing elimination.
pub fn det<C: FieldCtx>(ctx: &C, m: &Mat<C::El>) -> C::El {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut work = m.clone();
    let mut acc = ctx.one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !ctx.is_zero(work.at(r, col))) else {
            return ctx.zero();
        };
        if pr != col {
            for c in 0..n {
                let a = work.at(col, c).clone();
                let b = work.at(pr, c).clone();
                work.set(col, c, b);
                work.set(pr, c, a);
            }
            acc = ctx.neg(&acc);
        }
        let pivot = work.at(col, col).clone();
        acc = ctx.mul(&acc, &pivot);
        for r in col + 1..n {
            if ctx.is_zero(work.at(r, col)) {
                continue;
            }
            let factor = ctx.div(work.at(r, col), &pivot);
            for c in col..n {
                let v = ctx.sub(work.at(r, c), &ctx.mul(&factor, work.at(col, c)));
                work.set(r, c, v);
            }
        }
    }
    acc
}

/// Exact inverse; `None` for singular input.
pub fn inverse<C: FieldCtx>(ctx: &C, m: &Mat<C::El>) -> Option<Mat<C::El>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Mat::filled(n, 2 * n, ctx.zero());
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.at(r, c).clone());
        }
        aug.set(r, n + r, ctx.one());
    }
    let pivots = rref(ctx, &mut aug);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    let mut out = Mat::filled(n, n, ctx.zero());
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, aug.at(r, n + c).clone());
        }
    }
    Some(out)
}

/// A linear subspace stored as a reduced-echelon basis, so two subspaces are
/// equal iff their representations are identical.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    basis: Vec<Vec<T>>,
    ambient: usize,
}

impl<T: Clone + PartialEq + Debug> Subspace<T> {
    pub fn from_vectors<C: FieldCtx<El = T>>(ctx: &C, vectors: Vec<Vec<T>>, ambient: usize) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        if vectors.is_empty() {
            return Subspace {
                basis: Vec::new(),
                ambient,
            };
        }
        let mut m = Mat::from_rows(vectors);
        let pivots = rref(ctx, &mut m);
        let basis = m.row_vecs().into_iter().take(pivots.len()).collect();
        Subspace { basis, ambient }
    }

    /// Basis already in reduced echelon form (e.g. from [`nullspace`]).
    pub fn from_echelon(basis: Vec<Vec<T>>, ambient: usize) -> Self {
        Subspace { basis, ambient }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn contains<C: FieldCtx<El = T>>(&self, ctx: &C, v: &[T]) -> bool {
        let mut vectors = self.basis.clone();
        vectors.push(v.to_vec());
        let m = Mat::from_rows(vectors);
        rank(ctx, &m) == self.dim()
    }

    pub fn intersect<C: FieldCtx<El = T>>(&self, ctx: &C, other: &Subspace<T>) -> Subspace<T> {
        assert_eq!(self.ambient, other.ambient);
        // x = a·U = b·V  ⟺  (a, b) in the null space of [Uᵀ | -Vᵀ]
        let k = self.dim();
        let l = other.dim();
        if k == 0 || l == 0 {
            return Subspace {
                basis: Vec::new(),
                ambient: self.ambient,
            };
        }
        let mut m = Mat::filled(self.ambient, k + l, ctx.zero());
        for (i, u) in self.basis.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, i, u[r].clone());
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for r in 0..self.ambient {
                m.set(r, k + j, ctx.neg(&v[r]));
            }
        }
        let sols = nullspace(ctx, &m);
        let vectors: Vec<Vec<T>> = sols
            .into_iter()
            .map(|ab| {
                let mut x = vec![ctx.zero(); self.ambient];
                for (i, u) in self.basis.iter().enumerate() {
                    for r in 0..self.ambient {
                        x[r] = ctx.add(&x[r], &ctx.mul(&ab[i], &u[r]));
                    }
                }
                x
            })
            .collect();
        Subspace::from_vectors(ctx, vectors, self.ambient)
    }

    pub fn is_subspace_of<C: FieldCtx<El = T>>(&self, ctx: &C, other: &Subspace<T>) -> bool {
        self.basis.iter().all(|v| other.contains(ctx, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, RatFun, RfCtx};

    fn q(n: i64, d: i64) -> RatFun {
        RatFun::from_rat(&crate::scalar::PolyRing::empty(), rat(n, d))
    }

    #[test]
    fn nullspace_identity_and_zero() {
        let ctx = RfCtx::rational();
        let id = Mat::identity(&ctx, 4);
        assert!(nullspace(&ctx, &id).is_empty());
        let z = Mat::filled(4, 4, ctx.zero());
        assert_eq!(nullspace(&ctx, &z).len(), 4);
    }

    #[test]
    fn rref_canonical() {
        let ctx = RfCtx::rational();
        let mut m = Mat::from_rows(vec![
            vec![q(2, 1), q(4, 1), q(0, 1)],
            vec![q(1, 1), q(2, 1), q(1, 1)],
        ]);
        let pivots = rref(&ctx, &mut m);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(m.row(0), &[q(1, 1), q(2, 1), q(0, 1)][..]);
        assert_eq!(m.row(1), &[q(0, 1), q(0, 1), q(1, 1)][..]);
    }

    #[test]
    fn det_and_inverse() {
        let ctx = RfCtx::rational();
        let m = Mat::from_rows(vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(3, 1), q(5, 1)],
        ]);
        assert_eq!(det(&ctx, &m), q(-1, 1));
        let inv = inverse(&ctx, &m).unwrap();
        assert_eq!(m.matmul(&ctx, &inv), Mat::identity(&ctx, 2));
        let singular = Mat::from_rows(vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(2, 1), q(4, 1)],
        ]);
        assert!(inverse(&ctx, &singular).is_none());
        assert!(ctx.is_zero(&det(&ctx, &singular)));
    }

    #[test]
    fn subspace_intersection() {
        let ctx = RfCtx::rational();
        // span{e1, e2} ∩ span{e2, e3} = span{e2}
        let u = Subspace::from_vectors(
            &ctx,
            vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1), q(0, 1)],
            ],
            3,
        );
        let v = Subspace::from_vectors(
            &ctx,
            vec![
                vec![q(0, 1), q(1, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ],
            3,
        );
        let w = u.intersect(&ctx, &v);
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&ctx, &[q(0, 1), q(1, 1), q(0, 1)]));
    }

    #[test]
    fn fp_elimination() {
        let ctx = FpCtx::new(5);
        let m = Mat::from_rows(vec![vec![2u64, 4], vec![1, 2]]);
        assert_eq!(rank(&ctx, &m), 1);
        assert_eq!(nullspace(&ctx, &m).len(), 1);
    }
}
