//! The Leibniz linear system and everything derived from it: Der(A) bases,
//! dimensions, and central derivations.
//!
//! Conventions. A linear map D acts by `D(eᵢ) = Σₖ d_{kᵢ} eₖ`, i.e. the
//! images are the *columns* of the matrix `(d_{uv})`. Unknowns are ordered
//! column-major, `d₁₁, d₂₁, …, dₙ₁, d₁₂, …`, so the unknown `d_{uv}` sits at
//! index `v·n + u` (0-based). Rows of the Leibniz system are indexed by the
//! triple `(i, j, t)` in lexicographic order and encode
//! `Σₖ γᵏᵢⱼ d_{tk} − Σₖ (d_{kᵢ} γᵗₖⱼ + d_{kⱼ} γᵗᵢₖ) = 0`.

use crate::algebra::AlgebraTable;
use crate::linalg::{nullspace, FieldCtx, Mat, Subspace};
use crate::scalar::RatFun;

/// Column-major flattening used for both derivation and endomorphism
/// unknowns: entry `(u, v)` of an n×n matrix sits at index `v*n + u`.
pub fn flatten_col_major(m: &Mat<RatFun>) -> Vec<RatFun> {
    let n = m.rows;
    let mut v = Vec::with_capacity(n * n);
    for col in 0..n {
        for row in 0..n {
            v.push(m.at(row, col).clone());
        }
    }
    v
}

pub fn unflatten_col_major(v: &[RatFun], n: usize) -> Mat<RatFun> {
    let mut m = Mat::filled(n, n, v[0].clone());
    for col in 0..n {
        for row in 0..n {
            m.set(row, col, v[col * n + row].clone());
        }
    }
    m
}

/// Builds the n³×n² Leibniz system of an algebra table.
pub fn build_leibniz_system(a: &AlgebraTable) -> Mat<RatFun> {
    let n = a.dim();
    let ctx = a.ctx();
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for t in 0..n {
                let mut row = vec![ctx.zero(); n * n];
                for k in 0..n {
                    // + γᵏᵢⱼ d_{tk}
                    let g = a.gamma(i, j, k);
                    if !g.is_zero() {
                        let col = k * n + t;
                        row[col] = row[col].add(g);
                    }
                    // − d_{kᵢ} γᵗₖⱼ
                    let g = a.gamma(k, j, t);
                    if !g.is_zero() {
                        let col = i * n + k;
                        row[col] = row[col].sub(g);
                    }
                    // − d_{kⱼ} γᵗᵢₖ
                    let g = a.gamma(i, k, t);
                    if !g.is_zero() {
                        let col = j * n + k;
                        row[col] = row[col].sub(g);
                    }
                }
                rows.push(row);
            }
        }
    }
    Mat::from_rows(rows)
}

/// Reduced echelon basis of Der(A) as n×n matrices.
pub fn derivation_basis(a: &AlgebraTable) -> Vec<Mat<RatFun>> {
    let ctx = a.ctx();
    let system = build_leibniz_system(a);
    nullspace(&ctx, &system)
        .into_iter()
        .map(|v| unflatten_col_major(&v, a.dim()))
        .collect()
}

pub fn derivation_subspace(a: &AlgebraTable) -> Subspace<RatFun> {
    let ctx = a.ctx();
    let system = build_leibniz_system(a);
    Subspace::from_echelon(nullspace(&ctx, &system), a.dim() * a.dim())
}

/// Checks the Leibniz rule exactly; the residual tensor holds
/// `D(eᵢeⱼ) − D(eᵢ)eⱼ − eᵢD(eⱼ)` at `[i][j]`.
pub fn is_derivation(a: &AlgebraTable, d: &Mat<RatFun>) -> (bool, Vec<Vec<Vec<RatFun>>>) {
    let n = a.dim();
    assert_eq!(d.rows, n);
    assert_eq!(d.cols, n);
    let apply = |x: &[RatFun]| -> Vec<RatFun> {
        (0..n)
            .map(|u| {
                let mut acc = RatFun::zero(a.ring());
                for (k, xk) in x.iter().enumerate() {
                    if !xk.is_zero() {
                        acc = acc.add(&d.at(u, k).mul(xk));
                    }
                }
                acc
            })
            .collect()
    };
    let mut ok = true;
    let mut residual = Vec::with_capacity(n);
    for i in 0..n {
        let ei = a.basis_element(i);
        let dei = apply(&ei);
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let ej = a.basis_element(j);
            let dej = apply(&ej);
            let lhs = apply(&a.multiply(&ei, &ej).unwrap());
            let r1 = a.multiply(&dei, &ej).unwrap();
            let r2 = a.multiply(&ei, &dej).unwrap();
            let res: Vec<RatFun> = (0..n)
                .map(|k| lhs[k].sub(&r1[k]).sub(&r2[k]))
                .collect();
            if res.iter().any(|c| !c.is_zero()) {
                ok = false;
            }
            row.push(res);
        }
        residual.push(row);
    }
    (ok, residual)
}

/// Central derivations per the annihilator-style center:
/// `{φ ∈ End(A) : φ(A) ⊆ Z(A), φ(A²) = 0}` as a subspace of n²-space.
///
/// With `intersect_der` the result is additionally intersected with Der(A).
pub fn central_derivations(a: &AlgebraTable, intersect_der: bool) -> Subspace<RatFun> {
    let n = a.dim();
    let ctx = a.ctx();
    let h: Vec<Vec<RatFun>> = (0..n).map(|i| a.basis_element(i)).collect();
    let center_rows = a.annihilation_system(&h);
    let squares = a.square_span();

    let mut rows: Vec<Vec<RatFun>> = Vec::new();
    // φ(eᵢ) ∈ Z(A): every center constraint applied to column i of φ
    for i in 0..n {
        for r in 0..center_rows.rows {
            let mut row = vec![ctx.zero(); n * n];
            for u in 0..n {
                row[i * n + u] = center_rows.at(r, u).clone();
            }
            rows.push(row);
        }
    }
    // φ(A²) = 0: φ applied to each spanning product vanishes
    for m in squares.basis() {
        for u in 0..n {
            let mut row = vec![ctx.zero(); n * n];
            for v in 0..n {
                row[v * n + u] = m[v].clone();
            }
            rows.push(row);
        }
    }
    let space = if rows.is_empty() {
        let full: Vec<Vec<RatFun>> = (0..n * n)
            .map(|i| {
                let mut v = vec![ctx.zero(); n * n];
                v[i] = ctx.one();
                v
            })
            .collect();
        Subspace::from_vectors(&ctx, full, n * n)
    } else {
        Subspace::from_echelon(nullspace(&ctx, &Mat::from_rows(rows)), n * n)
    };
    if intersect_der {
        space.intersect(&ctx, &derivation_subspace(a))
    } else {
        space
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraTable;
    use crate::scalar::{rat, PolyRing, RatFun};

    fn as_2_1() -> AlgebraTable {
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_2^1".into()), 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::one(&ring));
        a
    }

    fn as_3_1() -> AlgebraTable {
        // e1 e3 = e2, e3 e1 = e2
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_3^1".into()), 3, ring.clone()).unwrap();
        a.set_gamma(0, 2, 1, RatFun::one(&ring));
        a.set_gamma(2, 0, 1, RatFun::one(&ring));
        a
    }

    fn q(n: i64, d: i64) -> RatFun {
        RatFun::from_rat(&PolyRing::empty(), rat(n, d))
    }

    #[test]
    fn leibniz_system_shape_and_nullity() {
        let a = as_2_1();
        let m = build_leibniz_system(&a);
        assert_eq!((m.rows, m.cols), (8, 4));
        assert_eq!(derivation_basis(&a).len(), 2);

        let zero = AlgebraTable::zero(None, 3, PolyRing::empty()).unwrap();
        let mz = build_leibniz_system(&zero);
        assert!((0..mz.rows).all(|r| mz.row(r).iter().all(RatFun::is_zero)));
        assert_eq!(derivation_basis(&zero).len(), 9);
    }

    #[test]
    fn as_2_1_derivations() {
        // Der(As_2^1) = span{ [[1,0],[0,2]], [[0,0],[1,0]] }
        let a = as_2_1();
        let ctx = a.ctx();
        let sub = derivation_subspace(&a);
        assert_eq!(sub.dim(), 2);
        let d1 = Mat::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(2, 1)]]);
        let d2 = Mat::from_rows(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(sub.contains(&ctx, &flatten_col_major(&d1)));
        assert!(sub.contains(&ctx, &flatten_col_major(&d2)));
        assert!(is_derivation(&a, &d1).0);
        assert!(is_derivation(&a, &d2).0);
    }

    #[test]
    fn as_3_1_forces_vanishing_entries() {
        let a = as_3_1();
        let sub = derivation_subspace(&a);
        assert_eq!(sub.dim(), 4);
        // d12 = d13 = d31 = d32 = 0 on every basis matrix
        for d in derivation_basis(&a) {
            assert!(d.at(0, 1).is_zero());
            assert!(d.at(0, 2).is_zero());
            assert!(d.at(2, 0).is_zero());
            assert!(d.at(2, 1).is_zero());
            // d33 = d22 − d11
            assert_eq!(*d.at(2, 2), d.at(1, 1).sub(d.at(0, 0)));
        }
    }

    #[test]
    fn identity_is_not_a_derivation_of_as_2_1() {
        let a = as_2_1();
        let ctx = a.ctx();
        let id = Mat::identity(&ctx, 2);
        let (ok, residual) = is_derivation(&a, &id);
        assert!(!ok);
        // residual at (e1, e1) is −e2
        assert_eq!(residual[0][0], vec![q(0, 1), q(-1, 1)]);
        let zero = Mat::filled(2, 2, ctx.zero());
        assert!(is_derivation(&a, &zero).0);
    }

    #[test]
    fn central_derivation_spaces() {
        let zero = AlgebraTable::zero(None, 2, PolyRing::empty()).unwrap();
        assert_eq!(central_derivations(&zero, false).dim(), 4);

        // As_2^1: im φ ⊆ span{e2}, φ(e2) = 0 → span{[[0,0],[1,0]]}
        let a = as_2_1();
        let c = central_derivations(&a, false);
        assert_eq!(c.dim(), 1);
        let phi = Mat::from_rows(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(c.contains(&a.ctx(), &flatten_col_major(&phi)));
        // here C(A) happens to lie inside Der(A)
        assert_eq!(central_derivations(&a, true).dim(), 1);
    }

    #[test]
    fn lie_closure_on_fixtures() {
        for a in [as_2_1(), as_3_1()] {
            let ctx = a.ctx();
            let basis = derivation_basis(&a);
            for d1 in &basis {
                for d2 in &basis {
                    let commutator_ab = d1.matmul(&ctx, d2);
                    let commutator_ba = d2.matmul(&ctx, d1);
                    let mut comm = commutator_ab.clone();
                    for r in 0..comm.rows {
                        for c in 0..comm.cols {
                            comm.set(r, c, commutator_ab.at(r, c).sub(commutator_ba.at(r, c)));
                        }
                    }
                    assert!(is_derivation(&a, &comm).0);
                }
            }
        }
    }
}
