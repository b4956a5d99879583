//! The homomorphism residual of a linear map against a structure-constant
//! table, concrete automorphism testing, symbolic verification of parametric
//! automorphism families, and the tangent space of Aut(A) at the identity.
//!
//! Convention (matching the derivations module): a map f acts by
//! `f(eᵢ) = Σⱼ a_{jᵢ} eⱼ`, so images are columns. The residual is
//! `R[i][j][t] = Σₚq a_{pᵢ} a_{qⱼ} γᵗₚq − Σₖ γᵏᵢⱼ a_{tk}`; it vanishes iff f
//! is an algebra homomorphism on the basis.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraError, AlgebraTable};
use crate::linalg::{det, inverse, rank, FieldCtx, Mat};
use crate::scalar::{MultiPoly, PolyRing, Rat, RatFun, RfCtx};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("malformed family: {0}")]
    MalformedFamily(String),
    #[error("could not sample parameters satisfying the constraints")]
    SamplingFailed,
}

/// A claimed automorphism family: a matrix of rational functions in free
/// parameters, with nonvanishing side conditions and optional polynomial
/// equations (for families stated in constrained rather than solved form).
#[derive(Clone, Debug)]
pub struct ParametricMatrixFamily {
    pub name: String,
    /// Catalog name of the algebra the family belongs to.
    pub algebra: String,
    pub n: usize,
    pub ring: PolyRing,
    pub entries: Mat<RatFun>,
    pub nonvanishing: Vec<MultiPoly>,
    pub equations: Vec<MultiPoly>,
    pub unverifiable: Option<String>,
}

impl ParametricMatrixFamily {
    /// Free parameters of the family: every declared variable except the
    /// structure parameter `alpha`.
    pub fn free_params(&self) -> Vec<String> {
        self.ring
            .vars()
            .iter()
            .filter(|v| v.as_str() != "alpha")
            .cloned()
            .collect()
    }
}

/// Outcome of symbolic family verification.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyVerdict {
    Verified,
    Failed {
        /// 1-based (i, j, t) of a nonzero residual entry, or (0,0,0) for a
        /// determinant that vanishes identically.
        entry: (usize, usize, usize),
        residual: String,
        witness: Option<Vec<(String, Rat)>>,
    },
    Unverifiable(String),
}

/// Flattened residual tensor, index `(i·n + j)·n + t`, over the union of the
/// table's and the map's parameter rings.
pub fn hom_residual(
    a: &AlgebraTable,
    f: &Mat<RatFun>,
    f_ring: &PolyRing,
) -> Result<(PolyRing, Vec<RatFun>), AutError> {
    let n = a.dim();
    if f.rows != n || f.cols != n {
        return Err(AlgebraError::DimMismatch {
            expected: n,
            got: f.rows,
        }
        .into());
    }
    let ring = a.ring().union(f_ring);
    let lift = |x: &RatFun| x.map_ring(&ring).expect("union ring covers both");
    let fm = f.map(lift);
    let gamma = |i: usize, j: usize, k: usize| lift(a.gamma(i, j, k));
    let zero = RatFun::zero(&ring);
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for t in 0..n {
                let mut acc = zero.clone();
                for p in 0..n {
                    if fm.at(p, i).is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        let g = gamma(p, q, t);
                        if g.is_zero() || fm.at(q, j).is_zero() {
                            continue;
                        }
                        acc = acc.add(&fm.at(p, i).mul(fm.at(q, j)).mul(&g));
                    }
                }
                for k in 0..n {
                    let g = gamma(i, j, k);
                    if !g.is_zero() {
                        acc = acc.sub(&g.mul(fm.at(t, k)));
                    }
                }
                out.push(acc);
            }
        }
    }
    Ok((ring, out))
}

/// True iff the residual vanishes and f is invertible (exact determinant).
pub fn is_automorphism(a: &AlgebraTable, f: &Mat<RatFun>, f_ring: &PolyRing) -> Result<bool, AutError> {
    let (ring, residual) = hom_residual(a, f, f_ring)?;
    if residual.iter().any(|r| !r.is_zero()) {
        return Ok(false);
    }
    let ctx = RfCtx::new(ring.clone());
    let fm = f.map(|x| x.map_ring(&ring).expect("union ring covers f"));
    Ok(!det(&ctx, &fm).is_zero())
}

fn covered_by_nonvanishing(den: &MultiPoly, nonvanishing: &[MultiPoly]) -> bool {
    let mut rest = den.clone();
    loop {
        if rest.as_constant().is_some() {
            return true;
        }
        let mut progressed = false;
        for nv in nonvanishing {
            if nv.as_constant().is_some() || nv.is_zero() {
                continue;
            }
            if let Some(q) = rest.div_exact(nv) {
                rest = q;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return false;
        }
    }
}

/// Deterministic witness scan over small rationals (numerators and
/// denominators bounded by 7).
fn find_witness(
    ring: &PolyRing,
    target: &MultiPoly,
    nonvanishing: &[MultiPoly],
) -> Option<Vec<(String, Rat)>> {
    let mut values = Vec::new();
    for den in 1i64..=7 {
        for num in 1i64..=7 {
            values.push(Rat::new(num.into(), den.into()));
            values.push(Rat::new((-num).into(), den.into()));
        }
    }
    let k = ring.num_vars();
    if k == 0 {
        return None;
    }
    let mut odometer = vec![0usize; k];
    let mut steps = 0usize;
    loop {
        let assignment: Vec<Rat> = odometer.iter().map(|&i| values[i].clone()).collect();
        let ok = nonvanishing.iter().all(|nv| !nv.eval(&assignment).is_zero());
        if ok && !target.eval(&assignment).is_zero() {
            return Some(
                ring.vars()
                    .iter()
                    .cloned()
                    .zip(assignment)
                    .collect(),
            );
        }
        // advance
        let mut pos = 0;
        loop {
            odometer[pos] += 1;
            if odometer[pos] < values.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
            if pos == k {
                return None;
            }
        }
        steps += 1;
        if steps > 200_000 {
            return None;
        }
    }
}

/// Symbolic verification of a claimed family: every residual entry must be
/// the zero polynomial after clearing denominators and reducing modulo the
/// family's equations, and the determinant must not vanish identically.
pub fn verify_family(a: &AlgebraTable, fam: &ParametricMatrixFamily) -> Result<FamilyVerdict, AutError> {
    if let Some(reason) = &fam.unverifiable {
        return Ok(FamilyVerdict::Unverifiable(reason.clone()));
    }
    if fam.n != a.dim() {
        return Err(AlgebraError::DimMismatch {
            expected: a.dim(),
            got: fam.n,
        }
        .into());
    }
    let ring = a.ring().union(&fam.ring);
    let nonvanishing: Vec<MultiPoly> = fam
        .nonvanishing
        .iter()
        .map(|p| p.map_ring(&ring).expect("union ring"))
        .collect();
    let equations: Vec<MultiPoly> = fam
        .equations
        .iter()
        .map(|p| p.map_ring(&ring).expect("union ring"))
        .collect();
    // every entry denominator must be covered by the nonvanishing list
    for r in 0..fam.n {
        for c in 0..fam.n {
            let den = fam.entries.at(r, c).den().map_ring(&ring).expect("union ring");
            if !covered_by_nonvanishing(&den, &nonvanishing) {
                return Err(AutError::MalformedFamily(format!(
                    "denominator {den} of entry ({}, {}) is not covered by the nonvanishing list",
                    r + 1,
                    c + 1
                )));
            }
        }
    }
    let (res_ring, residual) = hom_residual(a, &fam.entries, &fam.ring)?;
    debug_assert_eq!(res_ring, ring);
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            for t in 0..n {
                let r = &residual[(i * n + j) * n + t];
                if r.is_zero() {
                    continue;
                }
                let reduced = r.num().reduce_mod(&equations);
                if reduced.is_zero() {
                    continue;
                }
                let witness = find_witness(&ring, &reduced, &nonvanishing);
                return Ok(FamilyVerdict::Failed {
                    entry: (i + 1, j + 1, t + 1),
                    residual: reduced.to_string(),
                    witness,
                });
            }
        }
    }
    // determinant must not vanish identically
    let ctx = RfCtx::new(ring.clone());
    let fm = fam
        .entries
        .map(|x| x.map_ring(&ring).expect("union ring"));
    let d = det(&ctx, &fm);
    if d.num().reduce_mod(&equations).is_zero() {
        return Ok(FamilyVerdict::Failed {
            entry: (0, 0, 0),
            residual: "determinant vanishes identically".into(),
            witness: None,
        });
    }
    Ok(FamilyVerdict::Verified)
}

/// Coefficient matrix of the linearization of the automorphism equations at
/// the identity: the Jacobian of `Σₖ γᵏᵢⱼ a_{tk} − Σₚq a_{pᵢ} a_{qⱼ} γᵗₚq`,
/// computed by exact dual-number evaluation. Rows are indexed by (i, j, t)
/// and columns by the column-major unknown order of the derivations module.
pub fn tangent_system(a: &AlgebraTable) -> Mat<RatFun> {
    let n = a.dim();
    let ctx = a.ctx();
    // dual number (re, ε-part), ε² = 0
    type Dual = (RatFun, RatFun);
    let dmul = |x: &Dual, y: &Dual| -> Dual {
        (
            x.0.mul(&y.0),
            x.0.mul(&y.1).add(&x.1.mul(&y.0)),
        )
    };
    let mut rows = vec![vec![ctx.zero(); n * n]; n * n * n];
    for u in 0..n {
        for v in 0..n {
            let col = v * n + u;
            // F = I + ε·E_uv
            let f = |x: usize, y: usize| -> Dual {
                let re = if x == y { ctx.one() } else { ctx.zero() };
                let eps = if x == u && y == v { ctx.one() } else { ctx.zero() };
                (re, eps)
            };
            for i in 0..n {
                for j in 0..n {
                    for t in 0..n {
                        let mut acc: Dual = (ctx.zero(), ctx.zero());
                        for k in 0..n {
                            let g = a.gamma(i, j, k);
                            if !g.is_zero() {
                                let term = dmul(&f(t, k), &(g.clone(), ctx.zero()));
                                acc = (acc.0.add(&term.0), acc.1.add(&term.1));
                            }
                        }
                        for p in 0..n {
                            for q in 0..n {
                                let g = a.gamma(p, q, t);
                                if g.is_zero() {
                                    continue;
                                }
                                let term = dmul(&dmul(&f(p, i), &f(q, j)), &(g.clone(), ctx.zero()));
                                acc = (acc.0.sub(&term.0), acc.1.sub(&term.1));
                            }
                        }
                        rows[(i * n + j) * n + t][col] = acc.1;
                    }
                }
            }
        }
    }
    Mat::from_rows(rows)
}

/// Dimension of the tangent space of Aut(A) at the identity.
pub fn tangent_dim(a: &AlgebraTable) -> usize {
    let ctx = a.ctx();
    let m = tangent_system(a);
    m.cols - rank(&ctx, &m)
}

/// Samples `trials` members of a verified family with pseudorandom rational
/// parameters and checks that products and inverses are again automorphisms.
pub fn closure_spot_check(
    a: &AlgebraTable,
    fam: &ParametricMatrixFamily,
    trials: usize,
    seed: u64,
) -> Result<bool, AutError> {
    if !fam.equations.is_empty() {
        return Err(AutError::SamplingFailed);
    }
    let ring = a.ring().union(&fam.ring);
    let vars = ring.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empty = PolyRing::empty();
    let qctx = RfCtx::rational();

    let sample = |rng: &mut ChaCha8Rng| -> Result<(Vec<Rat>, AlgebraTable, Mat<RatFun>), AutError> {
        'retry: for _ in 0..200 {
            let assignment: Vec<Rat> = (0..vars)
                .map(|_| {
                    let num = rng.gen_range(-7i64..=7);
                    let den = rng.gen_range(1i64..=7);
                    Rat::new(num.into(), den.into())
                })
                .collect();
            for nv in &fam.nonvanishing {
                let nv = nv.map_ring(&ring).expect("union ring");
                if nv.eval(&assignment).is_zero() {
                    continue 'retry;
                }
            }
            // specialize the table (a no-op for constant tables)
            let mut table = AlgebraTable::zero(None, a.dim(), empty.clone())?;
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    for k in 0..a.dim() {
                        let g = a.gamma(i, j, k).map_ring(&ring).expect("union ring");
                        match g.eval(&assignment) {
                            Some(v) => table.set_gamma(i, j, k, RatFun::from_rat(&empty, v)),
                            None => continue 'retry,
                        }
                    }
                }
            }
            // instantiate the matrix
            let mut m = Mat::filled(fam.n, fam.n, RatFun::zero(&empty));
            for r in 0..fam.n {
                for c in 0..fam.n {
                    let e = fam.entries.at(r, c).map_ring(&ring).expect("union ring");
                    match e.eval(&assignment) {
                        Some(v) => m.set(r, c, RatFun::from_rat(&empty, v)),
                        None => continue 'retry,
                    }
                }
            }
            return Ok((assignment, table, m));
        }
        Err(AutError::SamplingFailed)
    };

    for _ in 0..trials {
        let (_, table_f, f) = sample(&mut rng)?;
        let (_, _table_g, g) = sample(&mut rng)?;
        // both samples must specialize the table identically for the product
        // check to make sense; constant tables always do
        if !is_automorphism(&table_f, &f, &empty)? {
            return Ok(false);
        }
        if a.is_constant() {
            if !is_automorphism(&table_f, &g, &empty)? {
                return Ok(false);
            }
            let product = f.matmul(&qctx, &g);
            if !is_automorphism(&table_f, &product, &empty)? {
                return Ok(false);
            }
        }
        match inverse(&qctx, &f) {
            Some(finv) => {
                if !is_automorphism(&table_f, &finv, &empty)? {
                    return Ok(false);
                }
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn as_2_1() -> AlgebraTable {
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_2^1".into()), 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::one(&ring));
        a
    }

    fn q(n: i64, d: i64) -> RatFun {
        RatFun::from_rat(&PolyRing::empty(), rat(n, d))
    }

    fn aut_as_2_1() -> ParametricMatrixFamily {
        // [[a11, 0], [a21, a11²]], a11 ≠ 0
        let ring = PolyRing::new(["a11", "a21"]);
        let a11 = RatFun::var(&ring, 0);
        let a21 = RatFun::var(&ring, 1);
        let z = RatFun::zero(&ring);
        let entries = Mat::from_rows(vec![
            vec![a11.clone(), z.clone()],
            vec![a21, a11.mul(&a11)],
        ]);
        ParametricMatrixFamily {
            name: "Aut(As_2^1)".into(),
            algebra: "As_2^1".into(),
            n: 2,
            ring: ring.clone(),
            entries,
            nonvanishing: vec![MultiPoly::var(&ring, 0)],
            equations: Vec::new(),
            unverifiable: None,
        }
    }

    #[test]
    fn identity_residual_vanishes() {
        let a = as_2_1();
        let ctx = a.ctx();
        let id = Mat::identity(&ctx, 2);
        let (_, residual) = hom_residual(&a, &id, &PolyRing::empty()).unwrap();
        assert!(residual.iter().all(RatFun::is_zero));
        assert!(is_automorphism(&a, &id, &PolyRing::empty()).unwrap());
    }

    #[test]
    fn concrete_residual_entry() {
        // F = diag(1, 2): f(e1)f(e1) = e2 but f(e2) = 2e2
        let a = as_2_1();
        let f = Mat::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(2, 1)]]);
        let (_, residual) = hom_residual(&a, &f, &PolyRing::empty()).unwrap();
        // R[1][1][2] = −1, everything else zero
        for (idx, r) in residual.iter().enumerate() {
            if idx == 1 {
                assert_eq!(r.as_rational().unwrap(), rat(-1, 1));
            } else {
                assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn symbolic_residual_matches_proof() {
        // F = [[a11, 0], [a21, a22]] gives R[1][1][2] = a11² − a22
        let ring = PolyRing::new(["a11", "a21", "a22"]);
        let a11 = RatFun::var(&ring, 0);
        let f = Mat::from_rows(vec![
            vec![a11.clone(), RatFun::zero(&ring)],
            vec![RatFun::var(&ring, 1), RatFun::var(&ring, 2)],
        ]);
        let a = as_2_1();
        let (_, residual) = hom_residual(&a, &f, &ring).unwrap();
        let expected = a11.mul(&a11).sub(&RatFun::var(&ring, 2));
        assert_eq!(residual[1], expected.map_ring(residual[1].ring()).unwrap());
    }

    #[test]
    fn concrete_members() {
        let a = as_2_1();
        let member = Mat::from_rows(vec![vec![q(3, 1), q(0, 1)], vec![q(5, 1), q(9, 1)]]);
        assert!(is_automorphism(&a, &member, &PolyRing::empty()).unwrap());
        let zero = Mat::filled(2, 2, q(0, 1));
        assert!(!is_automorphism(&a, &zero, &PolyRing::empty()).unwrap());
    }

    #[test]
    fn family_verifies_and_corruption_fails() {
        let a = as_2_1();
        let fam = aut_as_2_1();
        assert_eq!(verify_family(&a, &fam).unwrap(), FamilyVerdict::Verified);

        // corrupt the (2,2) entry to a11
        let mut bad = fam.clone();
        let a11 = RatFun::var(&bad.ring, 0);
        bad.entries.set(1, 1, a11);
        match verify_family(&a, &bad).unwrap() {
            FamilyVerdict::Failed { entry, witness, .. } => {
                assert_eq!(entry, (1, 1, 2));
                let witness = witness.expect("small rational witness exists");
                // the witness really does violate the residual a11² − a11
                let a11_val = witness
                    .iter()
                    .find(|(name, _)| name == "a11")
                    .map(|(_, v)| v.clone())
                    .unwrap();
                assert_ne!(a11_val.clone() * a11_val.clone(), a11_val);
            }
            other => panic!("expected FAILED, got {other:?}"),
        }
    }

    #[test]
    fn malformed_family_rejected() {
        let a = as_2_1();
        let mut fam = aut_as_2_1();
        // denominator a21 is not covered by the nonvanishing list
        let a11 = RatFun::var(&fam.ring, 0);
        let a21 = RatFun::var(&fam.ring, 1);
        fam.entries.set(0, 0, a11.div(&a21).unwrap());
        assert!(matches!(
            verify_family(&a, &fam),
            Err(AutError::MalformedFamily(_))
        ));
    }

    #[test]
    fn tangent_equals_leibniz() {
        let a = as_2_1();
        assert_eq!(tangent_system(&a), crate::deriv::build_leibniz_system(&a));
        assert_eq!(tangent_dim(&a), 2);
        let zero = AlgebraTable::zero(None, 2, PolyRing::empty()).unwrap();
        assert_eq!(tangent_dim(&zero), 4);
    }

    #[test]
    fn closure_spot_check_family() {
        let a = as_2_1();
        let fam = aut_as_2_1();
        assert!(closure_spot_check(&a, &fam, 10, 42).unwrap());

        let mut bad = fam.clone();
        let a11 = RatFun::var(&bad.ring, 0);
        bad.entries.set(1, 1, a11);
        assert!(!closure_spot_check(&a, &bad, 10, 42).unwrap());
    }
}
