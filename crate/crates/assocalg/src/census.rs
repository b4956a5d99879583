//! Brute-force finite-field oracle: exhaustively count automorphisms of a
//! table reduced mod p by a pruned column-by-column enumeration, and count
//! derivations as the size of the Leibniz nullspace over F_p.
//!
//! The enumeration builds candidate matrices one column at a time and, after
//! each column, checks every homomorphism-residual entry whose inputs are
//! fully assigned; a nonzero entry cuts the whole branch. Invertibility is
//! checked last. Work is split across threads by partitioning the value range
//! of the first column, so the result is a pure sum over disjoint ranges and
//! identical for any thread count.

use std::time::{Duration, Instant};

use crate::algebra::AlgebraTable;
use crate::deriv::build_leibniz_system;
use crate::linalg::{rank, Mat};
use crate::scalar::fp;
use crate::scalar::FpCtx;
use crate::aut::ParametricMatrixFamily;

/// Primes the engine accepts; larger moduli make even n = 3 infeasible.
pub const ALLOWED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Default feasibility guard on the naive search-space size p^(n²).
pub const DEFAULT_MAX_NAIVE: u128 = 1 << 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("unsupported prime {0}; allowed: 2, 3, 5, 7, 11, 13")]
    UnsupportedPrime(u64),
    #[error("table entry {0} is not reducible mod {1}")]
    NotReducible(String, u64),
    #[error("table has symbolic entries; specialize the parameters first")]
    NotConstant,
    #[error("search space p^(n^2) = {needed} exceeds the bound {bound}; use a smaller prime")]
    Infeasible { needed: u128, bound: u128 },
}

/// Counts from one census run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub p: u64,
    pub n: usize,
    pub aut_count: u128,
    pub der_count: u128,
    pub elapsed: Duration,
    /// Partial assignments cut by a nonzero residual entry.
    pub pruned: u64,
    /// Nonzero rational constants that vanish mod p (dimension distortion risk).
    pub warnings: Vec<String>,
}

/// A structure-constant table reduced into F_p.
#[derive(Clone, Debug)]
pub struct FpTable {
    pub p: u64,
    pub n: usize,
    /// γᵏᵢⱼ at index `(i·n + j)·n + k`.
    pub gamma: Vec<u64>,
}

impl FpTable {
    pub fn from_table(a: &AlgebraTable, p: u64) -> Result<(FpTable, Vec<String>), CensusError> {
        if !ALLOWED_PRIMES.contains(&p) {
            return Err(CensusError::UnsupportedPrime(p));
        }
        let n = a.dim();
        let mut gamma = vec![0u64; n * n * n];
        let mut warnings = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let g = a.gamma(i, j, k);
                    if g.is_zero() {
                        continue;
                    }
                    let c = g.as_rational().ok_or(CensusError::NotConstant)?;
                    let r = fp::reduce_mod_p(&c, p)
                        .map_err(|_| CensusError::NotReducible(c.to_string(), p))?;
                    if r == 0 {
                        warnings.push(format!(
                            "constant {c} of product e{}*e{} vanishes mod {p}",
                            i + 1,
                            j + 1
                        ));
                    }
                    gamma[(i * n + j) * n + k] = r;
                }
            }
        }
        Ok((FpTable { p, n, gamma }, warnings))
    }

    fn gamma(&self, i: usize, j: usize, k: usize) -> u64 {
        self.gamma[(i * self.n + j) * self.n + k]
    }
}

/// Residual entries (i, j, t) grouped by the earliest column after which all
/// their inputs are assigned: columns i and j of F for the quadratic term,
/// and every column k with γᵏᵢⱼ ≠ 0 for the linear term.
fn residual_schedule(t: &FpTable) -> Vec<Vec<(usize, usize, usize)>> {
    let n = t.n;
    let mut schedule = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let mut ready = i.max(j);
            for k in 0..n {
                if t.gamma(i, j, k) != 0 {
                    ready = ready.max(k);
                }
            }
            for tt in 0..n {
                schedule[ready].push((i, j, tt));
            }
        }
    }
    schedule
}

fn residual_ok(t: &FpTable, f: &[u64], i: usize, j: usize, tt: usize) -> bool {
    // f is column-major: f[col * n + row]
    let n = t.n;
    let p = t.p;
    let mut quad = 0u64;
    for q in 0..n {
        let fqj = f[j * n + q];
        if fqj == 0 {
            continue;
        }
        let mut inner = 0u64;
        for pp in 0..n {
            let g = t.gamma(pp, q, tt);
            if g != 0 {
                inner = fp::add(inner, fp::mul(f[i * n + pp], g, p), p);
            }
        }
        quad = fp::add(quad, fp::mul(inner, fqj, p), p);
    }
    let mut lin = 0u64;
    for k in 0..n {
        let g = t.gamma(i, j, k);
        if g != 0 {
            lin = fp::add(lin, fp::mul(g, f[k * n + tt], p), p);
        }
    }
    quad == lin
}

fn invertible_mod_p(t: &FpTable, f: &[u64]) -> bool {
    let n = t.n;
    let ctx = FpCtx::new(t.p);
    let mut m = Mat::filled(n, n, 0u64);
    for c in 0..n {
        for r in 0..n {
            m.set(r, c, f[c * n + r]);
        }
    }
    rank(&ctx, &m) == n
}

fn decode_column(f: &mut [u64], col: usize, mut code: u64, n: usize, p: u64) {
    for row in 0..n {
        f[col * n + row] = code % p;
        code /= p;
    }
}

/// Counts automorphisms with the first column restricted to the encoded
/// range `[lo, hi)`; returns (count, pruned).
fn count_range(t: &FpTable, schedule: &[Vec<(usize, usize, usize)>], lo: u64, hi: u64) -> (u128, u64) {
    let n = t.n;
    let p = t.p;
    let per_col = (p as u128).pow(n as u32) as u64;
    let mut f = vec![0u64; n * n];
    let mut count = 0u128;
    let mut pruned = 0u64;

    fn recurse(
        t: &FpTable,
        schedule: &[Vec<(usize, usize, usize)>],
        f: &mut [u64],
        col: usize,
        per_col: u64,
        count: &mut u128,
        pruned: &mut u64,
    ) {
        let n = t.n;
        for code in 0..per_col {
            decode_column(f, col, code, n, t.p);
            let ok = schedule[col]
                .iter()
                .all(|&(i, j, tt)| residual_ok(t, f, i, j, tt));
            if !ok {
                *pruned += 1;
                continue;
            }
            if col + 1 == n {
                if invertible_mod_p(t, f) {
                    *count += 1;
                }
            } else {
                recurse(t, schedule, f, col + 1, per_col, count, pruned);
            }
        }
    }

    for code in lo..hi {
        decode_column(&mut f, 0, code, n, p);
        let ok = schedule[0]
            .iter()
            .all(|&(i, j, tt)| residual_ok(t, &f, i, j, tt));
        if !ok {
            pruned += 1;
            continue;
        }
        if n == 1 {
            if invertible_mod_p(t, &f) {
                count += 1;
            }
        } else {
            recurse(t, schedule, &mut f, 1, per_col, &mut count, &mut pruned);
        }
    }
    (count, pruned)
}

fn der_count_mod_p(a: &AlgebraTable, p: u64) -> Result<u128, CensusError> {
    let system = build_leibniz_system(a);
    let ctx = FpCtx::new(p);
    let mut m = Mat::filled(system.rows, system.cols, 0u64);
    for r in 0..system.rows {
        for c in 0..system.cols {
            let e = system.at(r, c);
            if e.is_zero() {
                continue;
            }
            let v = e.as_rational().ok_or(CensusError::NotConstant)?;
            let v = fp::reduce_mod_p(&v, p)
                .map_err(|_| CensusError::NotReducible(v.to_string(), p))?;
            m.set(r, c, v);
        }
    }
    let nullity = system.cols - rank(&ctx, &m);
    Ok((p as u128).pow(nullity as u32))
}

/// Exhaustive automorphism and derivation counts of the table mod p.
pub fn census(
    a: &AlgebraTable,
    p: u64,
    threads: usize,
    max_naive: u128,
) -> Result<CensusResult, CensusError> {
    let start = Instant::now();
    let (t, warnings) = FpTable::from_table(a, p)?;
    let n = t.n;
    let needed = (p as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if needed > max_naive {
        return Err(CensusError::Infeasible {
            needed,
            bound: max_naive,
        });
    }
    let der_count = der_count_mod_p(a, p)?;
    let schedule = residual_schedule(&t);
    let per_col = (p as u128).pow(n as u32) as u64;
    let threads = threads.max(1).min(per_col as usize);

    let (aut_count, pruned) = if threads == 1 {
        count_range(&t, &schedule, 0, per_col)
    } else {
        let chunk = per_col.div_ceil(threads as u64);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..threads {
                let lo = chunk * w as u64;
                let hi = (lo + chunk).min(per_col);
                if lo >= hi {
                    continue;
                }
                let t = &t;
                let schedule = &schedule;
                handles.push(scope.spawn(move || count_range(t, schedule, lo, hi)));
            }
            let mut count = 0u128;
            let mut pruned = 0u64;
            for h in handles {
                let (c, pr) = h.join().expect("census worker");
                count += c;
                pruned += pr;
            }
            (count, pruned)
        })
    };

    Ok(CensusResult {
        p,
        n,
        aut_count,
        der_count,
        elapsed: start.elapsed(),
        pruned,
        warnings,
    })
}

/// Point count of a solved-form family over F_p, or `None` when the side
/// conditions are too coupled to count without variety point-counting.
///
/// Supported shape: every nonvanishing constraint is a single monomial, so
/// it just marks its variables as nonzero; the count is then the product
/// over free parameters of (p − 1) or p.
pub fn predicted_count(fam: &ParametricMatrixFamily, p: u64) -> Option<u128> {
    if !fam.equations.is_empty() || fam.unverifiable.is_some() {
        return None;
    }
    let params = fam.free_params();
    let mut nonzero = vec![false; params.len()];
    for nv in &fam.nonvanishing {
        if nv.num_terms() != 1 {
            return None; // coupled constraint, e.g. a11*a22 - a12*a21
        }
        for idx in nv.vars_used() {
            let name = &fam.ring.vars()[idx];
            match params.iter().position(|q| q == name) {
                Some(q) => nonzero[q] = true,
                // constraint on the structure parameter alone: no effect
                None => {}
            }
        }
    }
    let mut count = 1u128;
    for z in nonzero {
        count *= if z { (p - 1) as u128 } else { p as u128 };
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::scalar::{PolyRing, RatFun};

    fn as_2_1() -> AlgebraTable {
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(Some("As_2^1".into()), 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::one(&ring));
        a
    }

    fn aut_as_2_1() -> ParametricMatrixFamily {
        let ring = PolyRing::new(["a11", "a21"]);
        let a11 = RatFun::var(&ring, 0);
        let a21 = RatFun::var(&ring, 1);
        let z = RatFun::zero(&ring);
        ParametricMatrixFamily {
            name: "Aut(As_2^1)".into(),
            algebra: "As_2^1".into(),
            n: 2,
            ring: ring.clone(),
            entries: Mat::from_rows(vec![vec![a11.clone(), z], vec![a21, a11.mul(&a11)]]),
            nonvanishing: vec![crate::scalar::MultiPoly::var(&ring, 0)],
            equations: Vec::new(),
            unverifiable: None,
        }
    }

    #[test]
    fn as_2_1_counts() {
        for p in [3u64, 5, 7] {
            let r = census(&as_2_1(), p, 1, DEFAULT_MAX_NAIVE).unwrap();
            assert_eq!(r.aut_count, ((p - 1) * p) as u128, "aut mod {p}");
            assert_eq!(r.der_count, (p * p) as u128, "der mod {p}");
        }
    }

    #[test]
    fn zero_algebra_full_gl() {
        let zero = AlgebraTable::zero(None, 2, PolyRing::empty()).unwrap();
        let r = census(&zero, 2, 1, DEFAULT_MAX_NAIVE).unwrap();
        assert_eq!(r.aut_count, 6); // |GL_2(F_2)|
        let r3 = census(&zero, 3, 1, DEFAULT_MAX_NAIVE).unwrap();
        assert_eq!(r3.aut_count, 48); // (9-1)(9-3)
    }

    #[test]
    fn thread_count_invariance() {
        let a = as_2_1();
        let one = census(&a, 7, 1, DEFAULT_MAX_NAIVE).unwrap();
        let four = census(&a, 7, 4, DEFAULT_MAX_NAIVE).unwrap();
        assert_eq!(one.aut_count, four.aut_count);
        assert_eq!(one.der_count, four.der_count);
    }

    #[test]
    fn predicted_counts() {
        let fam = aut_as_2_1();
        assert_eq!(predicted_count(&fam, 5), Some(20));
        assert_eq!(predicted_count(&fam, 3), Some(6));

        // coupled constraint refused
        let mut coupled = fam.clone();
        let a11 = crate::scalar::MultiPoly::var(&coupled.ring, 0);
        let a21 = crate::scalar::MultiPoly::var(&coupled.ring, 1);
        coupled.nonvanishing = vec![a11.sub(&a21)];
        assert_eq!(predicted_count(&coupled, 5), None);

        // identity-only family
        let ring = PolyRing::empty();
        let id = ParametricMatrixFamily {
            name: "trivial".into(),
            algebra: "X".into(),
            n: 2,
            ring: ring.clone(),
            entries: Mat::identity(&crate::scalar::RfCtx::rational(), 2),
            nonvanishing: Vec::new(),
            equations: Vec::new(),
            unverifiable: None,
        };
        assert_eq!(predicted_count(&id, 13), Some(1));
    }

    #[test]
    fn errors() {
        let a = as_2_1();
        assert!(matches!(
            census(&a, 4, 1, DEFAULT_MAX_NAIVE),
            Err(CensusError::UnsupportedPrime(4))
        ));
        assert!(matches!(
            census(&a, 7, 1, 100),
            Err(CensusError::Infeasible { .. })
        ));
        // symbolic table rejected
        let ring = PolyRing::new(["alpha"]);
        let mut s = AlgebraTable::zero(None, 2, ring.clone()).unwrap();
        s.set_gamma(0, 0, 1, RatFun::var(&ring, 0));
        assert!(matches!(
            census(&s, 5, 1, DEFAULT_MAX_NAIVE),
            Err(CensusError::NotConstant)
        ));
    }

    #[test]
    fn vanishing_constant_warning() {
        // e1*e1 = 2*e2 collapses mod 2
        let ring = PolyRing::empty();
        let mut a = AlgebraTable::zero(None, 2, ring.clone()).unwrap();
        a.set_gamma(0, 0, 1, RatFun::from_rat(&ring, crate::scalar::rat(2, 1)));
        let r = census(&a, 2, 1, DEFAULT_MAX_NAIVE).unwrap();
        assert_eq!(r.warnings.len(), 1);
        // the reduced table is the zero algebra
        assert_eq!(r.aut_count, 6);
        let clean = census(&a, 3, 1, DEFAULT_MAX_NAIVE).unwrap();
        assert!(clean.warnings.is_empty());
        assert_eq!(clean.aut_count, ((3 - 1) * 3) as u128);
    }

    #[test]
    fn census_agrees_with_family_prediction() {
        let a = as_2_1();
        let fam = aut_as_2_1();
        for p in [3u64, 5] {
            let r = census(&a, p, 2, DEFAULT_MAX_NAIVE).unwrap();
            assert_eq!(Some(r.aut_count), predicted_count(&fam, p));
        }
    }
}
