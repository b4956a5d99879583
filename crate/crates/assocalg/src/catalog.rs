//! The built-in catalog: every algebra of the classification with whatever
//! the source states about it — a multiplication table (only five are printed
//! in proofs), the expected derivation matrix, and the expected automorphism
//! families — plus conversion of printed symbolic patterns into comparable
//! subspaces.

use std::collections::BTreeMap;
use std::path::Path;

use crate::algebra::AlgebraTable;
use crate::aut::ParametricMatrixFamily;
use crate::linalg::Subspace;
use crate::parse::{self, FamilyFile, ParseError, SymbolicPattern};
use crate::scalar::{PolyRing, RatFun, RfCtx};

const TABLES: &str = include_str!("data/tables.alg");
const DERIVATIONS: &str = include_str!("data/derivations.fam");
const AUTOMORPHISMS: &str = include_str!("data/automorphisms.fam");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("{path}: {err}")]
    Parse { path: String, err: ParseError },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("pattern `{0}`: {1}")]
    BadPattern(String, String),
}

/// Everything the catalog records about one algebra.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    /// Printed multiplication table, when the source states one.
    pub table: Option<AlgebraTable>,
    pub expected_der: Option<SymbolicPattern>,
    /// Printed automorphism family branches (possibly none).
    pub expected_aut: Vec<ParametricMatrixFamily>,
    pub provenance: String,
}

/// Catalog order: As_2^1 … As_2^5, As_3^1 … As_3^12, As_4^1 … As_4^46.
fn catalog_names() -> Vec<String> {
    let mut names = Vec::new();
    for (dim, count) in [(2, 5), (3, 12), (4, 46)] {
        for k in 1..=count {
            names.push(format!("As_{dim}^{k}"));
        }
    }
    names
}

fn provenance_for(name: &str) -> String {
    let dim: usize = name
        .strip_prefix("As_")
        .and_then(|s| s.split('^').next())
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let (der_thm, aut_thm) = match dim {
        2 => ("Thm 3.1", "Thm 4.1"),
        3 => ("Thm 3.2", "Thm 4.2"),
        _ => ("Thm 3.3", "Thm 4.3"),
    };
    format!("derivations: {der_thm}; automorphisms: {aut_thm}")
}

/// The embedded catalog, in classification order.
pub fn load_catalog() -> Vec<CatalogEntry> {
    let tables = parse::parse_algebras(TABLES).expect("embedded tables parse");
    let ders = parse::parse_families(DERIVATIONS).expect("embedded derivations parse");
    let auts = parse::parse_families(AUTOMORPHISMS).expect("embedded automorphisms parse");

    let mut entries: Vec<CatalogEntry> = catalog_names()
        .into_iter()
        .map(|name| {
            let provenance = provenance_for(&name);
            CatalogEntry {
                name,
                table: None,
                expected_der: None,
                expected_aut: Vec::new(),
                provenance,
            }
        })
        .collect();
    let index: BTreeMap<String, usize> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.name.clone(), i))
        .collect();

    for t in tables {
        let name = t.name().expect("embedded tables are named").to_string();
        let i = index[&name];
        entries[i].table = Some(t);
        entries[i].provenance.push_str("; table: proof");
    }
    for p in ders.patterns {
        let i = index[&p.algebra];
        entries[i].expected_der = Some(p);
    }
    for f in auts.families {
        let i = index[&f.algebra];
        entries[i].expected_aut.push(f);
    }
    entries
}

/// Symbols of a pattern: every declared variable except the structure
/// parameter `alpha`.
pub fn pattern_symbols(p: &SymbolicPattern) -> Vec<usize> {
    (0..p.ring.num_vars())
        .filter(|&i| p.ring.vars()[i] != "alpha")
        .collect()
}

/// Span of a linear homogeneous pattern inside n²-space over `target`
/// (column-major flattening, one basis vector per symbol set to 1).
///
/// Errors on entries that are nonlinear in the symbols, on nonzero constant
/// terms, and on symbols occurring inside a denominator.
pub fn pattern_to_subspace(
    p: &SymbolicPattern,
    target: &PolyRing,
) -> Result<Subspace<RatFun>, CatalogError> {
    let n = p.n;
    let symbols = pattern_symbols(p);
    let bad = |msg: String| CatalogError::BadPattern(p.name.clone(), msg);
    let mut vectors = vec![vec![RatFun::zero(target); n * n]; symbols.len()];
    for r in 0..n {
        for c in 0..n {
            let entry = &p.entries[r][c];
            if entry.is_zero() {
                continue;
            }
            for &s in &symbols {
                if entry.den().degree_in(s) > 0 {
                    return Err(bad(format!(
                        "symbol {} occurs in a denominator at ({}, {})",
                        p.ring.vars()[s],
                        r + 1,
                        c + 1
                    )));
                }
            }
            let (constant, coeffs) = entry
                .num()
                .extract_linear(&symbols)
                .map_err(|e| bad(e))?;
            if !constant.is_zero() {
                return Err(bad(format!(
                    "nonzero constant term {constant} at ({}, {})",
                    r + 1,
                    c + 1
                )));
            }
            for (si, coeff) in coeffs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let rf = RatFun::new(coeff.clone(), entry.den().clone())
                    .expect("nonzero denominator")
                    .map_ring(target)
                    .map_err(|e| bad(e.to_string()))?;
                vectors[si][c * n + r] = rf;
            }
        }
    }
    let ctx = RfCtx::new(target.clone());
    Ok(Subspace::from_vectors(&ctx, vectors, n * n))
}

/// Ring a pattern's coefficients live in after the symbols are stripped:
/// the alpha-carrier when alpha occurs, otherwise the rationals.
pub fn pattern_coefficient_ring(p: &SymbolicPattern) -> PolyRing {
    if p.ring.var_index("alpha").is_some() {
        PolyRing::new(["alpha"])
    } else {
        PolyRing::empty()
    }
}

/// Reads every `.alg` and `.fam` file of a directory (sorted by file name).
pub fn load_dir(dir: &Path) -> Result<(Vec<AlgebraTable>, FamilyFile), CatalogError> {
    let io_err = |e: std::io::Error| CatalogError::Io {
        path: dir.display().to_string(),
        msg: e.to_string(),
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?
        .into_iter()
        .map(|e| e.path())
        .collect();
    paths.sort();
    let mut tables = Vec::new();
    let mut fams = FamilyFile::default();
    for path in paths {
        let ext = path.extension().and_then(|e| e.to_str());
        if !matches!(ext, Some("alg") | Some("fam")) {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        let perr = |err: ParseError| CatalogError::Parse {
            path: path.display().to_string(),
            err,
        };
        match ext {
            Some("alg") => tables.extend(parse::parse_algebras(&text).map_err(perr)?),
            _ => {
                let ff = parse::parse_families(&text).map_err(perr)?;
                fams.families.extend(ff.families);
                fams.patterns.extend(ff.patterns);
            }
        }
    }
    Ok((tables, fams))
}

/// Merges user files into the catalog: tables fill (or replace) the entry of
/// the same name, patterns replace `expected_der`, families append. Unknown
/// algebra names create new entries at the end.
pub fn merge(catalog: &mut Vec<CatalogEntry>, tables: Vec<AlgebraTable>, fams: FamilyFile) {
    let find = |catalog: &mut Vec<CatalogEntry>, name: &str| -> usize {
        if let Some(i) = catalog.iter().position(|e| e.name == name) {
            return i;
        }
        catalog.push(CatalogEntry {
            name: name.to_string(),
            table: None,
            expected_der: None,
            expected_aut: Vec::new(),
            provenance: "user-supplied".into(),
        });
        catalog.len() - 1
    };
    for t in tables {
        let name = t.name().unwrap_or("A").to_string();
        let i = find(catalog, &name);
        catalog[i].table = Some(t);
    }
    for p in fams.patterns {
        let i = find(catalog, &p.algebra.clone());
        catalog[i].expected_der = Some(p);
    }
    for f in fams.families {
        let i = find(catalog, &f.algebra.clone());
        catalog[i].expected_aut.push(f);
    }
}
