use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use assocalg::algebra::AlgebraTable;
use assocalg::aut::FamilyVerdict;
use assocalg::catalog::{self, CatalogEntry};
use assocalg::census;
use assocalg::deriv;
use assocalg::parse;
use assocalg::{audit, aut};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

/// Exact-arithmetic toolkit for finite-dimensional associative algebras:
/// derivation Lie algebras, automorphism families, and finite-field censuses
/// over a built-in catalog.
#[derive(Parser)]
#[command(name = "assocalg", version)]
struct Cli {
    /// Directory of extra `.alg` / `.fam` files merged into the catalog
    /// (also read from ASSOCALG_EXTRA_CATALOG).
    #[arg(long, global = true, env = "ASSOCALG_EXTRA_CATALOG")]
    extra_catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every multiplication table in a file for associativity.
    Check {
        /// `.alg` file, or a catalog entry name.
        target: String,
    },
    /// Compute the derivation Lie algebra of a table.
    Der {
        /// `.alg` file, or a catalog entry name.
        target: String,
        /// Compare the computed span against this entry's stated pattern
        /// (or, with a file target, against a pattern file).
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Verify stated automorphism families symbolically.
    Autverify {
        /// Catalog entry name (uses its stated families), or an `.alg` file
        /// combined with --families.
        target: String,
        /// `.fam` file of families to verify against the target table.
        #[arg(long)]
        families: Option<PathBuf>,
    },
    /// Count automorphisms and derivations exhaustively over F_p.
    Census {
        /// `.alg` file, or a catalog entry name.
        target: String,
        #[arg(long, short)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Refuse searches larger than p^(n^2) > this bound.
        #[arg(long, default_value_t = census::DEFAULT_MAX_NAIVE)]
        max_naive: u128,
    },
    /// Recompute and cross-check every stated result in the catalog.
    Audit {
        /// Only emit records of these kinds (comma-separated, e.g.
        /// DER_DIM,AUT_FAMILY).
        #[arg(long, value_delimiter = ',')]
        records: Vec<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

struct Fail(u8, String);

fn load_full_catalog(extra: &Option<PathBuf>) -> Result<Vec<CatalogEntry>, Fail> {
    let mut cat = catalog::load_catalog();
    if let Some(dir) = extra {
        let (tables, fams) =
            catalog::load_dir(dir).map_err(|e| Fail(EXIT_PARSE, e.to_string()))?;
        catalog::merge(&mut cat, tables, fams);
    }
    Ok(cat)
}

/// A table by catalog name, or the first table of an `.alg` file.
fn resolve_table(cat: &[CatalogEntry], target: &str) -> Result<AlgebraTable, Fail> {
    if let Some(e) = cat.iter().find(|e| e.name == target) {
        return e.table.clone().ok_or_else(|| {
            Fail(
                EXIT_INFEASIBLE,
                format!("no multiplication table is stated for {target}"),
            )
        });
    }
    let text = std::fs::read_to_string(target)
        .map_err(|e| Fail(EXIT_PARSE, format!("{target}: {e}")))?;
    let tables = parse::parse_algebras(&text)
        .map_err(|e| Fail(EXIT_PARSE, format!("{target}: {e}")))?;
    tables
        .into_iter()
        .next()
        .ok_or_else(|| Fail(EXIT_PARSE, format!("{target}: no algebra found")))
}

fn run_check(cat: &[CatalogEntry], target: &str) -> Result<(), Fail> {
    let tables = if cat.iter().any(|e| e.name == target) {
        vec![resolve_table(cat, target)?]
    } else {
        let text = std::fs::read_to_string(target)
            .map_err(|e| Fail(EXIT_PARSE, format!("{target}: {e}")))?;
        parse::parse_algebras(&text).map_err(|e| Fail(EXIT_PARSE, format!("{target}: {e}")))?
    };
    let mut bad = false;
    for t in &tables {
        let name = t.name().unwrap_or("(unnamed)");
        let violations = t.check_associativity();
        if violations.is_empty() {
            println!("{name}: associative");
        } else {
            bad = true;
            println!("{name}: NOT associative ({} violations)", violations.len());
            for v in violations.iter().take(5) {
                println!("  (e{}*e{})*e{} != e{}*(e{}*e{})", v.i, v.j, v.k, v.i, v.j, v.k);
            }
        }
    }
    if bad {
        Err(Fail(EXIT_FAIL, "associativity check failed".into()))
    } else {
        Ok(())
    }
}

fn run_der(cat: &[CatalogEntry], target: &str, pattern: &Option<String>) -> Result<(), Fail> {
    let table = resolve_table(cat, target)?;
    let sub = deriv::derivation_subspace(&table);
    let n = table.dim();
    println!(
        "{}: derivation algebra has dimension {}",
        table.name().unwrap_or("(unnamed)"),
        sub.dim()
    );
    for (k, v) in sub.basis().iter().enumerate() {
        println!("basis element {}:", k + 1);
        for r in 0..n {
            let row: Vec<String> = (0..n).map(|c| v[c * n + r].to_string()).collect();
            println!("  [{}]", row.join(", "));
        }
    }
    let stated = match pattern {
        None => {
            let entry = cat.iter().find(|e| e.name == target);
            match entry.and_then(|e| e.expected_der.clone()) {
                Some(p) => Some(p),
                None => return Ok(()),
            }
        }
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fail(EXIT_PARSE, format!("{path}: {e}")))?;
            let ff = parse::parse_families(&text)
                .map_err(|e| Fail(EXIT_PARSE, format!("{path}: {e}")))?;
            let want = table.name().unwrap_or("");
            ff.patterns
                .iter()
                .find(|p| p.algebra == want)
                .or(ff.patterns.first())
                .cloned()
        }
    };
    if let Some(p) = stated {
        let expected = catalog::pattern_to_subspace(&p, table.ring())
            .map_err(|e| Fail(EXIT_PARSE, e.to_string()))?;
        let ctx = table.ctx();
        let same = sub.dim() == expected.dim()
            && sub.is_subspace_of(&ctx, &expected)
            && expected.is_subspace_of(&ctx, &sub);
        println!(
            "stated pattern {}: dim {} — {}",
            p.name,
            expected.dim(),
            if same { "MATCH" } else { "MISMATCH" }
        );
        if !same {
            return Err(Fail(EXIT_FAIL, "derivation span mismatch".into()));
        }
    }
    Ok(())
}

fn run_autverify(
    cat: &[CatalogEntry],
    target: &str,
    families: &Option<PathBuf>,
) -> Result<(), Fail> {
    let table = resolve_table(cat, target)?;
    let fams = match families {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            let ff = parse::parse_families(&text)
                .map_err(|e| Fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            ff.families
        }
        None => cat
            .iter()
            .find(|e| e.name == target)
            .map(|e| e.expected_aut.clone())
            .unwrap_or_default(),
    };
    if fams.is_empty() {
        return Err(Fail(
            EXIT_INFEASIBLE,
            format!("no automorphism families to verify for {target}"),
        ));
    }
    let mut failed = false;
    for fam in &fams {
        match aut::verify_family(&table, fam).map_err(|e| Fail(EXIT_PARSE, e.to_string()))? {
            FamilyVerdict::Verified => {
                println!(
                    "{}: VERIFIED ({} free parameters)",
                    fam.name,
                    fam.free_params().len()
                );
            }
            FamilyVerdict::Failed {
                entry,
                residual,
                witness,
            } => {
                failed = true;
                println!(
                    "{}: FAILED at ({}, {}, {}): residual {}",
                    fam.name, entry.0, entry.1, entry.2, residual
                );
                if let Some(w) = witness {
                    let vals: Vec<String> =
                        w.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    println!("  witness: {}", vals.join(", "));
                }
            }
            FamilyVerdict::Unverifiable(reason) => {
                println!("{}: UNVERIFIABLE ({reason})", fam.name);
            }
        }
    }
    if failed {
        Err(Fail(EXIT_FAIL, "family verification failed".into()))
    } else {
        Ok(())
    }
}

fn run_census(
    cat: &[CatalogEntry],
    target: &str,
    prime: u64,
    threads: usize,
    max_naive: u128,
) -> Result<(), Fail> {
    let table = resolve_table(cat, target)?;
    let result = census::census(&table, prime, threads, max_naive).map_err(|e| {
        let code = match e {
            census::CensusError::NotReducible(..) | census::CensusError::NotConstant => {
                EXIT_PARSE
            }
            _ => EXIT_INFEASIBLE,
        };
        Fail(code, e.to_string())
    })?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{} over F_{}: {} automorphisms, {} derivations ({} branches pruned, {:.3}s)",
        table.name().unwrap_or("(unnamed)"),
        result.p,
        result.aut_count,
        result.der_count,
        result.pruned,
        result.elapsed.as_secs_f64()
    );
    Ok(())
}

fn run_audit(cat: &[CatalogEntry], kinds: &[String], threads: usize) -> Result<(), Fail> {
    let records = audit::run_audit(cat, threads);
    let mut printed = 0usize;
    for r in &records {
        if kinds.is_empty() || kinds.iter().any(|k| k == &r.kind.to_string()) {
            println!("{r}");
            printed += 1;
        }
    }
    if printed == 0 {
        return Err(Fail(
            EXIT_PARSE,
            format!("no records match kinds {:?}", kinds),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_full_catalog(&cli.extra_catalog).and_then(|cat| match &cli.cmd {
        Cmd::Check { target } => run_check(&cat, target),
        Cmd::Der { target, pattern } => run_der(&cat, target, pattern),
        Cmd::Autverify { target, families } => run_autverify(&cat, target, families),
        Cmd::Census {
            target,
            prime,
            threads,
            max_naive,
        } => run_census(&cat, target, *prime, *threads, *max_naive),
        Cmd::Audit { records, threads } => run_audit(&cat, records, *threads),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
