//! Line-based plain-text formats for multiplication tables (`.alg`) and for
//! automorphism families / symbolic matrix patterns (`.fam`), plus canonical
//! serializers that round-trip through the parsers.
//!
//! Table format:
//!
//! ```text
//! algebra As_2^1 dim 2
//! e1*e1 = e2
//! ```
//!
//! Omitted products are zero. Scalar coefficients are exact: integers,
//! fractions, parameter names, `+ - * / ^`, parentheses. `#` starts a comment.
//!
//! Family format:
//!
//! ```text
//! family Aut(As_2^1) algebra As_2^1
//! row a11, 0
//! row a21, a11^2
//! nonzero: a11
//! ```
//!
//! `pattern` blocks use the same row syntax with polynomial entries and
//! describe the printed derivation/automorphism matrices; `require: p = 0`
//! adds a polynomial equation, `unverifiable: <reason>` flags a family that
//! cannot be checked symbolically.

use num::{BigInt, One};

use crate::algebra::AlgebraTable;
use crate::aut::ParametricMatrixFamily;
use crate::linalg::Mat;
use crate::scalar::{MultiPoly, PolyRing, Rat, RatFun};

/// A printed matrix whose entries are linear in pattern symbols
/// (`d11`, `a21`, …) with coefficients that may involve the structure
/// parameter `alpha`, e.g. a theorem's derivation matrix.
#[derive(Clone, Debug)]
pub struct SymbolicPattern {
    pub name: String,
    /// Catalog name of the algebra the pattern belongs to.
    pub algebra: String,
    pub n: usize,
    pub ring: PolyRing,
    pub entries: Vec<Vec<RatFun>>,
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Int(BigInt),
    Name(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    col: usize,
}

/// Lexes one expression fragment; `col0` is the 1-based column of its first
/// byte within the source line.
fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<Tok>, ParseError> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = col0 + i;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().expect("digits");
            toks.push(Tok {
                kind: TokKind::Int(n),
                col,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            toks.push(Tok {
                kind: TokKind::Name(s[start..i].to_string()),
                col,
            });
        } else if "+-*/^()".contains(c) {
            toks.push(Tok {
                kind: TokKind::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

/// `Some(k)` (1-based) when the name denotes a basis element `e<k>`.
fn basis_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('e')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Collects parameter names (first-appearance order, deduplicated) from an
/// expression fragment; basis names are skipped when `skip_basis` is set.
fn collect_names(s: &str, line: usize, skip_basis: bool, out: &mut Vec<String>) -> Result<(), ParseError> {
    for t in lex(s, line, 1)? {
        if let TokKind::Name(name) = t.kind {
            if skip_basis && basis_index(&name).is_some() {
                continue;
            }
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------- expressions

/// Parse-time value: a scalar, or a vector (linear combination of basis
/// elements) in table right-hand sides.
#[derive(Clone, Debug)]
enum Val {
    S(RatFun),
    V(Vec<RatFun>),
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a PolyRing,
    line: usize,
    /// `Some(n)` enables basis names `e1..en` and vector values.
    dim: Option<usize>,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let col = self
            .peek()
            .map(|t| t.col)
            .or_else(|| self.toks.last().map(|t| t.col + 1))
            .unwrap_or(1);
        ParseError::new(self.line, col, msg)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok { kind: TokKind::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            if self.eat_sym('+') {
                let rhs = self.parse_term()?;
                acc = self.combine_add(acc, rhs)?;
            } else if self.eat_sym('-') {
                let rhs = self.parse_term()?;
                acc = self.combine_add(acc, self.negate(rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            if self.eat_sym('*') {
                let rhs = self.parse_factor()?;
                acc = self.combine_mul(acc, rhs)?;
            } else if self.eat_sym('/') {
                let rhs = self.parse_factor()?;
                acc = self.combine_div(acc, rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Val, ParseError> {
        if self.eat_sym('-') {
            let v = self.parse_factor()?;
            return Ok(self.negate(v));
        }
        let mut base = self.parse_atom()?;
        if self.eat_sym('^') {
            let e = match self.peek() {
                Some(Tok { kind: TokKind::Int(n), .. }) => {
                    use num::ToPrimitive;
                    n.to_u32().ok_or_else(|| self.err_here("exponent too large"))?
                }
                _ => return Err(self.err_here("expected integer exponent after `^`")),
            };
            self.pos += 1;
            match base {
                Val::S(s) => {
                    let mut acc = RatFun::one(self.ring);
                    for _ in 0..e {
                        acc = acc.mul(&s);
                    }
                    base = Val::S(acc);
                }
                Val::V(_) => return Err(self.err_here("cannot exponentiate a basis element")),
            }
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Val, ParseError> {
        match self.peek().cloned() {
            Some(Tok { kind: TokKind::Int(n), .. }) => {
                self.pos += 1;
                Ok(Val::S(RatFun::from_rat(self.ring, Rat::from(n))))
            }
            Some(Tok { kind: TokKind::Name(name), col }) => {
                self.pos += 1;
                if let (Some(n), Some(k)) = (self.dim, basis_index(&name)) {
                    if k < 1 || k > n {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            format!("basis index {k} out of range 1..={n}"),
                        ));
                    }
                    let mut v = vec![RatFun::zero(self.ring); n];
                    v[k - 1] = RatFun::one(self.ring);
                    return Ok(Val::V(v));
                }
                match self.ring.var_index(&name) {
                    Some(idx) => Ok(Val::S(RatFun::var(self.ring, idx))),
                    None => Err(ParseError::new(
                        self.line,
                        col,
                        format!("unknown name `{name}`"),
                    )),
                }
            }
            Some(Tok { kind: TokKind::Sym('('), .. }) => {
                self.pos += 1;
                let v = self.parse_expr()?;
                if !self.eat_sym(')') {
                    return Err(self.err_here("expected `)`"));
                }
                Ok(v)
            }
            _ => Err(self.err_here("expected number, name, or `(`")),
        }
    }

    fn negate(&self, v: Val) -> Val {
        match v {
            Val::S(s) => Val::S(s.neg()),
            Val::V(v) => Val::V(v.iter().map(RatFun::neg).collect()),
        }
    }

    fn combine_add(&self, a: Val, b: Val) -> Result<Val, ParseError> {
        match (a, b) {
            (Val::S(x), Val::S(y)) => Ok(Val::S(x.add(&y))),
            (Val::V(x), Val::V(y)) => {
                Ok(Val::V(x.iter().zip(&y).map(|(p, q)| p.add(q)).collect()))
            }
            (Val::S(x), Val::V(y)) | (Val::V(y), Val::S(x)) => {
                if x.is_zero() {
                    Ok(Val::V(y))
                } else {
                    Err(self.err_here("cannot add a scalar to a basis combination"))
                }
            }
        }
    }

    fn combine_mul(&self, a: Val, b: Val) -> Result<Val, ParseError> {
        match (a, b) {
            (Val::S(x), Val::S(y)) => Ok(Val::S(x.mul(&y))),
            (Val::S(x), Val::V(y)) | (Val::V(y), Val::S(x)) => {
                Ok(Val::V(y.iter().map(|p| p.mul(&x)).collect()))
            }
            (Val::V(_), Val::V(_)) => {
                Err(self.err_here("cannot multiply two basis elements in a table entry"))
            }
        }
    }

    fn combine_div(&self, a: Val, b: Val) -> Result<Val, ParseError> {
        let y = match b {
            Val::S(y) => y,
            Val::V(_) => return Err(self.err_here("cannot divide by a basis element")),
        };
        if y.is_zero() {
            return Err(self.err_here("division by zero"));
        }
        match a {
            Val::S(x) => Ok(Val::S(x.div(&y).expect("nonzero divisor"))),
            Val::V(x) => Ok(Val::V(
                x.iter()
                    .map(|p| p.div(&y).expect("nonzero divisor"))
                    .collect(),
            )),
        }
    }
}

fn parse_value(
    s: &str,
    line: usize,
    col0: usize,
    ring: &PolyRing,
    dim: Option<usize>,
) -> Result<Val, ParseError> {
    let toks = lex(s, line, col0)?;
    if toks.is_empty() {
        return Err(ParseError::new(line, col0, "empty expression"));
    }
    let mut p = ExprParser {
        toks,
        pos: 0,
        ring,
        line,
        dim,
    };
    let v = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here("trailing input after expression"));
    }
    Ok(v)
}

/// Parses a scalar expression over the given ring.
pub fn parse_scalar(s: &str, line: usize, ring: &PolyRing) -> Result<RatFun, ParseError> {
    match parse_value(s, line, 1, ring, None)? {
        Val::S(x) => Ok(x),
        Val::V(_) => unreachable!("basis names disabled"),
    }
}

fn scalar_to_poly(x: &RatFun, line: usize) -> Result<MultiPoly, ParseError> {
    match x.den().as_constant() {
        Some(c) => Ok(x.num().scale(&(Rat::one() / c))),
        None => Err(ParseError::new(
            line,
            1,
            format!("polynomial required, found denominator {}", x.den()),
        )),
    }
}

// ------------------------------------------------------------ .alg files

struct AlgBlock {
    name: String,
    dim: usize,
    line: usize,
    products: Vec<(usize, usize, usize, String, usize)>, // i, j, line, rhs, rhs col
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

fn split_blocks_alg(text: &str) -> Result<Vec<AlgBlock>, ParseError> {
    let mut blocks: Vec<AlgBlock> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("algebra ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[1] != "dim" {
                return Err(ParseError::new(
                    lineno,
                    1,
                    "expected `algebra <name> dim <n>`",
                ));
            }
            let dim: usize = parts[2].parse().map_err(|_| {
                ParseError::new(lineno, 1, format!("invalid dimension `{}`", parts[2]))
            })?;
            blocks.push(AlgBlock {
                name: parts[0].to_string(),
                dim,
                line: lineno,
                products: Vec::new(),
            });
        } else if let Some(eq) = line.find('=') {
            let block = blocks.last_mut().ok_or_else(|| {
                ParseError::new(lineno, 1, "product line before any `algebra` header")
            })?;
            let lhs = line[..eq].trim();
            let rhs = line[eq + 1..].trim().to_string();
            let toks = lex(lhs, lineno, 1)?;
            let bad = || ParseError::new(lineno, 1, "expected `e<i>*e<j> = ...`");
            if toks.len() != 3 {
                return Err(bad());
            }
            let i = match &toks[0].kind {
                TokKind::Name(n) => basis_index(n).ok_or_else(bad)?,
                _ => return Err(bad()),
            };
            if toks[1].kind != TokKind::Sym('*') {
                return Err(bad());
            }
            let j = match &toks[2].kind {
                TokKind::Name(n) => basis_index(n).ok_or_else(bad)?,
                _ => return Err(bad()),
            };
            for b in [i, j] {
                if b < 1 || b > block.dim {
                    return Err(ParseError::new(
                        lineno,
                        1,
                        format!("basis index {b} out of range 1..={}", block.dim),
                    ));
                }
            }
            // column of the right-hand side within the raw line
            let col = raw.find('=').unwrap() + 2;
            block.products.push((i, j, lineno, rhs, col));
        } else {
            return Err(ParseError::new(lineno, 1, "unrecognized line"));
        }
    }
    Ok(blocks)
}

/// Parses every `algebra` block in the text.
pub fn parse_algebras(text: &str) -> Result<Vec<AlgebraTable>, ParseError> {
    let blocks = split_blocks_alg(text)?;
    let mut out = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut names = Vec::new();
        for (_, _, lineno, rhs, _) in &block.products {
            collect_names(rhs, *lineno, true, &mut names)?;
        }
        let ring = PolyRing::new(names);
        let mut table = AlgebraTable::zero(Some(block.name.clone()), block.dim, ring.clone())
            .map_err(|e| ParseError::new(block.line, 1, e.to_string()))?;
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, lineno, rhs, col) in &block.products {
            if !seen.insert((*i, *j)) {
                return Err(ParseError::new(
                    *lineno,
                    1,
                    format!("duplicate product line for e{i}*e{j}"),
                ));
            }
            let v = match parse_value(rhs, *lineno, *col, &ring, Some(block.dim))? {
                Val::V(v) => v,
                Val::S(s) if s.is_zero() => vec![RatFun::zero(&ring); block.dim],
                Val::S(_) => {
                    return Err(ParseError::new(
                        *lineno,
                        *col,
                        "right-hand side must be a combination of basis elements (or 0)",
                    ))
                }
            };
            for (k, coeff) in v.into_iter().enumerate() {
                table.set_gamma(i - 1, j - 1, k, coeff);
            }
        }
        out.push(table);
    }
    Ok(out)
}

/// Parses a file that must contain exactly one table.
pub fn parse_table(text: &str) -> Result<AlgebraTable, ParseError> {
    let mut tables = parse_algebras(text)?;
    match tables.len() {
        1 => Ok(tables.pop().unwrap()),
        0 => Err(ParseError::new(1, 1, "no `algebra` block found")),
        n => Err(ParseError::new(1, 1, format!("expected one algebra, found {n}"))),
    }
}

// ------------------------------------------------------------ .fam files

enum FamKind {
    Family,
    Pattern,
}

struct FamBlock {
    kind: FamKind,
    name: String,
    algebra: String,
    line: usize,
    rows: Vec<(usize, Vec<(String, usize)>)>, // line, entries with columns
    nonzero: Vec<(usize, String)>,
    require: Vec<(usize, String)>,
    unverifiable: Option<String>,
}

/// Families and patterns parsed from one `.fam` text, in file order.
#[derive(Default)]
pub struct FamilyFile {
    pub families: Vec<ParametricMatrixFamily>,
    pub patterns: Vec<SymbolicPattern>,
}

pub fn parse_families(text: &str) -> Result<FamilyFile, ParseError> {
    let mut blocks: Vec<FamBlock> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let header = |kw: &str, rest: &str| -> Result<(String, String), ParseError> {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[1] != "algebra" {
                return Err(ParseError::new(
                    lineno,
                    1,
                    format!("expected `{kw} <name> algebra <algebra>`"),
                ));
            }
            Ok((parts[0].to_string(), parts[2].to_string()))
        };
        if let Some(rest) = line.strip_prefix("family ") {
            let (name, algebra) = header("family", rest)?;
            blocks.push(FamBlock {
                kind: FamKind::Family,
                name,
                algebra,
                line: lineno,
                rows: Vec::new(),
                nonzero: Vec::new(),
                require: Vec::new(),
                unverifiable: None,
            });
            continue;
        }
        if let Some(rest) = line.strip_prefix("pattern ") {
            let (name, algebra) = header("pattern", rest)?;
            blocks.push(FamBlock {
                kind: FamKind::Pattern,
                name,
                algebra,
                line: lineno,
                rows: Vec::new(),
                nonzero: Vec::new(),
                require: Vec::new(),
                unverifiable: None,
            });
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| {
            ParseError::new(lineno, 1, "content before any `family`/`pattern` header")
        })?;
        if let Some(rest) = line.strip_prefix("row ") {
            let base = raw.find("row ").unwrap() + 4;
            let mut entries = Vec::new();
            let mut col = base + 1;
            for piece in rest.split(',') {
                entries.push((piece.trim().to_string(), col));
                col += piece.len() + 1;
            }
            block.rows.push((lineno, entries));
        } else if let Some(rest) = line.strip_prefix("nonzero:") {
            block.nonzero.push((lineno, rest.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("require:") {
            let body = rest.trim();
            let body = body.strip_suffix("= 0").or_else(|| body.strip_suffix("=0")).unwrap_or(body);
            block.require.push((lineno, body.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("unverifiable:") {
            block.unverifiable = Some(rest.trim().to_string());
        } else {
            return Err(ParseError::new(lineno, 1, "unrecognized line"));
        }
    }

    let mut out = FamilyFile::default();
    for block in blocks {
        let n = block.rows.len();
        if n == 0 {
            return Err(ParseError::new(
                block.line,
                1,
                format!("`{}` has no rows", block.name),
            ));
        }
        for (lineno, entries) in &block.rows {
            if entries.len() != n {
                return Err(ParseError::new(
                    *lineno,
                    1,
                    format!("expected {n} entries per row, found {}", entries.len()),
                ));
            }
        }
        let mut names = Vec::new();
        for (lineno, entries) in &block.rows {
            for (e, _) in entries {
                collect_names(e, *lineno, false, &mut names)?;
            }
        }
        for (lineno, e) in block.nonzero.iter().chain(&block.require) {
            collect_names(e, *lineno, false, &mut names)?;
        }
        let ring = PolyRing::new(names);
        let parse_rows = |dim: Option<usize>| -> Result<Vec<Vec<RatFun>>, ParseError> {
            let mut rows = Vec::with_capacity(n);
            for (lineno, entries) in &block.rows {
                let mut row = Vec::with_capacity(n);
                for (e, col) in entries {
                    match parse_value(e, *lineno, *col, &ring, dim)? {
                        Val::S(s) => row.push(s),
                        Val::V(_) => unreachable!("basis names disabled"),
                    }
                }
                rows.push(row);
            }
            Ok(rows)
        };
        let rows = parse_rows(None)?;
        let nonzero = block
            .nonzero
            .iter()
            .map(|(lineno, e)| {
                let s = parse_scalar(e, *lineno, &ring)?;
                scalar_to_poly(&s, *lineno)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let require = block
            .require
            .iter()
            .map(|(lineno, e)| {
                let s = parse_scalar(e, *lineno, &ring)?;
                scalar_to_poly(&s, *lineno)
            })
            .collect::<Result<Vec<_>, _>>()?;
        match block.kind {
            FamKind::Family => out.families.push(ParametricMatrixFamily {
                name: block.name,
                algebra: block.algebra,
                n,
                ring: ring.clone(),
                entries: Mat::from_rows(rows),
                nonvanishing: nonzero,
                equations: require,
                unverifiable: block.unverifiable,
            }),
            FamKind::Pattern => {
                if !block.nonzero.is_empty() || !block.require.is_empty() {
                    return Err(ParseError::new(
                        block.line,
                        1,
                        "patterns take no constraints",
                    ));
                }
                out.patterns.push(SymbolicPattern {
                    name: block.name,
                    algebra: block.algebra,
                    n,
                    ring,
                    entries: rows,
                });
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ serializers

fn coeff_text(c: &RatFun) -> String {
    let s = c.to_string();
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

/// Canonical text form; parses back to the same table.
pub fn serialize_table(a: &AlgebraTable) -> String {
    let n = a.dim();
    let mut out = format!("algebra {} dim {}\n", a.name().unwrap_or("A"), n);
    for i in 0..n {
        for j in 0..n {
            let mut terms = Vec::new();
            for k in 0..n {
                let c = a.gamma(i, j, k);
                if c.is_zero() {
                    continue;
                }
                let one = RatFun::one(a.ring());
                if *c == one {
                    terms.push(format!("e{}", k + 1));
                } else if *c == one.neg() {
                    terms.push(format!("-e{}", k + 1));
                } else {
                    terms.push(format!("{}*e{}", coeff_text(c), k + 1));
                }
            }
            if !terms.is_empty() {
                out.push_str(&format!("e{}*e{} = {}\n", i + 1, j + 1, terms.join(" + ")));
            }
        }
    }
    out
}

fn serialize_rows(out: &mut String, entries: impl Iterator<Item = Vec<String>>) {
    for row in entries {
        out.push_str("row ");
        out.push_str(&row.join(", "));
        out.push('\n');
    }
}

pub fn serialize_family(f: &ParametricMatrixFamily) -> String {
    let mut out = format!("family {} algebra {}\n", f.name, f.algebra);
    serialize_rows(
        &mut out,
        (0..f.n).map(|r| (0..f.n).map(|c| f.entries.at(r, c).to_string()).collect()),
    );
    for p in &f.nonvanishing {
        out.push_str(&format!("nonzero: {p}\n"));
    }
    for p in &f.equations {
        out.push_str(&format!("require: {p} = 0\n"));
    }
    if let Some(reason) = &f.unverifiable {
        out.push_str(&format!("unverifiable: {reason}\n"));
    }
    out
}

pub fn serialize_pattern(p: &SymbolicPattern) -> String {
    let mut out = format!("pattern {} algebra {}\n", p.name, p.algebra);
    serialize_rows(
        &mut out,
        p.entries
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect()),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn minimal_table() {
        let a = parse_table("algebra As_2^1 dim 2\ne1*e1 = e2\n").unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.name(), Some("As_2^1"));
        assert_eq!(a.gamma(0, 0, 1).as_rational().unwrap(), rat(1, 1));
        assert!(a.gamma(0, 0, 0).is_zero());
        assert!(a.check_associativity().is_empty());
    }

    #[test]
    fn zero_algebra_header_only() {
        let a = parse_table("algebra Z dim 3\n").unwrap();
        assert_eq!(a.dim(), 3);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(a.gamma(i, j, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn alpha_carrier() {
        let a = parse_table("algebra P dim 2\ne1*e1 = e1 + alpha*e2\n").unwrap();
        assert_eq!(a.ring().vars(), ["alpha".to_string()]);
        assert_eq!(a.gamma(0, 0, 0).as_rational().unwrap(), rat(1, 1));
        assert_eq!(*a.gamma(0, 0, 1), RatFun::var(a.ring(), 0));
    }

    #[test]
    fn rational_and_negative_coefficients() {
        let a = parse_table("algebra T dim 3\ne2*e1 = -e3 + 1/2*e1\ne1*e2 = (2/3)*e2\n").unwrap();
        assert_eq!(a.gamma(1, 0, 2).as_rational().unwrap(), rat(-1, 1));
        assert_eq!(a.gamma(1, 0, 0).as_rational().unwrap(), rat(1, 2));
        assert_eq!(a.gamma(0, 1, 1).as_rational().unwrap(), rat(2, 3));
    }

    #[test]
    fn positioned_errors() {
        // index out of range
        let e = parse_table("algebra A dim 2\ne1*e3 = e1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("out of range"));
        // duplicate product
        let e = parse_table("algebra A dim 2\ne1*e1 = e2\ne1*e1 = e1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("duplicate"));
        // malformed scalar
        let e = parse_table("algebra A dim 2\ne1*e1 = $e2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unexpected character"));
        // empty file
        let e = parse_table("").unwrap_err();
        assert!(e.msg.contains("no `algebra` block"));
        // unknown parameter in a family context never occurs (names collected),
        // but a lone `=` line is rejected
        let e = parse_table("algebra A dim 2\n= e2\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\nalgebra A dim 2 # trailing\n\ne1*e1 = e2 # product\n";
        let a = parse_table(text).unwrap();
        assert_eq!(a.gamma(0, 0, 1).as_rational().unwrap(), rat(1, 1));
    }

    #[test]
    fn family_block() {
        let text = "family Aut(As_2^1) algebra As_2^1\nrow a11, 0\nrow a21, a11^2\nnonzero: a11\n";
        let ff = parse_families(text).unwrap();
        assert_eq!(ff.families.len(), 1);
        let f = &ff.families[0];
        assert_eq!(f.n, 2);
        assert_eq!(f.algebra, "As_2^1");
        assert_eq!(f.ring.vars(), ["a11".to_string(), "a21".to_string()]);
        let a11 = RatFun::var(&f.ring, 0);
        assert_eq!(*f.entries.at(1, 1), a11.mul(&a11));
        assert_eq!(f.nonvanishing, vec![MultiPoly::var(&f.ring, 0)]);
        assert!(f.unverifiable.is_none());
    }

    #[test]
    fn pattern_block_and_flags() {
        let text = "pattern D(As_3^1) algebra As_3^1\nrow d11, 0, 0\nrow d21, d22, d23\nrow 0, 0, d22 - d11\n\nfamily F algebra X\nrow a11\nrequire: a11^2 - 1 = 0\nunverifiable: radical entries\n";
        let ff = parse_families(text).unwrap();
        assert_eq!(ff.patterns.len(), 1);
        let p = &ff.patterns[0];
        assert_eq!(p.n, 3);
        let d11 = RatFun::var(&p.ring, p.ring.var_index("d11").unwrap());
        let d22 = RatFun::var(&p.ring, p.ring.var_index("d22").unwrap());
        assert_eq!(p.entries[2][2], d22.sub(&d11));
        let f = &ff.families[0];
        assert_eq!(f.equations.len(), 1);
        assert_eq!(f.unverifiable.as_deref(), Some("radical entries"));
    }

    #[test]
    fn table_round_trip() {
        let texts = [
            "algebra As_2^1 dim 2\ne1*e1 = e2\n",
            "algebra As_4^4 dim 4\ne1*e2 = e3\ne2*e1 = -e3\ne2*e2 = e4\n",
            "algebra P dim 2\ne1*e1 = e1 + alpha*e2\n",
            "algebra Z dim 3\n",
        ];
        for t in texts {
            let a = parse_table(t).unwrap();
            assert_eq!(serialize_table(&a), *t);
            let b = parse_table(&serialize_table(&a)).unwrap();
            assert_eq!(serialize_table(&b), serialize_table(&a));
        }
    }

    #[test]
    fn family_round_trip() {
        let text = "family Aut(As_2^1) algebra As_2^1\nrow a11, 0\nrow a21, a11^2\nnonzero: a11\n";
        let ff = parse_families(text).unwrap();
        assert_eq!(serialize_family(&ff.families[0]), text);
        let text2 = "pattern D(As_2^1) algebra As_2^1\nrow d11, 0\nrow d21, 2*d11\n";
        let ff2 = parse_families(text2).unwrap();
        assert_eq!(serialize_pattern(&ff2.patterns[0]), text2);
    }
}
