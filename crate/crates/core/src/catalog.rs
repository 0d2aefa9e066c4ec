//! Catalog of algebras, degeneration witnesses, closed sets, and
//! isomorphism witnesses, with a deterministic batch verification driver.
//!
//! File formats are line-oriented UTF-8; `#` starts a comment.  See the
//! project README for a grammar summary.  Families are stored once with
//! symbolic parameters; specializations are produced by substitution and
//! written `NAME(alpha=1/2, beta=-1/2)`, optionally with a basis
//! permutation `NAME(alpha=1/2; basis=1,3,2)`.

use crate::algebra::AlgebraDef;
use crate::cohomology::{self, Cocycle};
use crate::degeneration::{self, ClosedSet};
use crate::error::{Error, Result};
use crate::identities::{check_identity_alg, IdentityName, Verdict};
use crate::linalg::{self, Matrix};
use crate::scalar::{parse_linear, parse_linear_combo, Scalar};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

pub type Bindings = BTreeMap<String, Scalar>;

#[derive(Debug, Clone)]
pub struct NameSpec {
    pub name: String,
    pub bindings: Bindings,
    /// optional representative basis, as a permutation of 1..dim
    pub basis: Option<Vec<usize>>,
}

impl fmt::Display for NameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() && self.basis.is_none() {
            return write!(f, "{}", self.name);
        }
        let binds: Vec<String> = self
            .bindings
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}({}", self.name, binds.join(","))?;
        if let Some(b) = &self.basis {
            let b: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "; basis={}", b.join(","))?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone)]
pub enum Claim {
    Identity { id: IdentityName, at: Bindings },
    DerDim { dim: usize, at: Bindings },
    OrbitDim { value: usize, family: bool, at: Bindings },
    Z2Dim(usize),
    PlusPart(String),
    CocycleCoords(Cocycle),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub algebra: AlgebraDef,
    pub section: String,
    pub provenance: String,
    /// name of the family whose base point this parameterless entry is
    pub base_of: Option<String>,
    /// excluded joint parameter assignments, e.g. alpha = 0
    pub excludes: Vec<Bindings>,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone)]
pub struct DegenWitness {
    pub id: String,
    pub source: String,
    pub target: String,
    pub index: Bindings,
    pub basis: Matrix,
}

#[derive(Debug, Clone)]
pub struct IsoWitness {
    pub id: String,
    pub source: NameSpec,
    pub target: NameSpec,
    /// column j = image of source e_j in the target basis
    pub matrix: Matrix,
}

#[derive(Debug, Clone)]
pub struct ClosedSetFile {
    pub set: ClosedSet,
    pub sources: Vec<NameSpec>,
    pub targets: Vec<NameSpec>,
    /// (pinned algebra, pinned set parameters)
    pub samples: Vec<(NameSpec, Bindings)>,
}

#[derive(Debug, Clone, Default)]
pub struct Expectations {
    pub counts: Vec<(String, usize)>,
    /// component lists: label -> (members, expected rigid count)
    pub components: BTreeMap<String, (Vec<NameSpec>, usize)>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub entries: BTreeMap<String, CatalogEntry>,
    pub witnesses: Vec<DegenWitness>,
    pub closed_sets: Vec<ClosedSetFile>,
    pub isos: Vec<IsoWitness>,
    pub expectations: Expectations,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Lines<'a> {
    file: String,
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(file: &str, text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = match l.find('#') {
                    Some(p) => &l[..p],
                    None => l,
                };
                let l = l.trim();
                if l.is_empty() {
                    None
                } else {
                    Some((i + 1, l))
                }
            })
            .collect();
        Lines {
            file: file.to_string(),
            lines,
            pos: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let x = self.lines.get(self.pos).copied();
        if x.is_some() {
            self.pos += 1;
        }
        x
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::parse(&self.file, line, msg)
    }
}

fn parse_bindings(src: &str, allowed: Option<&[String]>, file: &str, line: usize) -> Result<Bindings> {
    let mut out = Bindings::new();
    for part in src.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(file, line, format!("expected name=value in `{part}`")))?;
        let val = Scalar::parse_with_vars(v.trim(), allowed)
            .map_err(|e| Error::parse(file, line, format!("binding `{part}`: {e}")))?;
        out.insert(k.trim().to_string(), val);
    }
    Ok(out)
}

fn parse_name_spec(src: &str, allowed: Option<&[String]>, file: &str, line: usize) -> Result<NameSpec> {
    let src = src.trim();
    let Some(open) = src.find('(') else {
        return Ok(NameSpec {
            name: src.to_string(),
            bindings: Bindings::new(),
            basis: None,
        });
    };
    if !src.ends_with(')') {
        return Err(Error::parse(file, line, format!("unbalanced `(` in `{src}`")));
    }
    let name = src[..open].trim().to_string();
    let inner = &src[open + 1..src.len() - 1];
    let (bind_part, basis_part) = match inner.split_once(';') {
        Some((a, b)) => (a, Some(b)),
        None => (inner, None),
    };
    let bindings = parse_bindings(bind_part, allowed, file, line)?;
    let basis = match basis_part {
        None => None,
        Some(b) => {
            let b = b.trim();
            let b = b
                .strip_prefix("basis=")
                .ok_or_else(|| Error::parse(file, line, "expected `basis=i,j,...` after `;`"))?;
            let perm: std::result::Result<Vec<usize>, _> =
                b.split(',').map(|x| x.trim().parse::<usize>()).collect();
            Some(perm.map_err(|_| Error::parse(file, line, "bad basis permutation"))?)
        }
    };
    Ok(NameSpec {
        name,
        bindings,
        basis,
    })
}

fn parse_usize(s: &str, file: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(file, line, format!("expected an integer, got `{s}`")))
}

fn parse_alg_file(file: &str, text: &str) -> Result<CatalogEntry> {
    parse_alg_file_opts(file, text, true)
}

/// Parse a standalone `.alg` file for single-file CLI use; `section` and
/// `provenance` are optional there.
pub fn parse_single_algebra(file: &str, text: &str) -> Result<AlgebraDef> {
    Ok(parse_alg_file_opts(file, text, false)?.algebra)
}

fn parse_alg_file_opts(file: &str, text: &str, strict: bool) -> Result<CatalogEntry> {
    let mut lines = Lines::new(file, text);
    let (l0, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty file"))?;
    let name = first
        .strip_prefix("algebra ")
        .ok_or_else(|| Error::parse(file, l0, "expected `algebra <NAME>`"))?
        .trim()
        .to_string();
    let mut dim: Option<usize> = None;
    let mut params: Vec<String> = Vec::new();
    let mut section = String::new();
    let mut provenance = String::new();
    let mut base_of = None;
    let mut excludes = Vec::new();
    let mut products: Vec<(usize, usize, String, usize)> = Vec::new();
    let mut claims_raw: Vec<(usize, String)> = Vec::new();
    let mut ended = false;
    while let Some((ln, l)) = lines.next() {
        if l == "end" {
            ended = true;
            break;
        }
        if let Some(rest) = l.strip_prefix("dim ") {
            dim = Some(parse_usize(rest.trim(), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("params") {
            params = rest.split_whitespace().map(|s| s.to_string()).collect();
        } else if let Some(rest) = l.strip_prefix("section ") {
            section = rest.trim().to_string();
        } else if let Some(rest) = l.strip_prefix("provenance ") {
            provenance = rest.trim().to_string();
        } else if let Some(rest) = l.strip_prefix("base_of ") {
            base_of = Some(rest.trim().to_string());
        } else if let Some(rest) = l.strip_prefix("exclude ") {
            excludes.push(parse_bindings(rest, Some(&[]), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("claim ") {
            claims_raw.push((ln, rest.to_string()));
        } else if l.starts_with('e') {
            // product line: e<i>*e<j> = <combo>
            let (lhs, rhs) = l
                .split_once('=')
                .ok_or_else(|| Error::parse(file, ln, "expected `e<i>*e<j> = <combo>`"))?;
            let lhs = lhs.trim().replace(' ', "");
            let (a, b) = lhs
                .split_once('*')
                .ok_or_else(|| Error::parse(file, ln, "expected `e<i>*e<j>` on the left"))?;
            let i = a
                .strip_prefix('e')
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(file, ln, "bad basis index"))?;
            let j = b
                .strip_prefix('e')
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(file, ln, "bad basis index"))?;
            products.push((i, j, rhs.trim().to_string(), ln));
        } else {
            return Err(lines.err(ln, format!("unrecognized line `{l}`")));
        }
    }
    if !ended {
        return Err(Error::parse(file, 1, "missing `end`"));
    }
    let dim = dim.ok_or_else(|| Error::parse(file, l0, "missing `dim`"))?;
    if strict && provenance.is_empty() {
        return Err(Error::parse(file, l0, "missing `provenance`"));
    }
    if strict && section.is_empty() {
        return Err(Error::parse(file, l0, "missing `section`"));
    }
    let mut c = vec![Scalar::zero(); dim * dim * dim];
    for (i, j, rhs, ln) in products {
        if i < 1 || i > dim || j < 1 || j > dim {
            return Err(Error::parse(file, ln, "basis index out of range"));
        }
        let combo = parse_linear_combo(&rhs, dim, &params)
            .map_err(|e| Error::parse(file, ln, e))?;
        for (k, s) in combo.into_iter().enumerate() {
            c[((i - 1) * dim + (j - 1)) * dim + k] = s;
        }
    }
    let algebra = AlgebraDef::new(&name, dim, params.clone(), c)?;
    let mut claims = Vec::new();
    for (ln, raw) in claims_raw {
        claims.push(parse_claim(&raw, &algebra, file, ln)?);
    }
    Ok(CatalogEntry {
        algebra,
        section,
        provenance,
        base_of,
        excludes,
        claims,
    })
}

fn split_at_bindings<'s>(rest: &'s str, file: &str, ln: usize) -> Result<(&'s str, Bindings)> {
    match rest.split_once(" at ") {
        Some((head, binds)) => Ok((head.trim(), parse_bindings(binds, Some(&[]), file, ln)?)),
        None => Ok((rest.trim(), Bindings::new())),
    }
}

fn parse_claim(raw: &str, algebra: &AlgebraDef, file: &str, ln: usize) -> Result<Claim> {
    let (kind, rest) = raw
        .split_once(' ')
        .ok_or_else(|| Error::parse(file, ln, "incomplete claim"))?;
    match kind {
        "identity" => {
            let (name, at) = split_at_bindings(rest, file, ln)?;
            Ok(Claim::Identity {
                id: name.parse()?,
                at,
            })
        }
        "der_dim" => {
            let (v, at) = split_at_bindings(rest, file, ln)?;
            Ok(Claim::DerDim {
                dim: parse_usize(v, file, ln)?,
                at,
            })
        }
        "orbit_dim" => {
            let (v, at) = split_at_bindings(rest, file, ln)?;
            let (v, family) = match v.strip_suffix(" family") {
                Some(x) => (x.trim(), true),
                None => (v, false),
            };
            Ok(Claim::OrbitDim {
                value: parse_usize(v, file, ln)?,
                family,
                at,
            })
        }
        "z2_dim" => Ok(Claim::Z2Dim(parse_usize(rest.trim(), file, ln)?)),
        "plus_part" => Ok(Claim::PlusPart(rest.trim().to_string())),
        "cocycle" => {
            let body = rest.trim();
            let body = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::parse(file, ln, "cocycle must be `[c1, ..., cn]`"))?;
            let comps: Vec<&str> = body.split(',').collect();
            let n = algebra.dim;
            if comps.len() != n {
                return Err(Error::parse(
                    file,
                    ln,
                    format!("cocycle needs {n} components, got {}", comps.len()),
                ));
            }
            let dvars: Vec<String> = (1..=n)
                .flat_map(|p| ((p + 1)..=n).map(move |q| format!("d{p}_{q}")))
                .collect();
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|p| ((p + 1)..=n).map(move |q| (p, q)))
                .collect();
            let mut mats = Vec::new();
            for comp in comps {
                let coeffs = parse_linear(comp.trim(), &dvars, &algebra.params)
                    .map_err(|e| Error::parse(file, ln, e))?;
                let mut m = Matrix::zero(n, n);
                for (idx, &(p, q)) in pairs.iter().enumerate() {
                    m.set(p - 1, q - 1, coeffs[idx].clone());
                    m.set(q - 1, p - 1, coeffs[idx].neg());
                }
                mats.push(m);
            }
            Ok(Claim::CocycleCoords(Cocycle::new(mats)?))
        }
        other => Err(Error::parse(file, ln, format!("unknown claim kind `{other}`"))),
    }
}

fn parse_wit_file(file: &str, text: &str, default_id: &str) -> Result<RawWitness> {
    let mut lines = Lines::new(file, text);
    let mut id = default_id.to_string();
    let (l0, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty file"))?;
    let mut header = first;
    let mut hline = l0;
    if let Some(rest) = first.strip_prefix("witness ") {
        id = rest.trim().to_string();
        let (l1, second) = lines
            .next()
            .ok_or_else(|| Error::parse(file, l0, "missing `degeneration` line"))?;
        header = second;
        hline = l1;
    }
    let rest = header
        .strip_prefix("degeneration ")
        .ok_or_else(|| Error::parse(file, hline, "expected `degeneration SRC -> TGT`"))?;
    let (src, tgt) = rest
        .split_once("->")
        .ok_or_else(|| Error::parse(file, hline, "expected `SRC -> TGT`"))?;
    let mut index_raw: Vec<(usize, String, String)> = Vec::new();
    let mut rows_raw: Vec<(usize, usize, String)> = Vec::new();
    let mut ended = false;
    while let Some((ln, l)) = lines.next() {
        if l == "end" {
            ended = true;
            break;
        }
        if let Some(rest) = l.strip_prefix("index ") {
            let (p, v) = rest
                .split_once('=')
                .ok_or_else(|| Error::parse(file, ln, "expected `index <param> = <expr>`"))?;
            index_raw.push((ln, p.trim().to_string(), v.trim().to_string()));
        } else if l.starts_with('E') {
            let (lhs, rhs) = l
                .split_once('=')
                .ok_or_else(|| Error::parse(file, ln, "expected `E<i> = <combo>`"))?;
            let i = lhs
                .trim()
                .strip_prefix('E')
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(file, ln, "bad row index"))?;
            rows_raw.push((ln, i, rhs.trim().to_string()));
        } else {
            return Err(lines.err(ln, format!("unrecognized line `{l}`")));
        }
    }
    if !ended {
        return Err(Error::parse(file, 1, "missing `end`"));
    }
    Ok(RawWitness {
        file: file.to_string(),
        id,
        source: src.trim().to_string(),
        target: tgt.trim().to_string(),
        index_raw,
        rows_raw,
    })
}

struct RawWitness {
    file: String,
    id: String,
    source: String,
    target: String,
    index_raw: Vec<(usize, String, String)>,
    rows_raw: Vec<(usize, usize, String)>,
}

fn parse_cset_file(file: &str, text: &str) -> Result<RawClosedSet> {
    let mut lines = Lines::new(file, text);
    let (l0, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty file"))?;
    let name = first
        .strip_prefix("closedset ")
        .ok_or_else(|| Error::parse(file, l0, "expected `closedset <NAME>`"))?
        .trim()
        .to_string();
    let mut dim = None;
    let mut params: Vec<String> = Vec::new();
    let mut eqs_raw: Vec<(usize, String)> = Vec::new();
    let mut spans = Vec::new();
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    let mut samples = Vec::new();
    let mut ended = false;
    while let Some((ln, l)) = lines.next() {
        if l == "end" {
            ended = true;
            break;
        }
        if let Some(rest) = l.strip_prefix("dim ") {
            dim = Some(parse_usize(rest.trim(), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("params") {
            params = rest.split_whitespace().map(|s| s.to_string()).collect();
        } else if let Some(rest) = l.strip_prefix("eq ") {
            eqs_raw.push((ln, rest.to_string()));
        } else if let Some(rest) = l.strip_prefix("span ") {
            let xs: Vec<&str> = rest.split_whitespace().collect();
            if xs.len() != 3 {
                return Err(Error::parse(file, ln, "expected `span p q r`"));
            }
            spans.push((
                parse_usize(xs[0], file, ln)?,
                parse_usize(xs[1], file, ln)?,
                parse_usize(xs[2], file, ln)?,
            ));
        } else if let Some(rest) = l.strip_prefix("sources ") {
            for nm in rest.split_whitespace() {
                sources.push(parse_name_spec(nm, Some(&params), file, ln)?);
            }
        } else if let Some(rest) = l.strip_prefix("source ") {
            sources.push(parse_name_spec(rest, Some(&params), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("targets ") {
            for nm in rest.split_whitespace() {
                targets.push(parse_name_spec(nm, Some(&params), file, ln)?);
            }
        } else if let Some(rest) = l.strip_prefix("target ") {
            targets.push(parse_name_spec(rest, Some(&params), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("sample ") {
            let (spec, binds) = match rest.split_once(" with ") {
                Some((a, b)) => (a, parse_bindings(b, Some(&[]), file, ln)?),
                None => (rest, Bindings::new()),
            };
            samples.push((parse_name_spec(spec, Some(&[]), file, ln)?, binds));
        } else {
            return Err(lines.err(ln, format!("unrecognized line `{l}`")));
        }
    }
    if !ended {
        return Err(Error::parse(file, 1, "missing `end`"));
    }
    let dim = dim.ok_or_else(|| Error::parse(file, l0, "missing `dim`"))?;
    Ok(RawClosedSet {
        file: file.to_string(),
        name,
        dim,
        params,
        eqs_raw,
        spans,
        sources,
        targets,
        samples,
    })
}

struct RawClosedSet {
    file: String,
    name: String,
    dim: usize,
    params: Vec<String>,
    eqs_raw: Vec<(usize, String)>,
    spans: Vec<(usize, usize, usize)>,
    sources: Vec<NameSpec>,
    targets: Vec<NameSpec>,
    samples: Vec<(NameSpec, Bindings)>,
}

fn parse_iso_file(file: &str, text: &str, default_id: &str) -> Result<RawIso> {
    let mut lines = Lines::new(file, text);
    let (l0, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty file"))?;
    let rest = first
        .strip_prefix("isomorphism ")
        .ok_or_else(|| Error::parse(file, l0, "expected `isomorphism SRC -> TGT`"))?;
    let (src, tgt) = rest
        .split_once("->")
        .ok_or_else(|| Error::parse(file, l0, "expected `SRC -> TGT`"))?;
    let mut rows: Vec<(usize, usize, String)> = Vec::new();
    let mut ended = false;
    while let Some((ln, l)) = lines.next() {
        if l == "end" {
            ended = true;
            break;
        }
        let (lhs, rhs) = l
            .split_once('=')
            .ok_or_else(|| Error::parse(file, ln, "expected `g<i> = <combo>`"))?;
        let i = lhs
            .trim()
            .strip_prefix('g')
            .and_then(|x| x.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(file, ln, "expected `g<i>`"))?;
        rows.push((ln, i, rhs.trim().to_string()));
    }
    if !ended {
        return Err(Error::parse(file, 1, "missing `end`"));
    }
    Ok(RawIso {
        file: file.to_string(),
        id: default_id.to_string(),
        source_raw: src.trim().to_string(),
        target_raw: tgt.trim().to_string(),
        rows,
        header_line: l0,
    })
}

struct RawIso {
    file: String,
    id: String,
    source_raw: String,
    target_raw: String,
    rows: Vec<(usize, usize, String)>,
    header_line: usize,
}

fn parse_counts_file(file: &str, text: &str, exp: &mut Expectations) -> Result<()> {
    let mut lines = Lines::new(file, text);
    while let Some((ln, l)) = lines.next() {
        if let Some(rest) = l.strip_prefix("expect ") {
            let (k, v) = rest
                .rsplit_once(' ')
                .ok_or_else(|| Error::parse(file, ln, "expected `expect <key> <count>`"))?;
            exp.counts
                .push((k.trim().to_string(), parse_usize(v.trim(), file, ln)?));
        } else if let Some(rest) = l.strip_prefix("component ") {
            let (label, spec) = rest
                .split_once(' ')
                .ok_or_else(|| Error::parse(file, ln, "expected `component <label> <spec>`"))?;
            let spec = parse_name_spec(spec, Some(&[]), file, ln)?;
            exp.components
                .entry(label.to_string())
                .or_insert_with(|| (Vec::new(), 0))
                .0
                .push(spec);
        } else if let Some(rest) = l.strip_prefix("rigid ") {
            let (label, v) = rest
                .split_once(' ')
                .ok_or_else(|| Error::parse(file, ln, "expected `rigid <label> <count>`"))?;
            exp.components
                .entry(label.to_string())
                .or_insert_with(|| (Vec::new(), 0))
                .1 = parse_usize(v.trim(), file, ln)?;
        } else {
            return Err(lines.err(ln, format!("unrecognized line `{l}`")));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Loading & resolution
// ---------------------------------------------------------------------------

fn collect_files(root: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let rd = std::fs::read_dir(&dir).map_err(|e| Error::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
        for entry in rd {
            let entry = entry.map_err(|e| Error::Io {
                path: dir.display().to_string(),
                source: e,
            })?;
            let p = entry.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_default()
}

/// file stem qualified by its parent directory, e.g. `geo2/a19_to_a13`
fn qualified_stem(path: &Path) -> String {
    let s = stem(path);
    match path.parent().and_then(|p| p.file_name()) {
        Some(d) => format!("{}/{}", d.to_string_lossy(), s),
        None => s,
    }
}

impl Catalog {
    pub fn load(root: &Path) -> Result<Catalog> {
        let files = collect_files(root)?;
        let mut entries: BTreeMap<String, CatalogEntry> = BTreeMap::new();
        let mut raw_wits = Vec::new();
        let mut raw_csets = Vec::new();
        let mut raw_isos = Vec::new();
        let mut expectations = Expectations::default();
        for path in &files {
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            let fname = path.display().to_string();
            match ext {
                "alg" => {
                    let e = parse_alg_file(&fname, &read(path)?)?;
                    let name = e.algebra.name.clone();
                    if entries.insert(name.clone(), e).is_some() {
                        return Err(Error::parse(&fname, 1, format!("duplicate algebra `{name}`")));
                    }
                }
                "wit" => raw_wits.push(parse_wit_file(&fname, &read(path)?, &qualified_stem(path))?),
                "cset" => raw_csets.push(parse_cset_file(&fname, &read(path)?)?),
                "iso" => {
                    let mut r = parse_iso_file(&fname, &read(path)?, &stem(path))?;
                    r.id = stem(path);
                    raw_isos.push(r);
                }
                "counts" => parse_counts_file(&fname, &read(path)?, &mut expectations)?,
                _ => {} // golden reports, README files, etc.
            }
        }
        let mut witnesses = Vec::new();
        for rw in raw_wits {
            witnesses.push(resolve_witness(&entries, rw)?);
        }
        let mut closed_sets = Vec::new();
        for rc in raw_csets {
            let csf = build_closed_set(rc)?;
            for spec in csf.sources.iter().chain(csf.targets.iter()) {
                lookup(&entries, &spec.name)?;
            }
            for (spec, _) in &csf.samples {
                lookup(&entries, &spec.name)?;
            }
            closed_sets.push(csf);
        }
        let mut isos = Vec::new();
        for ri in raw_isos {
            isos.push(resolve_iso(&entries, ri)?);
        }
        Ok(Catalog {
            entries,
            witnesses,
            closed_sets,
            isos,
            expectations,
        })
    }

    /// Parse and resolve one witness file against this catalog.
    pub fn parse_witness(&self, file: &str, text: &str) -> Result<DegenWitness> {
        let raw = parse_wit_file(file, text, "witness")?;
        resolve_witness(&self.entries, raw)
    }

    /// Parse and resolve one isomorphism-witness file against this catalog.
    pub fn parse_iso(&self, file: &str, text: &str) -> Result<IsoWitness> {
        let raw = parse_iso_file(file, text, "iso")?;
        resolve_iso(&self.entries, raw)
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        lookup(&self.entries, name)
    }

    /// Materialize a (possibly specialized, possibly re-based) algebra.
    pub fn resolve(&self, spec: &NameSpec) -> Result<AlgebraDef> {
        let entry = self.entry(&spec.name)?;
        for ex in &entry.excludes {
            if !ex.is_empty()
                && ex.iter().all(|(k, v)| {
                    spec.bindings.get(k).map(|w| w.eq_scalar(v)).unwrap_or(false)
                })
            {
                return Err(Error::UnknownAlgebra(format!(
                    "{} is excluded at {}",
                    spec.name,
                    ex.iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
        }
        let mut alg = if spec.bindings.is_empty() {
            entry.algebra.clone()
        } else {
            entry.algebra.substitute(&spec.bindings)?
        };
        if let Some(perm) = &spec.basis {
            let n = alg.dim;
            if perm.len() != n {
                return Err(Error::ShapeError("basis permutation length".into()));
            }
            let mut rows = vec![vec![Scalar::zero(); n]; n];
            for (i, &p) in perm.iter().enumerate() {
                if p < 1 || p > n {
                    return Err(Error::ShapeError("basis permutation index".into()));
                }
                rows[i][p - 1] = Scalar::one();
            }
            alg = alg.change_of_basis(&Matrix::from_rows(rows)?)?;
        }
        alg.name = spec.to_string();
        Ok(alg)
    }
}

fn lookup<'c>(entries: &'c BTreeMap<String, CatalogEntry>, name: &str) -> Result<&'c CatalogEntry> {
    entries
        .get(name)
        .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
}

fn resolve_witness(
    entries: &BTreeMap<String, CatalogEntry>,
    rw: RawWitness,
) -> Result<DegenWitness> {
    let src = lookup(entries, &rw.source)?;
    let tgt = lookup(entries, &rw.target)?;
    // rows and index live in the variable environment {t} + target params
    let mut env: Vec<String> = tgt.algebra.params.clone();
    env.push(degeneration::T.to_string());
    env.sort();
    let mut index = Bindings::new();
    for (ln, p, v) in &rw.index_raw {
        if !src.algebra.params.contains(p) {
            return Err(Error::parse(
                &rw.file,
                *ln,
                format!("`{p}` is not a parameter of {}", rw.source),
            ));
        }
        let s =
            Scalar::parse_with_vars(v, Some(&env)).map_err(|e| Error::parse(&rw.file, *ln, e))?;
        index.insert(p.clone(), s);
    }
    let n = src.algebra.dim;
    if tgt.algebra.dim != n {
        return Err(Error::parse(&rw.file, 1, "source/target dimension mismatch"));
    }
    let mut rows = vec![None; n];
    for (ln, i, rhs) in &rw.rows_raw {
        if *i < 1 || *i > n {
            return Err(Error::parse(&rw.file, *ln, "row index out of range"));
        }
        let combo = parse_linear_combo(rhs, n, &env).map_err(|e| Error::parse(&rw.file, *ln, e))?;
        rows[*i - 1] = Some(combo);
    }
    let rows: Option<Vec<Vec<Scalar>>> = rows.into_iter().collect();
    let rows = rows.ok_or_else(|| Error::parse(&rw.file, 1, "missing a basis row"))?;
    Ok(DegenWitness {
        id: rw.id,
        source: rw.source,
        target: rw.target,
        index,
        basis: Matrix::from_rows(rows)?,
    })
}

fn build_closed_set(rc: RawClosedSet) -> Result<ClosedSetFile> {
    let mut cvars: Vec<String> = Vec::new();
    for i in 1..=rc.dim {
        for j in 1..=rc.dim {
            for k in 1..=rc.dim {
                cvars.push(degeneration::cvar(i, j, k));
            }
        }
    }
    cvars.extend(rc.params.iter().cloned());
    let mut eqs = Vec::new();
    for (ln, raw) in &rc.eqs_raw {
        eqs.push(
            Scalar::parse_with_vars(raw, Some(&cvars))
                .map_err(|e| Error::parse(&rc.file, *ln, e))?,
        );
    }
    let set = ClosedSet::new(&rc.name, rc.dim, rc.params.clone(), eqs, rc.spans.clone())?;
    Ok(ClosedSetFile {
        set,
        sources: rc.sources,
        targets: rc.targets,
        samples: rc.samples,
    })
}

/// Load one standalone `.cset` file (no catalog reference validation).
pub fn load_closed_set_file(path: &Path) -> Result<ClosedSetFile> {
    let text = read(path)?;
    build_closed_set(parse_cset_file(&path.display().to_string(), &text)?)
}

fn resolve_iso(entries: &BTreeMap<String, CatalogEntry>, ri: RawIso) -> Result<IsoWitness> {
    let source = parse_name_spec(&ri.source_raw, Some(&[]), &ri.file, ri.header_line)?;
    let src_entry = lookup(entries, &source.name)?;
    let src_params = src_entry.algebra.params.clone();
    let target = parse_name_spec(&ri.target_raw, Some(&src_params), &ri.file, ri.header_line)?;
    let tgt_entry = lookup(entries, &target.name)?;
    let n = src_entry.algebra.dim;
    if tgt_entry.algebra.dim != n {
        return Err(Error::parse(&ri.file, ri.header_line, "dimension mismatch"));
    }
    let mut cols = vec![None; n];
    for (ln, i, rhs) in &ri.rows {
        if *i < 1 || *i > n {
            return Err(Error::parse(&ri.file, *ln, "index out of range"));
        }
        let combo =
            parse_linear_combo(rhs, n, &src_params).map_err(|e| Error::parse(&ri.file, *ln, e))?;
        cols[*i - 1] = Some(combo);
    }
    let cols: Option<Vec<Vec<Scalar>>> = cols.into_iter().collect();
    let cols = cols.ok_or_else(|| Error::parse(&ri.file, 1, "missing an image g<i>"))?;
    // images are columns
    let mut g = Matrix::zero(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            g.set(i, j, v.clone());
        }
    }
    Ok(IsoWitness {
        id: ri.id,
        source,
        target,
        matrix: g,
    })
}

/// Parse a cocycle file:
/// ```text
/// cocycle
/// dim 3
/// params alpha
/// theta = [0, alpha d1_2, 0]
/// end
/// ```
pub fn parse_cocycle_file(file: &str, text: &str, expect_dim: usize) -> Result<Cocycle> {
    let mut lines = Lines::new(file, text);
    let (l0, first) = lines
        .next()
        .ok_or_else(|| Error::parse(file, 1, "empty file"))?;
    if first != "cocycle" {
        return Err(Error::parse(file, l0, "expected `cocycle`"));
    }
    let mut dim = None;
    let mut params: Vec<String> = Vec::new();
    let mut theta_raw: Option<(usize, String)> = None;
    let mut ended = false;
    while let Some((ln, l)) = lines.next() {
        if l == "end" {
            ended = true;
            break;
        }
        if let Some(rest) = l.strip_prefix("dim ") {
            dim = Some(parse_usize(rest.trim(), file, ln)?);
        } else if let Some(rest) = l.strip_prefix("params") {
            params = rest.split_whitespace().map(|s| s.to_string()).collect();
        } else if let Some(rest) = l.strip_prefix("theta =") {
            theta_raw = Some((ln, rest.trim().to_string()));
        } else {
            return Err(lines.err(ln, format!("unrecognized line `{l}`")));
        }
    }
    if !ended {
        return Err(Error::parse(file, 1, "missing `end`"));
    }
    let dim = dim.ok_or_else(|| Error::parse(file, l0, "missing `dim`"))?;
    if dim != expect_dim {
        return Err(Error::parse(
            file,
            l0,
            format!("cocycle dim {dim} does not match the algebra dim {expect_dim}"),
        ));
    }
    let (ln, body) = theta_raw.ok_or_else(|| Error::parse(file, l0, "missing `theta = [...]`"))?;
    let body = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::parse(file, ln, "theta must be `[c1, ..., cn]`"))?;
    let comps: Vec<&str> = body.split(',').collect();
    if comps.len() != dim {
        return Err(Error::parse(
            file,
            ln,
            format!("theta needs {dim} components, got {}", comps.len()),
        ));
    }
    let dvars: Vec<String> = (1..=dim)
        .flat_map(|p| ((p + 1)..=dim).map(move |q| format!("d{p}_{q}")))
        .collect();
    let pairs: Vec<(usize, usize)> = (1..=dim)
        .flat_map(|p| ((p + 1)..=dim).map(move |q| (p, q)))
        .collect();
    let mut mats = Vec::new();
    for comp in comps {
        let coeffs =
            parse_linear(comp.trim(), &dvars, &params).map_err(|e| Error::parse(file, ln, e))?;
        let mut m = Matrix::zero(dim, dim);
        for (idx, &(p, q)) in pairs.iter().enumerate() {
            m.set(p - 1, q - 1, coeffs[idx].clone());
            m.set(q - 1, p - 1, coeffs[idx].neg());
        }
        mats.push(m);
    }
    Cocycle::new(mats)
}

/// Does g intertwine the products?  g's column j is the image of the source
/// basis vector e_j expressed in the target basis; entries may be symbolic
/// in the family parameters.
pub fn verify_isomorphism(
    source: &AlgebraDef,
    target: &AlgebraDef,
    g: &Matrix,
) -> Result<Verdict> {
    let n = source.dim;
    if target.dim != n || g.nrows() != n || g.ncols() != n {
        return Err(Error::ShapeError("isomorphism dimensions".into()));
    }
    let det = linalg::determinant(g)?;
    if det.is_zero() {
        return Err(Error::SingularMatrix {
            det: det.to_string(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = g.mul_vec(&source.basis_product(i, j))?;
            let ci: Vec<Scalar> = (0..n).map(|r| g.get(r, i).clone()).collect();
            let cj: Vec<Scalar> = (0..n).map(|r| g.get(r, j).clone()).collect();
            let rhs = target.product(&ci, &cj)?;
            for k in 0..n {
                let d = lhs[k].sub(&rhs[k]);
                if !d.is_zero() {
                    return Ok(Verdict::Fails {
                        witness: d.num().clone(),
                    });
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Ordered tuple of basis-invariant data used for non-isomorphism evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub dim: usize,
    pub commutative: bool,
    pub anticommutative: bool,
    pub dim_square: usize,
    pub dim_cube: usize,
    pub dim_left_ann: usize,
    pub dim_right_ann: usize,
    pub dim_der: usize,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(dim={}, comm={}, anticomm={}, dimA2={}, dimA3={}, lann={}, rann={}, der={})",
            self.dim,
            self.commutative,
            self.anticommutative,
            self.dim_square,
            self.dim_cube,
            self.dim_left_ann,
            self.dim_right_ann,
            self.dim_der
        )
    }
}

pub fn invariant_fingerprint(a: &AlgebraDef) -> Fingerprint {
    let info = a.subspace_products();
    Fingerprint {
        dim: a.dim,
        commutative: info.commutative,
        anticommutative: info.anticommutative,
        dim_square: info.dim_square,
        dim_cube: info.dim_cube,
        dim_left_ann: info.dim_left_ann,
        dim_right_ann: info.dim_right_ann,
        dim_der: degeneration::derivation_dimension(a),
    }
}

// ---------------------------------------------------------------------------
// Batch verification driver
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "PASS"),
            Status::Fail => write!(f, "FAIL"),
            Status::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub status: Status,
    pub section: String,
    pub item: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub seed: u64,
    pub trials: u64,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.lines.iter().filter(|l| l.status == Status::Fail).count()
    }

    pub fn undecided(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| l.status == Status::Undecided)
            .count()
    }

    pub fn passed(&self) -> usize {
        self.lines.iter().filter(|l| l.status == Status::Pass).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# catalog verification (seed {}, sampling trials {})\n",
            self.seed, self.trials
        ));
        for l in &self.lines {
            out.push_str(&format!(
                "{} {}/{}: {}\n",
                l.status, l.section, l.item, l.detail
            ));
        }
        out.push_str(&format!(
            "# summary: {} pass, {} fail, {} undecided\n",
            self.passed(),
            self.failed(),
            self.undecided()
        ));
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&format!(
                "status={} check={}/{} detail={:?}\n",
                l.status, l.section, l.item, l.detail
            ));
        }
        out
    }
}

pub struct VerifyOptions {
    pub sections: Vec<String>,
    pub seed: u64,
    pub trials: u64,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sections: Vec::new(),
            seed: 0,
            trials: 500,
            jobs: 0, // rayon default
        }
    }
}

pub const SECTIONS: &[&str] = &[
    "counts",
    "identities",
    "z2",
    "extensions",
    "derivations",
    "degenerations",
    "closedsets",
    "isomorphisms",
    "fingerprints",
];

type Job = (String, String, Box<dyn Fn() -> (Status, String) + Send + Sync>);

fn verdict_check(v: Verdict, expect_holds: bool) -> (Status, String) {
    let ok = v.holds() == expect_holds;
    (
        if ok { Status::Pass } else { Status::Fail },
        format!("{v}"),
    )
}

/// Run every claim in the catalog; deterministic line order, parallel inner
/// execution.
pub fn verify_catalog(cat: &Catalog, opts: &VerifyOptions) -> Report {
    let mut jobs: Vec<Job> = Vec::new();
    let want = |s: &str| opts.sections.is_empty() || opts.sections.iter().any(|x| x == s);

    if want("counts") {
        build_count_jobs(cat, &mut jobs);
    }
    if want("identities") {
        build_identity_jobs(cat, &mut jobs);
    }
    if want("z2") {
        build_z2_jobs(cat, &mut jobs);
    }
    if want("extensions") {
        build_extension_jobs(cat, &mut jobs);
    }
    if want("derivations") {
        build_derivation_jobs(cat, &mut jobs);
    }
    if want("degenerations") {
        build_degeneration_jobs(cat, &mut jobs);
    }
    if want("closedsets") {
        build_closedset_jobs(cat, &mut jobs, opts.trials, opts.seed);
    }
    if want("isomorphisms") {
        build_iso_jobs(cat, &mut jobs);
    }
    if want("fingerprints") {
        build_fingerprint_jobs(cat, &mut jobs);
    }

    let run = |(section, item, f): &Job| -> CheckLine {
        let (status, detail) = f();
        CheckLine {
            status,
            section: section.clone(),
            item: item.clone(),
            detail,
        }
    };
    let lines: Vec<CheckLine> = if opts.jobs == 1 {
        jobs.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| jobs.par_iter().map(run).collect())
    };
    Report {
        seed: opts.seed,
        trials: opts.trials,
        lines,
    }
}

fn is_two_step(a: &AlgebraDef) -> bool {
    a.subspace_products().dim_cube == 0
}

fn build_count_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    let mut stats: BTreeMap<String, usize> = BTreeMap::new();
    let mut bump = |k: &str| *stats.entry(k.to_string()).or_insert(0) += 1;
    for e in cat.entries.values() {
        let dim = e.algebra.dim;
        let nparams = e.algebra.params.len();
        bump(&format!("dim{dim}_entries"));
        if dim == 3 {
            match nparams {
                0 => {
                    if e.base_of.is_some() {
                        bump("dim3_base_points");
                    } else {
                        bump("dim3_singles");
                    }
                }
                1 => bump("dim3_one_param_families"),
                _ => bump("dim3_two_param_families"),
            }
        }
        if dim == 4 && !is_two_step(&e.algebra) {
            for c in &e.claims {
                if let Claim::Identity { id, at } = c {
                    if at.is_empty() {
                        match id {
                            IdentityName::Standard => bump("dim4_standard_non2step"),
                            IdentityName::Kokoris => bump("dim4_kokoris_non2step"),
                            IdentityName::NcJordan => bump("dim4_ncjordan_non2step"),
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    for (key, expected) in cat.expectations.counts.clone() {
        let got = stats.get(&key).copied().unwrap_or(0);
        let key2 = key.clone();
        jobs.push((
            "counts".into(),
            key,
            Box::new(move || {
                if got == expected {
                    (Status::Pass, format!("{key2} = {got}"))
                } else {
                    (Status::Fail, format!("{key2} = {got}, expected {expected}"))
                }
            }),
        ));
    }
    // component lists
    for (label, (members, rigid_expected)) in cat.expectations.components.clone() {
        let mut resolved_ok = true;
        let mut rigid = 0usize;
        let mut detail_err = String::new();
        for m in &members {
            match cat.resolve(m) {
                Ok(a) => {
                    if a.params.is_empty() {
                        rigid += 1;
                    }
                }
                Err(e) => {
                    resolved_ok = false;
                    detail_err = format!("{m}: {e}");
                }
            }
        }
        let total = members.len();
        jobs.push((
            "counts".into(),
            format!("components_{label}"),
            Box::new(move || {
                if !resolved_ok {
                    return (Status::Fail, detail_err.clone());
                }
                if rigid == rigid_expected {
                    (
                        Status::Pass,
                        format!("{total} components, {rigid} rigid"),
                    )
                } else {
                    (
                        Status::Fail,
                        format!("{rigid} rigid, expected {rigid_expected}"),
                    )
                }
            }),
        ));
    }
}

fn build_identity_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    for (name, e) in &cat.entries {
        for c in &e.claims {
            let Claim::Identity { id, at } = c else { continue };
            let id = *id;
            let spec = NameSpec {
                name: name.clone(),
                bindings: at.clone(),
                basis: None,
            };
            let item = if at.is_empty() {
                format!("{name}:{id}")
            } else {
                format!("{spec}:{id}")
            };
            let alg = cat.entry(name).unwrap().algebra.clone();
            let at = at.clone();
            jobs.push((
                "identities".into(),
                item,
                Box::new(move || {
                    let a = if at.is_empty() {
                        alg.clone()
                    } else {
                        match alg.substitute(&at) {
                            Ok(a) => a,
                            Err(e) => return (Status::Fail, e.to_string()),
                        }
                    };
                    verdict_check(check_identity_alg(&a, id), true)
                }),
            ));
        }
    }
}

fn build_z2_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    for (name, e) in &cat.entries {
        for c in &e.claims {
            let Claim::Z2Dim(d) = c else { continue };
            let d = *d;
            let alg = e.algebra.clone();
            jobs.push((
                "z2".into(),
                name.clone(),
                Box::new(move || match cohomology::z2_basis(&alg) {
                    Ok(space) => {
                        if space.generic_dimension == d {
                            (Status::Pass, format!("dim Z2 = {d}"))
                        } else {
                            (
                                Status::Fail,
                                format!("dim Z2 = {}, expected {d}", space.generic_dimension),
                            )
                        }
                    }
                    Err(err) => (Status::Fail, err.to_string()),
                }),
            ));
        }
    }
}

fn build_extension_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    for (name, e) in &cat.entries {
        let plus = e.claims.iter().find_map(|c| match c {
            Claim::PlusPart(p) => Some(p.clone()),
            _ => None,
        });
        let theta = e.claims.iter().find_map(|c| match c {
            Claim::CocycleCoords(t) => Some(t.clone()),
            _ => None,
        });
        let (Some(plus), Some(theta)) = (plus, theta) else { continue };
        let Ok(plus_entry) = cat.entry(&plus) else {
            let plus2 = plus.clone();
            jobs.push((
                "extensions".into(),
                name.clone(),
                Box::new(move || (Status::Fail, format!("unknown plus part {plus2}"))),
            ));
            continue;
        };
        let j = plus_entry.algebra.clone();
        let target = e.algebra.clone();
        jobs.push((
            "extensions".into(),
            name.clone(),
            Box::new(move || {
                // split must recover (J, theta)
                let split = target.split();
                if !split.circ.same_table(&j) {
                    return (Status::Fail, "plus part of table differs".into());
                }
                for l in 0..target.dim {
                    for m in 0..target.dim {
                        let got = split.bracket.basis_product(l, m);
                        let want = theta.on_basis(l, m);
                        if !got.iter().zip(&want).all(|(a, b)| a.eq_scalar(b)) {
                            return (
                                Status::Fail,
                                format!("bracket differs from stored cocycle at ({l}, {m})"),
                            );
                        }
                    }
                }
                match cohomology::extend(&j, &theta) {
                    Ok(ext) => {
                        if ext.same_table(&target) {
                            (Status::Pass, format!("extend({}) reproduces the table", j.name))
                        } else {
                            (Status::Fail, "extension does not match the table".into())
                        }
                    }
                    Err(e) => (Status::Fail, e.to_string()),
                }
            }),
        ));
    }
}

fn build_derivation_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    for (name, e) in &cat.entries {
        for c in &e.claims {
            match c {
                Claim::DerDim { dim, at } => {
                    let d = *dim;
                    let alg = e.algebra.clone();
                    let at = at.clone();
                    let item = if at.is_empty() {
                        format!("{name}:der")
                    } else {
                        let spec = NameSpec {
                            name: name.clone(),
                            bindings: at.clone(),
                            basis: None,
                        };
                        format!("{spec}:der")
                    };
                    jobs.push((
                        "derivations".into(),
                        item,
                        Box::new(move || {
                            let a = if at.is_empty() {
                                alg.clone()
                            } else {
                                match alg.substitute(&at) {
                                    Ok(a) => a,
                                    Err(e) => return (Status::Fail, e.to_string()),
                                }
                            };
                            let got = degeneration::derivation_dimension(&a);
                            if got == d {
                                (Status::Pass, format!("dim Der = {d}"))
                            } else {
                                (Status::Fail, format!("dim Der = {got}, expected {d}"))
                            }
                        }),
                    ));
                }
                Claim::OrbitDim { value, family, at } => {
                    let v = *value;
                    let fam = *family;
                    let alg = e.algebra.clone();
                    let at = at.clone();
                    let item = if at.is_empty() {
                        format!("{name}:orbit")
                    } else {
                        let spec = NameSpec {
                            name: name.clone(),
                            bindings: at.clone(),
                            basis: None,
                        };
                        format!("{spec}:orbit")
                    };
                    jobs.push((
                        "derivations".into(),
                        item,
                        Box::new(move || {
                            let a = if at.is_empty() {
                                alg.clone()
                            } else {
                                match alg.substitute(&at) {
                                    Ok(a) => a,
                                    Err(e) => return (Status::Fail, e.to_string()),
                                }
                            };
                            let essential = if fam { a.params.len() } else { 0 };
                            let (orbit, fam_dim) = degeneration::orbit_dimension(&a, essential);
                            let got = if fam { fam_dim } else { orbit };
                            if got == v {
                                let kind = if fam { "orbit+params" } else { "orbit" };
                                (Status::Pass, format!("{kind} = {v} (n^2 - der = {orbit})"))
                            } else {
                                (Status::Fail, format!("got {got}, expected {v}"))
                            }
                        }),
                    ));
                }
                _ => {}
            }
        }
    }
}

fn build_degeneration_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    let mut wits: Vec<&DegenWitness> = cat.witnesses.iter().collect();
    wits.sort_by(|a, b| a.id.cmp(&b.id));
    for w in wits {
        let Ok(src) = cat.entry(&w.source) else { continue };
        let Ok(tgt) = cat.entry(&w.target) else { continue };
        let source = src.algebra.clone();
        let target = tgt.algebra.clone();
        let index = w.index.clone();
        let basis = w.basis.clone();
        let id = w.id.clone();
        let label = format!("{} -> {}", w.source, w.target);
        jobs.push((
            "degenerations".into(),
            id,
            Box::new(move || {
                match degeneration::verify_degeneration(&source, &index, &basis, &target) {
                    Ok(rep) if rep.pass => (Status::Pass, format!("{label} verified")),
                    Ok(rep) => (
                        Status::Fail,
                        format!("{label}: {}", rep.failures.join("; ")),
                    ),
                    Err(e) => (Status::Fail, format!("{label}: {e}")),
                }
            }),
        ));
        // proper degenerations must not decrease dim Der; the increase is
        // strict for a fixed source; for a t-dependent index the source is a
        // family and semicontinuity only forces non-strict growth
        let source2 = cat.entry(&w.source).unwrap().algebra.clone();
        let target2 = cat.entry(&w.target).unwrap().algebra.clone();
        let indexed = w
            .index
            .values()
            .any(|s| s.num().contains_var(degeneration::T) || s.den().contains_var(degeneration::T));
        let id2 = format!("{}:der_monotone", w.id);
        jobs.push((
            "degenerations".into(),
            id2,
            Box::new(move || {
                let ds = degeneration::derivation_dimension(&source2);
                let dt = degeneration::derivation_dimension(&target2);
                let ok = if indexed { ds <= dt } else { ds < dt };
                let rel = if indexed { "<=" } else { "<" };
                if ok {
                    (Status::Pass, format!("dim Der {ds} {rel} {dt}"))
                } else {
                    (Status::Fail, format!("dim Der {ds} !{rel} {dt}"))
                }
            }),
        ));
    }
}

fn build_closedset_jobs(cat: &Catalog, jobs: &mut Vec<Job>, trials: u64, seed: u64) {
    let mut sets: Vec<&ClosedSetFile> = cat.closed_sets.iter().collect();
    sets.sort_by(|a, b| a.set.name.cmp(&b.set.name));
    for csf in sets {
        let sname = csf.set.name.clone();
        for spec in &csf.sources {
            let set = csf.set.clone();
            let alg = cat.resolve(spec);
            let item = format!("{sname}/source/{spec}");
            jobs.push((
                "closedsets".into(),
                item,
                Box::new(move || match &alg {
                    Ok(a) => match degeneration::in_closed_set(a, &set) {
                        Ok(v) => verdict_check(v, true),
                        Err(e) => (Status::Fail, e.to_string()),
                    },
                    Err(e) => (Status::Fail, e.to_string()),
                }),
            ));
            // Borel-stability spot check: does a flag-triangular change keep
            // the source inside the set?  Leaving the set is reported as
            // UNDECIDED: it means the printed conditions are not literally
            // stable under the full flag Borel, a caveat about the set
            // itself, while the membership and sampling evidence stand.
            let set2 = csf.set.clone();
            let alg2 = cat.resolve(spec);
            let item2 = format!("{sname}/stability/{spec}");
            jobs.push((
                "closedsets".into(),
                item2,
                Box::new(move || match &alg2 {
                    Ok(a) => {
                        let n = a.dim;
                        // fixed small flag-triangular change with rational entries
                        let mut rows = vec![vec![Scalar::zero(); n]; n];
                        for i in 0..n {
                            for j in i..n {
                                let v = if i == j {
                                    Scalar::from_int(i as i64 + 2)
                                } else {
                                    Scalar::from_rat(crate::scalar::rat(
                                        (i + 2 * j + 1) as i64,
                                        3,
                                    ))
                                };
                                rows[i][j] = v;
                            }
                        }
                        let e = Matrix::from_rows(rows).unwrap();
                        match a.change_of_basis(&e) {
                            Ok(moved) => match degeneration::in_closed_set(&moved, &set2) {
                                Ok(v) if v.holds() => {
                                    (Status::Pass, "stable under a triangular change".into())
                                }
                                Ok(_) => (
                                    Status::Undecided,
                                    "left the set under a triangular change; the printed \
                                     conditions are not flag-Borel stable"
                                        .into(),
                                ),
                                Err(e) => (Status::Fail, e.to_string()),
                            },
                            Err(e) => (Status::Fail, e.to_string()),
                        }
                    }
                    Err(e) => (Status::Fail, e.to_string()),
                }),
            ));
        }
        for spec in &csf.targets {
            let set = csf.set.clone();
            let alg = cat.resolve(spec);
            let item = format!("{sname}/target/{spec}");
            jobs.push((
                "closedsets".into(),
                item,
                Box::new(move || match &alg {
                    Ok(a) => match degeneration::in_closed_set(a, &set) {
                        Ok(v) => verdict_check(v, false),
                        Err(e) => (Status::Fail, e.to_string()),
                    },
                    Err(e) => (Status::Fail, e.to_string()),
                }),
            ));
        }
        for (spec, set_binds) in &csf.samples {
            let alg = cat.resolve(spec);
            let set_binds = set_binds.clone();
            let base_set = csf.set.clone();
            let item = format!("{sname}/sample/{spec}");
            jobs.push((
                "closedsets".into(),
                item,
                Box::new(move || {
                    let a = match &alg {
                        Ok(a) => a,
                        Err(e) => return (Status::Fail, e.to_string()),
                    };
                    // pin the set parameters
                    let eqs: Result<Vec<Scalar>> = base_set
                        .equations
                        .iter()
                        .map(|e| e.substitute(&set_binds))
                        .collect();
                    let eqs = match eqs {
                        Ok(e) => e,
                        Err(e) => return (Status::Fail, e.to_string()),
                    };
                    let pinned = match ClosedSet::new(
                        &base_set.name,
                        base_set.dim,
                        Vec::new(),
                        eqs,
                        base_set.spans.clone(),
                    ) {
                        Ok(s) => s,
                        Err(e) => return (Status::Fail, e.to_string()),
                    };
                    match degeneration::borel_sample_against_set(a, &pinned, trials, seed) {
                        Ok(rep) => match rep.found_at {
                            None => (
                                Status::Pass,
                                format!(
                                    "no representative found in {} trials (seed {})",
                                    rep.trials, rep.seed
                                ),
                            ),
                            Some(t) => (
                                Status::Fail,
                                format!("representative found at trial {t} (seed {})", rep.seed),
                            ),
                        },
                        Err(e) => (Status::Fail, e.to_string()),
                    }
                }),
            ));
        }
    }
}

fn build_iso_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    let mut isos: Vec<&IsoWitness> = cat.isos.iter().collect();
    isos.sort_by(|a, b| a.id.cmp(&b.id));
    for w in isos {
        let src = cat.entry(&w.source.name).map(|e| e.algebra.clone());
        // target resolved without exclusion checks: symbolic bindings such as
        // alpha -> -alpha stay in the family
        let tgt = cat
            .entry(&w.target.name)
            .and_then(|e| e.algebra.substitute(&w.target.bindings));
        let g = w.matrix.clone();
        let label = format!("{} ~ {}", w.source, w.target);
        jobs.push((
            "isomorphisms".into(),
            w.id.clone(),
            Box::new(move || match (&src, &tgt) {
                (Ok(s), Ok(t)) => match verify_isomorphism(s, t, &g) {
                    Ok(v) => {
                        let (st, d) = verdict_check(v, true);
                        (st, format!("{label}: {d}"))
                    }
                    Err(e) => (Status::Fail, format!("{label}: {e}")),
                },
                (Err(e), _) | (_, Err(e)) => (Status::Fail, e.to_string()),
            }),
        ));
    }
}

fn build_fingerprint_jobs(cat: &Catalog, jobs: &mut Vec<Job>) {
    // fingerprints are computed once per entry, in parallel inside the job
    let names: Vec<String> = cat.entries.keys().cloned().collect();
    let algs: Vec<AlgebraDef> = names
        .iter()
        .map(|n| cat.entries[n].algebra.clone())
        .collect();
    let prints: std::sync::Arc<Vec<Fingerprint>> = std::sync::Arc::new(
        algs.par_iter().map(invariant_fingerprint).collect(),
    );
    for (i, n) in names.iter().enumerate() {
        let fp = prints[i].clone();
        let n2 = n.clone();
        jobs.push((
            "fingerprints".into(),
            n.clone(),
            Box::new(move || (Status::Pass, format!("{n2}: {fp}"))),
        ));
    }
    // pairwise separation within equal dimension
    for i in 0..names.len() {
        for j in (i + 1)..names.len() {
            if prints[i].dim != prints[j].dim {
                continue;
            }
            let item = format!("{} vs {}", names[i], names[j]);
            let equal = prints[i] == prints[j];
            jobs.push((
                "fingerprints".into(),
                item,
                Box::new(move || {
                    if equal {
                        (Status::Undecided, "equal invariants".into())
                    } else {
                        (Status::Pass, "separated".into())
                    }
                }),
            ));
        }
    }
}
