//! Line-oriented text formats.
//!
//! `#` starts a comment; blank lines are ignored. File references inside a
//! file are resolved relative to that file's directory.
//!
//! ```text
//! rsemigroup 2        semilattice 2       premorph sa.rsg 2     morphism t.rsg s.rsg
//! 0 0                 0 0                 [0>0,1>1]             map: 0 0 1
//! 0 1                 0 1                 [0>0]
//! star: 0 1                               q: 0 0                category s.rsg
//! plus: 0 1                               lattice: y2.slat      object a a.act
//! labels: x y                                                   morphism a b 0 1
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::algebra::{RSMorphism, RSemigroup};
use crate::error::{Error, Result};
use crate::pbij::PBij;
use crate::premorphism::{check_premorphism, ActionTriple, Premorph};
use crate::semilattice::Semilattice;

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.items.last().map_or(1, |l| l.0);
        let item = self.items.get(self.pos).copied().ok_or(Error::Parse { line: last, message: format!("expected {what}") })?;
        self.pos += 1;
        Ok(item)
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some((line, text)) => Err(Error::Parse { line, message: format!("unexpected trailing content `{text}`") }),
            None => Ok(()),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn indices(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("`{t}` is not an index")))).collect()
}

/// `keyword rest…` with the keyword required.
fn keyword<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str> {
    let mut parts = text.splitn(2, char::is_whitespace);
    if parts.next() != Some(key) {
        return Err(parse_err(line, format!("expected `{key}`")));
    }
    Ok(parts.next().unwrap_or("").trim())
}

/// `key: values` with the key required.
fn field<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str> {
    text.strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .map(str::trim)
        .ok_or_else(|| parse_err(line, format!("expected `{key}:`")))
}

fn header_count(line: usize, text: &str, key: &str) -> Result<usize> {
    let rest = keyword(line, text, key)?;
    rest.parse().map_err(|_| parse_err(line, format!("`{rest}` is not a count")))
}

fn table(lines: &mut Lines, n: usize, what: &str) -> Result<Vec<usize>> {
    let mut flat = Vec::with_capacity(n * n);
    for _ in 0..n {
        let (line, text) = lines.next(&format!("{what} row"))?;
        let row = indices(line, text)?;
        if row.len() != n {
            return Err(parse_err(line, format!("row has {} entries, expected {n}", row.len())));
        }
        flat.extend(row);
    }
    Ok(flat)
}

fn unary(lines: &mut Lines, n: usize, key: &str) -> Result<Vec<usize>> {
    let (line, text) = lines.next(key)?;
    let values = indices(line, field(line, text, key)?)?;
    if values.len() != n {
        return Err(parse_err(line, format!("`{key}` has {} entries, expected {n}", values.len())));
    }
    Ok(values)
}

/// Parses and validates an algebra.
pub fn parse_rsemigroup(text: &str) -> Result<RSemigroup> {
    let mut lines = Lines::new(text);
    let s = rsemigroup_body(&mut lines)?;
    lines.finish()?;
    Ok(s)
}

fn rsemigroup_body(lines: &mut Lines) -> Result<RSemigroup> {
    let (line, text) = lines.next("header")?;
    let n = header_count(line, text, "rsemigroup")?;
    let mul = table(lines, n, "product")?;
    let star = unary(lines, n, "star")?;
    let plus = unary(lines, n, "plus")?;
    let s = RSemigroup::new(n, mul, star, plus)?;
    match lines.peek() {
        Some((line, text)) if text.starts_with("labels:") => {
            lines.pos += 1;
            let labels: Vec<String> = field(line, text, "labels")?.split_whitespace().map(String::from).collect();
            s.with_labels(labels).map_err(|e| parse_err(line, e.to_string()))
        }
        _ => Ok(s),
    }
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_rsemigroup(s: &RSemigroup) -> String {
    let n = s.order();
    let mut out = format!("rsemigroup {n}\n");
    for row in s.mul_table().chunks(n.max(1)).take(n) {
        out.push_str(&join(row));
        out.push('\n');
    }
    out.push_str(&format!("star: {}\nplus: {}\n", join(s.star_table()), join(s.plus_table())));
    if let Some(labels) = s.labels() {
        out.push_str(&format!("labels: {}\n", labels.join(" ")));
    }
    out
}

pub fn parse_semilattice(text: &str) -> Result<Semilattice> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header")?;
    let n = header_count(line, header, "semilattice")?;
    let meet = table(&mut lines, n, "meet")?;
    lines.finish()?;
    Semilattice::new(n, meet)
}

pub fn write_semilattice(y: &Semilattice) -> String {
    let n = y.size();
    let mut out = format!("semilattice {n}\n");
    for row in y.meet_table().chunks(n.max(1)).take(n) {
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn resolve(base: &Path, name: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(name)
}

/// Attaches the file name to parse errors.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, message } => Error::Io { path: path.display().to_string(), message: format!("line {line}: {message}") },
        other => other,
    })
}

pub fn load_rsemigroup(path: &Path) -> Result<RSemigroup> {
    in_file(path, parse_rsemigroup(&read(path)?))
}

pub fn load_semilattice(path: &Path) -> Result<Semilattice> {
    in_file(path, parse_semilattice(&read(path)?))
}

/// A premorphism file, promoted to an action triple when it has `q:` and `lattice:` lines.
#[derive(Clone, Debug)]
pub enum PremorphFile {
    Premorph(Premorph),
    Triple(ActionTriple),
}

impl PremorphFile {
    pub fn premorph(&self) -> &Premorph {
        match self {
            PremorphFile::Premorph(p) => p,
            PremorphFile::Triple(t) => &t.phi,
        }
    }
}

pub fn load_premorph(path: &Path) -> Result<PremorphFile> {
    let text = read(path)?;
    in_file(path, parse_premorph(&text, path))
}

fn parse_premorph(text: &str, path: &Path) -> Result<PremorphFile> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header")?;
    let rest = keyword(line, header, "premorph")?;
    let parts: Vec<&str> = rest.split_whitespace().collect();
    let [file, carrier] = parts[..] else {
        return Err(parse_err(line, "expected `premorph <semigroup-file> <carrier>`"));
    };
    let carrier: usize = carrier.parse().map_err(|_| parse_err(line, format!("`{carrier}` is not a count")))?;
    let source = load_rsemigroup(&resolve(path, file))?;
    let mut maps = Vec::with_capacity(source.order());
    for _ in 0..source.order() {
        let (line, text) = lines.next("partial bijection")?;
        maps.push(PBij::parse(text, carrier).map_err(|e| parse_err(line, e.to_string()))?);
    }
    let phi = check_premorphism(&source, carrier, maps)?;
    let Some((line, text)) = lines.peek() else {
        return Ok(PremorphFile::Premorph(phi));
    };
    lines.pos += 1;
    let q = indices(line, field(line, text, "q")?)?;
    let (line, text) = lines.next("lattice")?;
    let lattice = load_semilattice(&resolve(path, field(line, text, "lattice")?))?;
    lines.finish()?;
    Ok(PremorphFile::Triple(ActionTriple::new(phi, q, lattice)?))
}

pub fn load_morphism(path: &Path) -> Result<RSMorphism> {
    let text = read(path)?;
    in_file(path, parse_morphism(&text, path))
}

fn parse_morphism(text: &str, path: &Path) -> Result<RSMorphism> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header")?;
    let parts: Vec<&str> = keyword(line, header, "morphism")?.split_whitespace().collect();
    let [src, tgt] = parts[..] else {
        return Err(parse_err(line, "expected `morphism <source-file> <target-file>`"));
    };
    let source = load_rsemigroup(&resolve(path, src))?;
    let target = load_rsemigroup(&resolve(path, tgt))?;
    let (line, text) = lines.next("map")?;
    let map = indices(line, field(line, text, "map")?)?;
    lines.finish()?;
    RSMorphism::new(&source, &target, map)
}

/// A finite diagram in the category of action triples over one source.
#[derive(Clone, Debug)]
pub struct CategorySpec {
    pub source: RSemigroup,
    pub objects: Vec<(String, ActionTriple)>,
    /// `(from, to, map on carriers)` with object positions.
    pub morphisms: Vec<(usize, usize, Vec<usize>)>,
}

pub fn load_category(path: &Path) -> Result<CategorySpec> {
    let text = read(path)?;
    in_file(path, parse_category(&text, path))
}

fn parse_category(text: &str, path: &Path) -> Result<CategorySpec> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header")?;
    let source = load_rsemigroup(&resolve(path, keyword(line, header, "category")?))?;
    let mut objects: Vec<(String, ActionTriple)> = Vec::new();
    let mut morphisms = Vec::new();
    while let Some((line, text)) = lines.peek() {
        lines.pos += 1;
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts.first().copied() {
            Some("object") if parts.len() == 3 => {
                let triple = match load_premorph(&resolve(path, parts[2]))? {
                    PremorphFile::Triple(t) => t,
                    PremorphFile::Premorph(_) => return Err(parse_err(line, format!("object `{}` has no q: line", parts[1]))),
                };
                if triple.source() != &source {
                    return Err(parse_err(line, format!("object `{}` acts by a different semigroup", parts[1])));
                }
                objects.push((parts[1].to_string(), triple));
            }
            Some("morphism") if parts.len() >= 3 => {
                let find = |name: &str| {
                    objects.iter().position(|(n, _)| n == name).ok_or_else(|| parse_err(line, format!("unknown object `{name}`")))
                };
                let (from, to) = (find(parts[1])?, find(parts[2])?);
                morphisms.push((from, to, indices(line, &parts[3..].join(" "))?));
            }
            _ => return Err(parse_err(line, format!("unrecognised line `{text}`"))),
        }
    }
    Ok(CategorySpec { source, objects, morphisms })
}
