//! Reference tables shipped with the crate, loadable from an override directory.

use std::path::Path;

use crate::error::{Error, Result};
use crate::lattices::{parse_marked, MarkedSet, RootType, SingularitySet};

pub const FILES: [&str; 8] = [
    "maximizing_ns.tsv",
    "maximizing_torus.tsv",
    "disconnected.tsv",
    "nonreal.tsv",
    "permutation_groups.tsv",
    "exceptional_e.tsv",
    "special.tsv",
    "manual_overrides.tsv",
];

const BUILTIN: [&str; 8] = [
    include_str!("../data/maximizing_ns.tsv"),
    include_str!("../data/maximizing_torus.tsv"),
    include_str!("../data/disconnected.tsv"),
    include_str!("../data/nonreal.tsv"),
    include_str!("../data/permutation_groups.tsv"),
    include_str!("../data/exceptional_e.tsv"),
    include_str!("../data/special.tsv"),
    include_str!("../data/manual_overrides.tsv"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximizingRow {
    pub spec: String,
    pub marked: MarkedSet,
    pub r: u32,
    pub c: u32,
    /// Isomorphic points exchanged by the real structure, e.g. `2A2`.
    pub conj_pairs: Option<SingularitySet>,
    /// `triple` or `double` for the non-special tables.
    pub group: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRow {
    pub set: SingularitySet,
    pub r: u32,
    pub c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonrealRow {
    pub entry: String,
    pub set: SingularitySet,
    /// Prime of a `[..]_p` pattern.
    pub test_prime: Option<u64>,
    /// The transcendental lattice has a vector of square 2.
    pub square2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRow {
    pub entry: String,
    pub set: SingularitySet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Nontrivial symmetry of a single point.
    Sym,
    /// Exchange of two isomorphic points.
    Swap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalRow {
    pub set: SingularitySet,
    pub irregular: Vec<u64>,
    pub order: u64,
    /// Generators of the listed kinds present in the set map to nonzero elements and span `E`.
    pub generators: Vec<(GenKind, RootType)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialRow {
    pub set: SingularitySet,
    /// Invariant factors of the kernel.
    pub kernel: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverrideRow {
    pub set: SingularitySet,
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceData {
    pub maximizing_ns: Vec<MaximizingRow>,
    pub maximizing_torus: Vec<MaximizingRow>,
    pub disconnected: Vec<ComponentRow>,
    pub nonreal: Vec<NonrealRow>,
    pub groups: Vec<GroupRow>,
    pub exceptional: Vec<ExceptionalRow>,
    pub special: Vec<SpecialRow>,
    pub overrides: Vec<OverrideRow>,
}

/// Removes `[`, `]` and `_p` decorations, returning the plain spec and the prime.
pub fn strip_brackets(entry: &str) -> (String, Option<u64>) {
    let mut out = String::new();
    let mut prime = None;
    let mut chars = entry.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '[' => {}
            ']' => {
                if chars.peek() == Some(&'_') {
                    chars.next();
                    let mut digits = String::new();
                    while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                        digits.push(d);
                        chars.next();
                    }
                    prime = digits.parse().ok();
                }
            }
            c => out.push(c),
        }
    }
    (out, prime)
}

struct Rows<'a> {
    file: &'a str,
    rows: Vec<(usize, Vec<&'a str>)>,
}

impl<'a> Rows<'a> {
    fn new(file: &'a str, text: &'a str, cols: usize) -> Result<Rows<'a>> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != cols {
                return Err(Error::Data(format!("{file}:{}: expected {cols} columns, found {}", i + 1, f.len())));
            }
            rows.push((i + 1, f));
        }
        Ok(Rows { file, rows })
    }

    fn err(&self, line: usize, msg: impl std::fmt::Display) -> Error {
        Error::Data(format!("{}:{line}: {msg}", self.file))
    }

    fn set(&self, line: usize, s: &str) -> Result<SingularitySet> {
        SingularitySet::parse(s).map_err(|e| self.err(line, e))
    }

    fn num<T: std::str::FromStr>(&self, line: usize, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(line, format!("bad number '{s}'")))
    }
}

fn maximizing(file: &str, text: &str, with_group: bool) -> Result<Vec<MaximizingRow>> {
    let rows = Rows::new(file, text, if with_group { 5 } else { 4 })?;
    let mut out = Vec::new();
    for (line, f) in &rows.rows {
        let marked = parse_marked(f[0]).map_err(|e| rows.err(*line, e))?;
        let conj_pairs = if f[3] == "-" { None } else { Some(rows.set(*line, f[3])?) };
        out.push(MaximizingRow {
            spec: f[0].to_string(),
            marked,
            r: rows.num(*line, f[1])?,
            c: rows.num(*line, f[2])?,
            conj_pairs,
            group: with_group.then(|| f[4].to_string()),
        });
    }
    Ok(out)
}

impl ReferenceData {
    /// Tables compiled into the library.
    pub fn builtin() -> ReferenceData {
        Self::parse(&BUILTIN).expect("builtin reference data parses")
    }

    /// Tables read from `dir`; files missing there fall back to the builtin copies.
    pub fn from_dir(dir: &Path) -> Result<ReferenceData> {
        let mut texts = Vec::new();
        for (name, builtin) in FILES.iter().zip(BUILTIN) {
            let path = dir.join(name);
            if path.exists() {
                texts.push(std::fs::read_to_string(&path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?);
            } else {
                texts.push(builtin.to_string());
            }
        }
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        Self::parse(&refs.try_into().unwrap())
    }

    fn parse(t: &[&str; 8]) -> Result<ReferenceData> {
        let maximizing_ns = maximizing(FILES[0], t[0], true)?;
        let maximizing_torus = maximizing(FILES[1], t[1], false)?;

        let rows = Rows::new(FILES[2], t[2], 3)?;
        let mut disconnected = Vec::new();
        for (line, f) in &rows.rows {
            disconnected.push(ComponentRow { set: rows.set(*line, f[0])?, r: rows.num(*line, f[1])?, c: rows.num(*line, f[2])? });
        }

        let rows = Rows::new(FILES[3], t[3], 2)?;
        let mut nonreal = Vec::new();
        for (line, f) in &rows.rows {
            let (spec, test_prime) = strip_brackets(f[0]);
            let square2 = match f[1] {
                "yes" => true,
                "-" => false,
                other => return Err(rows.err(*line, format!("bad square2 flag '{other}'"))),
            };
            nonreal.push(NonrealRow { entry: f[0].to_string(), set: rows.set(*line, &spec)?, test_prime, square2 });
        }

        let rows = Rows::new(FILES[4], t[4], 1)?;
        let mut groups = Vec::new();
        for (line, f) in &rows.rows {
            let (spec, _) = strip_brackets(f[0]);
            groups.push(GroupRow { entry: f[0].to_string(), set: rows.set(*line, &spec)? });
        }

        let rows = Rows::new(FILES[5], t[5], 4)?;
        let mut exceptional = Vec::new();
        for (line, f) in &rows.rows {
            let irregular = f[1].split(',').map(|p| rows.num(*line, p)).collect::<Result<Vec<u64>>>()?;
            let mut generators = Vec::new();
            if f[3] != "-" {
                for g in f[3].split(',') {
                    let (kind, ty) = g.split_once(':').ok_or_else(|| rows.err(*line, format!("bad generator '{g}'")))?;
                    let kind = match kind {
                        "sym" => GenKind::Sym,
                        "swap" => GenKind::Swap,
                        _ => return Err(rows.err(*line, format!("bad generator kind '{kind}'"))),
                    };
                    let s = rows.set(*line, ty)?;
                    let [r] = s.points() else { return Err(rows.err(*line, format!("bad generator type '{ty}'"))) };
                    generators.push((kind, *r));
                }
            }
            exceptional.push(ExceptionalRow { set: rows.set(*line, f[0])?, irregular, order: rows.num(*line, f[2])?, generators });
        }

        let rows = Rows::new(FILES[6], t[6], 2)?;
        let mut special = Vec::new();
        for (line, f) in &rows.rows {
            let kernel = f[1].split('-').map(|p| rows.num(*line, p)).collect::<Result<Vec<i64>>>()?;
            special.push(SpecialRow { set: rows.set(*line, f[0])?, kernel });
        }

        let rows = Rows::new(FILES[7], t[7], 2)?;
        let mut overrides = Vec::new();
        for (line, f) in &rows.rows {
            let (key, value) = f[1].split_once('=').ok_or_else(|| rows.err(*line, "expected key=value"))?;
            overrides.push(OverrideRow { set: rows.set(*line, f[0])?, key: key.to_string(), value: value.to_string() });
        }

        Ok(ReferenceData { maximizing_ns, maximizing_torus, disconnected, nonreal, groups, exceptional, special, overrides })
    }

    pub fn override_for(&self, set: &SingularitySet, key: &str) -> Option<&str> {
        self.overrides.iter().find(|o| &o.set == set && o.key == key).map(|o| o.value.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes() {
        let d = ReferenceData::builtin();
        assert_eq!(d.maximizing_ns.len(), 110);
        assert_eq!(d.maximizing_ns.iter().filter(|r| r.group.as_deref() == Some("triple")).count(), 80);
        assert_eq!(d.maximizing_torus.len(), 15);
        assert_eq!(d.disconnected.len(), 14);
        assert_eq!(d.nonreal.len(), 25);
        assert_eq!(d.groups.len(), 13);
        assert_eq!(d.exceptional.len(), 9);
        assert_eq!(d.special.len(), 18);
        assert!(d.maximizing_ns.iter().all(|r| r.marked.set.mu() == 19));
    }

    #[test]
    fn bracket_stripping() {
        assert_eq!(strip_brackets("[2A6]_7+D5+A1"), ("2A6+D5+A1".to_string(), Some(7)));
        assert_eq!(strip_brackets("[3A4]+[3A2]"), ("3A4+3A2".to_string(), None));
        assert_eq!(strip_brackets("E7+A11"), ("E7+A11".to_string(), None));
    }

    #[test]
    fn corrupt_file_names_the_line() {
        let bad = "# set\tr\tc\nE8+2A5\t0\n";
        let e = Rows::new("disconnected.tsv", bad, 3).err().unwrap();
        assert!(e.to_string().contains("disconnected.tsv:2"));
    }
}
