use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A(u32),
    D(u32),
    E(u32),
}

impl RootType {
    pub fn new(kind: char, n: u32) -> Option<RootType> {
        match kind {
            'A' if n >= 1 => Some(RootType::A(n)),
            'D' if n >= 4 => Some(RootType::D(n)),
            'E' if (6..=8).contains(&n) => Some(RootType::E(n)),
            _ => None,
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            RootType::A(n) | RootType::D(n) | RootType::E(n) => n,
        }
    }

    pub fn kind(self) -> char {
        match self {
            RootType::A(_) => 'A',
            RootType::D(_) => 'D',
            RootType::E(_) => 'E',
        }
    }

    /// Contribution to the weight of a set: `A_{3p-1}` weighs `p`, `E6` weighs 2.
    pub fn weight(self) -> u32 {
        match self {
            RootType::A(n) if (n + 1) % 3 == 0 => (n + 1) / 3,
            RootType::E(6) => 2,
            _ => 0,
        }
    }

    fn class(self) -> u8 {
        match self {
            RootType::E(_) => 0,
            RootType::D(_) => 1,
            RootType::A(_) => 2,
        }
    }
}

/// Display order: E before D before A, larger index first.
impl Ord for RootType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.class().cmp(&other.class()).then(other.rank().cmp(&self.rank()))
    }
}

impl PartialOrd for RootType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind(), self.rank())
    }
}

/// Multiset of simple singularities, kept sorted in display order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SingularitySet {
    points: Vec<RootType>,
}

impl SingularitySet {
    pub fn new(mut points: Vec<RootType>) -> Self {
        points.sort();
        SingularitySet { points }
    }

    pub fn empty() -> Self {
        SingularitySet::default()
    }

    pub fn points(&self) -> &[RootType] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mu(&self) -> u32 {
        self.points.iter().map(|r| r.rank()).sum()
    }

    pub fn weight(&self) -> u32 {
        self.points.iter().map(|r| r.weight()).sum()
    }

    pub fn count(&self, r: RootType) -> usize {
        self.points.iter().filter(|&&x| x == r).count()
    }

    /// Distinct types with multiplicities, in display order.
    pub fn grouped(&self) -> Vec<(RootType, usize)> {
        let mut out: Vec<(RootType, usize)> = Vec::new();
        for &r in &self.points {
            match out.last_mut() {
                Some((t, c)) if *t == r => *c += 1,
                _ => out.push((r, 1)),
            }
        }
        out
    }

    pub fn union(&self, other: &SingularitySet) -> SingularitySet {
        let mut p = self.points.clone();
        p.extend_from_slice(&other.points);
        SingularitySet::new(p)
    }

    /// Removes one copy of each point of `other`; `None` if `other` is not a sub-multiset.
    pub fn difference(&self, other: &SingularitySet) -> Option<SingularitySet> {
        let mut p = self.points.clone();
        for r in &other.points {
            let i = p.iter().position(|x| x == r)?;
            p.remove(i);
        }
        Some(SingularitySet { points: p })
    }

    pub fn parse(s: &str) -> Result<SingularitySet> {
        parse_marked(s).map(|m| m.set)
    }
}

impl fmt::Display for SingularitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .grouped()
            .into_iter()
            .map(|(r, c)| if c == 1 { r.to_string() } else { format!("{c}{r}") })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl Serialize for SingularitySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SingularitySet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SingularitySet::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl FromStr for SingularitySet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SingularitySet::parse(s)
    }
}

impl Ord for SingularitySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for SingularitySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A parsed set spec together with its table decorations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSet {
    pub set: SingularitySet,
    /// Points inside the parenthesized group, if any.
    pub inner: Option<SingularitySet>,
    /// Types whose term carried a `*`.
    pub starred: Vec<RootType>,
}

pub fn parse_marked(s: &str) -> Result<MarkedSet> {
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let b = s.as_bytes();
    let mut i = 0;
    let mut points = Vec::new();
    let mut inner: Option<Vec<RootType>> = None;
    let mut in_group = false;
    let mut starred = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i < b.len() && b[i] == b'0' && s[i + 1..].trim().is_empty() {
        return Ok(MarkedSet { set: SingularitySet::empty(), inner: None, starred });
    }
    loop {
        skip_ws(&mut i);
        if i < b.len() && b[i] == b'(' {
            if inner.is_some() || in_group {
                return Err(err(i, "only one parenthesized group is allowed"));
            }
            in_group = true;
            inner = Some(Vec::new());
            i += 1;
            skip_ws(&mut i);
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let mult: u32 = if i > start { s[start..i].parse().map_err(|_| err(start, "bad multiplicity"))? } else { 1 };
        if mult == 0 {
            return Err(err(start, "zero multiplicity"));
        }
        if i >= b.len() || !matches!(b[i], b'A' | b'D' | b'E') {
            return Err(err(i, "expected A, D or E"));
        }
        let kind = b[i] as char;
        i += 1;
        let istart = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == istart {
            return Err(err(i, "expected an index"));
        }
        let n: u32 = s[istart..i].parse().map_err(|_| err(istart, "bad index"))?;
        let r = RootType::new(kind, n).ok_or_else(|| err(istart - 1, "index out of range for this type"))?;
        if i < b.len() && b[i] == b'*' {
            starred.push(r);
            i += 1;
        }
        for _ in 0..mult {
            points.push(r);
            if in_group {
                inner.as_mut().unwrap().push(r);
            }
        }
        skip_ws(&mut i);
        if i < b.len() && b[i] == b')' {
            if !in_group {
                return Err(err(i, "unbalanced ')'"));
            }
            in_group = false;
            i += 1;
            if i < b.len() && b[i] == b'*' {
                i += 1;
            }
            skip_ws(&mut i);
        }
        if i >= b.len() {
            break;
        }
        if b[i] != b'+' {
            return Err(err(i, "expected '+'"));
        }
        i += 1;
    }
    if in_group {
        return Err(err(b.len(), "unclosed '('"));
    }
    Ok(MarkedSet { set: SingularitySet::new(points), inner: inner.map(SingularitySet::new), starred })
}

/// All multisets of root types with total rank at most `mu_max`, sorted by display string.
pub fn all_sets(mu_max: u32) -> Vec<SingularitySet> {
    let mut types = Vec::new();
    for n in 1..=mu_max {
        types.push(RootType::A(n));
        if n >= 4 {
            types.push(RootType::D(n));
        }
        if (6..=8).contains(&n) {
            types.push(RootType::E(n));
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(types: &[RootType], start: usize, left: u32, cur: &mut Vec<RootType>, out: &mut Vec<SingularitySet>) {
        for i in start..types.len() {
            let r = types[i];
            if r.rank() <= left {
                cur.push(r);
                out.push(SingularitySet::new(cur.clone()));
                rec(types, i, left - r.rank(), cur, out);
                cur.pop();
            }
        }
    }
    rec(&types, 0, mu_max, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s = SingularitySet::parse("2A4+2A3+2A2").unwrap();
        assert_eq!(s.mu(), 18);
        assert_eq!(s.to_string(), "2A4+2A3+2A2");
        let s = SingularitySet::parse("A1+E6+D5+A11").unwrap();
        assert_eq!(s.to_string(), "E6+D5+A11+A1");
    }

    #[test]
    fn parse_torus_group_and_stars() {
        let m = parse_marked("(A8+3A2*)+A4+A1").unwrap();
        assert_eq!(m.set.to_string(), "A8+A4+3A2+A1");
        assert_eq!(m.inner.unwrap().to_string(), "A8+3A2");
        assert_eq!(m.starred, vec![RootType::A(2)]);
        let m = parse_marked("2E6*+A7").unwrap();
        assert_eq!(m.starred, vec![RootType::E(6)]);
        assert!(m.inner.is_none());
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!(matches!(SingularitySet::parse("2A4+B3"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(SingularitySet::parse("D3"), Err(Error::Parse { .. })));
        assert!(matches!(SingularitySet::parse("A4+"), Err(Error::Parse { .. })));
        assert!(matches!(SingularitySet::parse("(A2+(A2))"), Err(Error::Parse { .. })));
    }

    #[test]
    fn weights() {
        assert_eq!(SingularitySet::parse("A17+A2").unwrap().weight(), 7);
        assert_eq!(SingularitySet::parse("E6+A8+A2").unwrap().weight(), 6);
        assert_eq!(SingularitySet::parse("A1").unwrap().weight(), 0);
    }

    #[test]
    fn small_enumerations() {
        let names = |m| all_sets(m).iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(names(1), vec!["A1"]);
        assert_eq!(names(2), vec!["2A1", "A1", "A2"]);
    }
}
