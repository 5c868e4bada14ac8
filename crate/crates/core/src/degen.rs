//! Degenerations of sets of singularities: maximizing closure, degeneration classes, the
//! corank-one poset and the cluster graphs of strata with non-real components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::classify::ClassificationReport;
use crate::data::{MaximizingRow, ReferenceData};
use crate::lattices::{degenerates_to, induced_of_type, RootType, SingularitySet};

pub use crate::lattices::perturbations;

/// Maximizing reference sets that `set` degenerates to.
pub fn maximizing_closure(set: &SingularitySet, maximizing: &[MaximizingRow]) -> Vec<SingularitySet> {
    let mut out: Vec<SingularitySet> =
        maximizing.iter().map(|r| &r.marked.set).filter(|m| degenerates_to(set, m)).cloned().collect();
    out.sort();
    out.dedup();
    out
}

/// Ways to distribute the points of `s1` over the points of `s2` as induced subdiagrams, up to
/// permutations of isomorphic points of `s2`; e.g. `[E6+A1]+[A5]+[A5]` for `E6+2A5+A1` in
/// `E8+E6+A5`.
pub fn degeneration_classes(s1: &SingularitySet, s2: &SingularitySet) -> usize {
    let pts = s2.points();
    let per: Vec<Vec<SingularitySet>> = pts.iter().map(|&r| induced_of_type(r)).collect();
    let mut found: BTreeSet<Vec<(RootType, SingularitySet)>> = BTreeSet::new();
    fn rec(
        need: &SingularitySet,
        pts: &[RootType],
        per: &[Vec<SingularitySet>],
        cur: &mut Vec<(RootType, SingularitySet)>,
        found: &mut BTreeSet<Vec<(RootType, SingularitySet)>>,
    ) {
        let i = cur.len();
        if i == pts.len() {
            if need.is_empty() {
                let mut key = cur.clone();
                key.sort();
                found.insert(key);
            }
            return;
        }
        for o in &per[i] {
            if let Some(rest) = need.difference(o) {
                cur.push((pts[i], o.clone()));
                rec(&rest, pts, per, cur, found);
                cur.pop();
            }
        }
    }
    rec(s1, pts, &per, &mut Vec::new(), &mut found);
    found.len()
}

/// Corank-one degenerations among a family of sets.
#[derive(Clone, Debug)]
pub struct DegenerationPoset {
    pub nodes: Vec<SingularitySet>,
    /// `(i, j)`: `nodes[i]` degenerates to `nodes[j]` and `mu` grows by one.
    pub edges: Vec<(usize, usize)>,
}

impl DegenerationPoset {
    pub fn new(mut nodes: Vec<SingularitySet>) -> DegenerationPoset {
        nodes.sort_by(|a, b| a.mu().cmp(&b.mu()).then_with(|| a.cmp(b)));
        nodes.dedup();
        let mut by_mu: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, s) in nodes.iter().enumerate() {
            by_mu.entry(s.mu()).or_default().push(i);
        }
        let mut edges = Vec::new();
        for (i, s) in nodes.iter().enumerate() {
            for &j in by_mu.get(&(s.mu() + 1)).map(Vec::as_slice).unwrap_or(&[]) {
                if degenerates_to(s, &nodes[j]) {
                    edges.push((i, j));
                }
            }
        }
        DegenerationPoset { nodes, edges }
    }

    /// Nodes reachable from `i` along edges, `i` included.
    pub fn reachable(&self, i: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == v && out.insert(b) {
                    stack.push(b);
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph degenerations {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{n}\"];").unwrap();
        }
        for (a, b) in &self.edges {
            writeln!(s, "  n{a} -> n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Asymmetric strata with their number of complex conjugate pairs: computed reports for
/// `mu <= 18`, reference rows for maximizing sets.
pub fn asymmetric_strata(reports: &[ClassificationReport], data: &ReferenceData) -> BTreeMap<SingularitySet, u32> {
    let mut out = BTreeMap::new();
    for r in reports {
        if let Some((_, c)) = r.components.filter(|&(_, c)| c > 0) {
            out.insert(r.set.clone(), c);
        }
    }
    for row in data.maximizing_ns.iter().filter(|r| r.c > 0) {
        out.insert(row.marked.set.clone(), row.c);
    }
    out
}

/// Vertex of a cluster graph: a set and the index of one of its conjugate pairs of components.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterVertex {
    pub set: SingularitySet,
    pub class: u32,
}

impl ClusterVertex {
    /// Stable identifier: canonical spec and class index.
    pub fn id(&self) -> String {
        format!("{}#{}", self.set, self.class)
    }
}

#[derive(Clone, Debug)]
pub struct ClusterGraph {
    pub p: u64,
    pub vertices: Vec<ClusterVertex>,
    /// Undirected edges as index pairs, from the smaller to the larger set.
    pub edges: Vec<(usize, usize)>,
}

impl ClusterGraph {
    /// Sets marked with the prime `p` in the non-real table, together with their asymmetric
    /// degenerations, joined by corank-one degenerations.
    pub fn build(p: u64, data: &ReferenceData, asymmetric: &BTreeMap<SingularitySet, u32>) -> ClusterGraph {
        let seeds: Vec<&SingularitySet> = data.nonreal.iter().filter(|r| r.test_prime == Some(p)).map(|r| &r.set).collect();
        let mut sets: BTreeSet<SingularitySet> = seeds.iter().map(|s| (*s).clone()).collect();
        for t in asymmetric.keys() {
            if seeds.iter().any(|s| degenerates_to(s, t)) {
                sets.insert(t.clone());
            }
        }
        let mut vertices = Vec::new();
        for s in &sets {
            let c = asymmetric.get(s).copied().unwrap_or(1);
            vertices.extend((0..c).map(|class| ClusterVertex { set: s.clone(), class }));
        }
        let mut edges = Vec::new();
        for (i, a) in vertices.iter().enumerate() {
            for (j, b) in vertices.iter().enumerate() {
                if b.set.mu() == a.set.mu() + 1 && degenerates_to(&a.set, &b.set) {
                    edges.push((i, j));
                }
            }
        }
        ClusterGraph { p, vertices, edges }
    }

    /// Vertices no other vertex degenerates to.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| !self.edges.iter().any(|&(_, b)| b == v)).collect()
    }

    fn component_labels(&self) -> Vec<usize> {
        let mut label: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(l: &mut [usize], mut x: usize) -> usize {
            while l[x] != x {
                l[x] = l[l[x]];
                x = l[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (x, y) = (find(&mut label, a), find(&mut label, b));
            label[x] = y;
        }
        (0..label.len()).map(|v| find(&mut label, v)).collect()
    }

    pub fn components(&self) -> usize {
        self.component_labels().into_iter().collect::<BTreeSet<_>>().len()
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    /// Dimension of the cycle space over `F_2`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + self.components() - self.vertices.len()
    }

    /// DOT text; a unique minimal vertex is filled grey.
    pub fn to_dot(&self) -> String {
        let minimal = self.minimal();
        let mut s = format!("graph C{} {{\n", self.p);
        for (i, v) in self.vertices.iter().enumerate() {
            let grey = if minimal == [i] { ", style=filled, fillcolor=grey" } else { "" };
            writeln!(s, "  \"{}\" [label=\"{}\"{grey}];", v.id(), v.set).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  \"{}\" -- \"{}\";", self.vertices[a].id(), self.vertices[b].id()).unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Adjacency list, one edge per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("source,target\n");
        for &(a, b) in &self.edges {
            writeln!(s, "{},{}", self.vertices[a].id(), self.vertices[b].id()).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SingularitySet {
        SingularitySet::parse(s).unwrap()
    }

    #[test]
    fn closure_of_two_a9() {
        let d = ReferenceData::builtin();
        assert_eq!(maximizing_closure(&set("2A9"), &d.maximizing_ns), vec![set("A10+A9"), set("A19")]);
        assert!(maximizing_closure(&set("2D9"), &d.maximizing_ns).is_empty());
        assert_eq!(maximizing_closure(&set("E8+A11"), &d.maximizing_ns), vec![set("E8+A11")]);
    }

    #[test]
    fn class_counts() {
        assert_eq!(degeneration_classes(&set("A1"), &set("A2")), 1);
        assert_eq!(degeneration_classes(&set("E6+2A5+A1"), &set("E8+E6+A5")), 2);
        assert_eq!(degeneration_classes(&set("A3"), &set("A4")), 1);
        assert_eq!(degeneration_classes(&set("A1"), &set("A3")), 1);
        assert_eq!(degeneration_classes(&set("A1"), &set("A2+A1")), 2);
    }

    #[test]
    fn poset_edges_raise_mu_by_one() {
        let p = DegenerationPoset::new(vec![set("A1"), set("A2"), set("2A1"), set("A3"), set("0")]);
        assert!(p.edges.iter().all(|&(a, b)| p.nodes[b].mu() == p.nodes[a].mu() + 1));
        let a1 = p.nodes.iter().position(|s| s == &set("A1")).unwrap();
        assert_eq!(p.reachable(a1).len(), 4);
        assert!(p.to_dot().contains("->"));
    }
}
