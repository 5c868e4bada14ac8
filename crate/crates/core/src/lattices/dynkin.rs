use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use super::gram::dynkin_edges;
use super::set::{RootType, SingularitySet};

#[derive(Clone, Debug)]
pub struct DynkinGraph {
    pub adj: Vec<Vec<usize>>,
    /// Vertex ranges of the points, in the order of the set.
    pub comps: Vec<std::ops::Range<usize>>,
    pub set: SingularitySet,
}

impl DynkinGraph {
    pub fn of(set: &SingularitySet) -> DynkinGraph {
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut comps = Vec::new();
        for &r in set.points() {
            let off = adj.len();
            adj.extend((0..r.rank()).map(|_| Vec::new()));
            for (a, b) in dynkin_edges(r) {
                adj[off + a].push(off + b);
                adj[off + b].push(off + a);
            }
            comps.push(off..adj.len());
        }
        DynkinGraph { adj, comps, set: set.clone() }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Type of the subgraph induced on the vertices in `mask`.
    pub fn induced(&self, mask: &[bool]) -> SingularitySet {
        induced_type(&self.adj, mask)
    }

    /// Generators of the graph automorphism group, as vertex permutations.
    pub fn automorphism_generators(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let id: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        let pts = self.set.points();
        for (i, &r) in pts.iter().enumerate() {
            let off = self.comps[i].start;
            let k = r.rank() as usize;
            let mut push = |pairs: Vec<(usize, usize)>| {
                let mut p = id.clone();
                for (a, b) in pairs {
                    p[off + a] = off + b;
                    p[off + b] = off + a;
                }
                out.push(p);
            };
            match r {
                RootType::A(_) if k >= 2 => push((0..k / 2).map(|j| (j, k - 1 - j)).collect()),
                RootType::D(_) => {
                    push(vec![(k - 2, k - 1)]);
                    if k == 4 {
                        push(vec![(0, 2)]);
                    }
                }
                RootType::E(6) => push(vec![(0, 4), (1, 3)]),
                _ => {}
            }
        }
        for i in 1..pts.len() {
            if pts[i] == pts[i - 1] {
                let (a, b) = (self.comps[i - 1].clone(), self.comps[i].clone());
                let mut p = id.clone();
                for (x, y) in a.zip(b) {
                    p[x] = y;
                    p[y] = x;
                }
                out.push(p);
            }
        }
        out
    }
}

/// Identifies an induced subgraph of an ADE diagram (always a disjoint union of ADE trees).
pub fn induced_type(adj: &[Vec<usize>], mask: &[bool]) -> SingularitySet {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut pts = Vec::new();
    for v in 0..n {
        if !mask[v] || seen[v] {
            continue;
        }
        let mut comp = vec![v];
        seen[v] = true;
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            k += 1;
            for &w in &adj[u] {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let deg = |u: usize| adj[u].iter().filter(|&&w| mask[w]).count();
        let branch = comp.iter().copied().find(|&u| deg(u) >= 3);
        let size = comp.len() as u32;
        let r = match branch {
            None => RootType::A(size),
            Some(b) => {
                let mut arms: Vec<u32> = adj[b]
                    .iter()
                    .filter(|&&w| mask[w])
                    .map(|&w| {
                        let (mut prev, mut cur, mut len) = (b, w, 1);
                        loop {
                            let next: Vec<usize> = adj[cur].iter().copied().filter(|&x| mask[x] && x != prev).collect();
                            if next.is_empty() {
                                break len;
                            }
                            prev = cur;
                            cur = next[0];
                            len += 1;
                        }
                    })
                    .collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, k] => RootType::D(k + 3),
                    [1, 2, 2] => RootType::E(6),
                    [1, 2, 3] => RootType::E(7),
                    [1, 2, 4] => RootType::E(8),
                    _ => unreachable!("induced subgraph of an ADE diagram is ADE"),
                }
            }
        };
        pts.push(r);
    }
    SingularitySet::new(pts)
}

fn induced_of_type_a(m: u32) -> Vec<SingularitySet> {
    if m == 0 {
        vec![SingularitySet::empty()]
    } else {
        induced_of_type(RootType::A(m))
    }
}

/// All types of induced subgraphs of one point's diagram, including the empty one.
pub fn induced_of_type(r: RootType) -> Vec<SingularitySet> {
    static CACHE: OnceLock<Mutex<HashMap<RootType, Vec<SingularitySet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&r) {
        return v.clone();
    }
    let out: Vec<SingularitySet> = match r {
        RootType::A(n) => {
            // unions of paths A_{k_i} with sum (k_i + 1) <= n + 1
            let mut out = Vec::new();
            fn rec(max: u32, left: u32, cur: &mut Vec<RootType>, out: &mut Vec<SingularitySet>) {
                out.push(SingularitySet::new(cur.clone()));
                for k in (1..=max.min(left.saturating_sub(1))).rev() {
                    cur.push(RootType::A(k));
                    rec(k, left - k - 1, cur, out);
                    cur.pop();
                }
            }
            rec(n, n + 1, &mut Vec::new(), &mut out);
            out
        }
        RootType::D(n) => {
            // fork vertex absent: two free leaves and a path A_{n-3}; present: a tail of k path
            // vertices through the fork, the leaves attached to it, and a path A_{n-3-k} beyond
            let mut set = BTreeSet::new();
            let add = |set: &mut BTreeSet<SingularitySet>, head: Vec<RootType>, rest: u32| {
                for t in induced_of_type_a(rest) {
                    set.insert(t.union(&SingularitySet::new(head.clone())));
                }
            };
            for leaves in 0..=2 {
                add(&mut set, vec![RootType::A(1); leaves], n - 3);
            }
            for k in 1..=n - 2 {
                let rest = (n - 3).saturating_sub(k);
                add(&mut set, vec![RootType::A(k)], rest);
                add(&mut set, vec![RootType::A(k + 1)], rest);
                add(&mut set, vec![if k == 1 { RootType::A(3) } else { RootType::D(k + 2) }], rest);
            }
            set.into_iter().collect()
        }
        _ => {
            let g = DynkinGraph::of(&SingularitySet::new(vec![r]));
            let n = g.len();
            let mut set = BTreeSet::new();
            for bits in 0u32..(1 << n) {
                let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                set.insert(g.induced(&mask));
            }
            set.into_iter().collect()
        }
    };
    cache.lock().unwrap().insert(r, out.clone());
    out
}

/// All nonempty sets obtained as induced subgraphs of the diagram of `s`, including `s` itself.
pub fn perturbations(s: &SingularitySet) -> Vec<SingularitySet> {
    let mut acc: HashSet<SingularitySet> = HashSet::from([SingularitySet::empty()]);
    for &r in s.points() {
        let opts = induced_of_type(r);
        let mut next = HashSet::with_capacity(acc.len() * opts.len());
        for a in &acc {
            for o in &opts {
                next.insert(a.union(o));
            }
        }
        acc = next;
    }
    let mut out: Vec<SingularitySet> = acc.into_iter().filter(|x| !x.is_empty()).collect();
    out.sort();
    out
}

/// Whether the diagram of `s1` is an induced subgraph of that of `s2`.
pub fn degenerates_to(s1: &SingularitySet, s2: &SingularitySet) -> bool {
    if s1.is_empty() || s1 == s2 {
        return true;
    }
    if s1.mu() >= s2.mu() {
        return false;
    }
    // distribute the points of s1 over the points of s2
    let per: Vec<Vec<SingularitySet>> = s2.points().iter().map(|&r| induced_of_type(r)).collect();
    fn search(need: &SingularitySet, per: &[Vec<SingularitySet>], i: usize) -> bool {
        if need.is_empty() {
            return true;
        }
        if i == per.len() {
            return false;
        }
        per[i].iter().any(|o| match need.difference(o) {
            Some(rest) => search(&rest, per, i + 1),
            None => false,
        })
    }
    search(s1, &per, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SingularitySet {
        SingularitySet::parse(s).unwrap()
    }

    #[test]
    fn closed_forms_match_subset_enumeration() {
        for r in (1..=12).map(RootType::A).chain((4..=13).map(RootType::D)) {
            let g = DynkinGraph::of(&SingularitySet::new(vec![r]));
            let n = g.len();
            let brute: BTreeSet<SingularitySet> =
                (0u32..1 << n).map(|bits| g.induced(&(0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())).collect();
            let closed: BTreeSet<SingularitySet> = induced_of_type(r).into_iter().collect();
            assert_eq!(closed, brute, "{r}");
        }
    }

    #[test]
    fn degeneration_examples() {
        assert!(degenerates_to(&set("2A9"), &set("A19")));
        assert!(degenerates_to(&set("2A9"), &set("A10+A9")));
        assert!(degenerates_to(&set("A1"), &set("A2")));
        assert!(!degenerates_to(&set("D4"), &set("A4")));
        assert!(!degenerates_to(&set("A7"), &set("E7")));
        assert!(degenerates_to(&set("A7"), &set("E8")));
    }

    #[test]
    fn perturbations_of_a2() {
        let p: Vec<String> = perturbations(&set("A2")).iter().map(|s| s.to_string()).collect();
        assert_eq!(p, vec!["A1", "A2"]);
    }

    #[test]
    fn induced_identification() {
        let g = DynkinGraph::of(&set("E8"));
        let mut mask = vec![true; 8];
        mask[7] = false;
        assert_eq!(g.induced(&mask).to_string(), "A7");
        let mut mask = vec![true; 8];
        mask[0] = false;
        assert_eq!(g.induced(&mask).to_string(), "D7");
        let mut mask = vec![true; 8];
        mask[6] = false;
        assert_eq!(g.induced(&mask).to_string(), "E7");
    }
}
