//! Finite index extensions, the primitive embedding criterion for the K3 lattice
//! `2E8 + 3U`, and transcendental genera.

use std::collections::{BTreeSet, HashSet};

use crate::arith::{legendre, unit_part};
use crate::error::{Error, Result};
use crate::fqf::{FiniteQuadraticForm, FqfElement};
use crate::lattices::{Discriminant, SingularitySet};

/// Rank of the K3 lattice and its signature.
pub const L_RANK: usize = 22;
pub const L_SIG: (usize, usize) = (3, 19);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusDescriptor {
    pub sig_plus: usize,
    pub sig_minus: usize,
    pub disc: FiniteQuadraticForm,
}

impl GenusDescriptor {
    pub fn rank(&self) -> usize {
        self.sig_plus + self.sig_minus
    }

    /// Brown invariant agrees with the signature and the discriminant fits in the rank.
    pub fn is_consistent(&self) -> bool {
        let sig = self.sig_plus as i64 - self.sig_minus as i64;
        self.disc.total_length() <= self.rank() && self.disc.brown() == sig.rem_euclid(8)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionKernel {
    pub gens: Vec<FqfElement>,
    pub order: i128,
    /// Invariant factors of the kernel group, e.g. `[3, 3]`.
    pub invariants: Vec<i64>,
}

impl ExtensionKernel {
    pub fn trivial() -> Self {
        ExtensionKernel { gens: vec![], order: 1, invariants: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn signature(&self) -> String {
        let parts: Vec<String> = self.invariants.iter().map(|d| d.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

pub fn quotient_form(f: &FiniteQuadraticForm, k: &ExtensionKernel) -> Result<FiniteQuadraticForm> {
    Ok(f.quotient_form(&k.gens)?.0)
}

/// Existence of a primitive embedding into `2E8 + 3U` of an even lattice with the given genus data.
pub fn embeds_primitively_in_l(sig_plus: usize, sig_minus: usize, disc: &FiniteQuadraticForm) -> bool {
    if sig_plus > L_SIG.0 || sig_minus > L_SIG.1 {
        return false;
    }
    let rank = sig_plus + sig_minus;
    let delta = L_RANK - rank;
    if disc.total_length() > delta {
        return false;
    }
    let order = disc.order();
    for p in disc.primes() {
        let (len, det) = disc.length_and_det(p);
        if len < delta {
            continue;
        }
        let pp = p as i128;
        let rest = order / disc.primary_part(p).order();
        if p == 2 {
            if !disc.primary_part(2).is_even() {
                continue;
            }
            let u = det.expect("even 2-part has a determinant") as i128;
            let v = (u * unit_part(rest, 2)).rem_euclid(8);
            if v != 1 && v != 7 {
                return false;
            }
        } else {
            let u = det.expect("odd p has a determinant");
            let lhs = u * i64::from(legendre(rest, pp));
            let target = if sig_plus % 2 == 1 { 1 } else { i64::from(legendre(-1, pp)) };
            if lhs != target {
                return false;
            }
        }
    }
    true
}

pub fn embeds_genus(g: &GenusDescriptor) -> bool {
    embeds_primitively_in_l(g.sig_plus, g.sig_minus, &g.disc)
}

/// Genus data of `S_h` extended by `k`: signature `(1, mu)` and the form on `K-perp/K`.
pub fn extension_genus(d: &Discriminant, k: &ExtensionKernel) -> Result<GenusDescriptor> {
    let disc = quotient_form(&d.form, k)?;
    Ok(GenusDescriptor { sig_plus: 1, sig_minus: d.set.mu() as usize, disc })
}

/// Genus of the orthogonal complement of the extension of `S_h` in the K3 lattice.
pub fn transcendental_genus(d: &Discriminant, k: &ExtensionKernel) -> Result<GenusDescriptor> {
    let ext = extension_genus(d, k)?;
    if !embeds_genus(&ext) {
        return Err(Error::Degenerate(format!("{} does not embed primitively", d.set)));
    }
    let mu = d.set.mu() as usize;
    Ok(GenusDescriptor { sig_plus: 2, sig_minus: L_SIG.1 - mu, disc: ext.disc.negate() })
}

/// Whether `x` (in the `S` part of `discr S_h`) generates a root-free isotropic cyclic group.
fn is_root_free_isotropic(d: &Discriminant, x: &FqfElement) -> bool {
    let n = d.form.element_order(x);
    if d.form.qv(x) != 0.into() {
        return false;
    }
    (1..n).all(|k| {
        let y = d.form.scale(x, k);
        d.form.qv(&y) == 0.into() && d.min_norm(&y) != 2.into()
    })
}

/// Canonical key of the cyclic subgroup generated by `x`.
fn cyclic_key(d: &Discriminant, x: &FqfElement) -> Vec<Vec<i64>> {
    let n = d.form.element_order(x);
    let mut v: Vec<Vec<i64>> = (1..n).map(|k| d.form.scale(x, k).coords).collect();
    v.sort();
    v
}

fn subgroup_key(d: &Discriminant, gens: &[FqfElement]) -> Vec<Vec<i64>> {
    let mut elems: BTreeSet<Vec<i64>> = BTreeSet::from([d.form.zero().coords]);
    for g in gens {
        let n = d.form.element_order(g);
        let cur: Vec<Vec<i64>> = elems.iter().cloned().collect();
        for e in cur {
            let mut y = d.form.element(&e);
            for _ in 1..n {
                y = d.form.add(&y, g);
                elems.insert(y.coords.clone());
            }
        }
    }
    elems.into_iter().collect()
}

/// Root-free isotropic order-`n` cyclic subgroups of `discr S`, one representative per orbit
/// under the Dynkin symmetries.
pub fn kernel_candidates(d: &Discriminant, n: i64) -> Result<Vec<ExtensionKernel>> {
    let mut reps: Vec<FqfElement> = Vec::new();
    let mut seen = HashSet::new();
    for x in d.form.isotropic_elements(n) {
        if d.h.is_some_and(|h| x.coords[h] != 0) || !is_root_free_isotropic(d, &x) {
            continue;
        }
        let key = cyclic_key(d, &x);
        if seen.insert(key) {
            reps.push(x);
        }
    }
    if reps.is_empty() {
        return Ok(vec![]);
    }
    let gens: Vec<_> = d.sym_prime_generators()?.into_iter().map(|g| g.auto).collect();
    let mut orbit_of: Vec<Option<usize>> = vec![None; reps.len()];
    let index: std::collections::HashMap<Vec<Vec<i64>>, usize> =
        reps.iter().enumerate().map(|(i, x)| (cyclic_key(d, x), i)).collect();
    let mut out = Vec::new();
    for start in 0..reps.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let id = out.len();
        orbit_of[start] = Some(id);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for a in &gens {
                let y = d.form.apply(a, &reps[i]);
                let j = index[&cyclic_key(d, &y)];
                if orbit_of[j].is_none() {
                    orbit_of[j] = Some(id);
                    stack.push(j);
                }
            }
        }
        out.push(ExtensionKernel { gens: vec![reps[start].clone()], order: n as i128, invariants: vec![n] });
    }
    Ok(out)
}

/// Largest elementary abelian 3-subgroups of `discr S` all of whose nonzero elements are
/// root-free isotropic; returns one such kernel per rank found, largest first.
pub fn elementary_three_kernels(d: &Discriminant) -> Vec<ExtensionKernel> {
    let valid: Vec<FqfElement> = d
        .form
        .isotropic_elements(3)
        .into_iter()
        .filter(|x| d.h.map_or(true, |h| x.coords[h] == 0) && is_root_free_isotropic(d, x))
        .collect();
    let valid_set: HashSet<Vec<i64>> = valid.iter().map(|x| x.coords.clone()).collect();
    // one generator per cyclic subgroup: the lexicographically smaller of x and 2x
    let valid: Vec<FqfElement> = valid.into_iter().filter(|x| x.coords <= d.form.scale(x, 2).coords).collect();
    let mut best: Vec<Option<Vec<FqfElement>>> = vec![None; 5];
    fn grow(
        d: &Discriminant,
        valid: &[FqfElement],
        valid_set: &HashSet<Vec<i64>>,
        start: usize,
        gens: &mut Vec<FqfElement>,
        best: &mut Vec<Option<Vec<FqfElement>>>,
    ) {
        let k = gens.len();
        if k > 0 && best[k].is_none() {
            best[k] = Some(gens.clone());
        }
        if k + 1 >= best.len() {
            return;
        }
        let elems = subgroup_key(d, gens);
        for i in start..valid.len() {
            let x = &valid[i];
            if gens.iter().any(|g| d.form.bv(g, x) != 0.into()) {
                continue;
            }
            if elems.contains(&x.coords) {
                continue;
            }
            let ok = elems.iter().all(|e| {
                let e = d.form.element(e);
                [1, 2].iter().all(|&s| valid_set.contains(&d.form.add(&e, &d.form.scale(x, s)).coords))
            });
            if ok {
                gens.push(x.clone());
                grow(d, valid, valid_set, i + 1, gens, best);
                gens.pop();
                if best[k + 1].is_some() && k + 2 < best.len() && best[k + 2].is_some() {
                    return;
                }
            }
        }
    }
    grow(d, &valid, &valid_set, 0, &mut Vec::new(), &mut best);
    best.into_iter()
        .enumerate()
        .rev()
        .filter_map(|(k, g)| {
            g.map(|gens| ExtensionKernel { gens, order: 3i128.pow(k as u32), invariants: vec![3; k] })
        })
        .collect()
}

/// Torus admissibility by weight: `w = 6`, or `w = 7` with a free `A2` point.
pub fn torus_weight_admissible(s: &SingularitySet) -> bool {
    let w = s.weight();
    w == 6 || (w == 7 && s.count(crate::lattices::RootType::A(2)) > 0)
}

/// Order-3 kernel of a torus-type extension, if one exists; errors if two orbits are found.
pub fn torus_admissible(d: &Discriminant) -> Result<Option<ExtensionKernel>> {
    let mut ks = kernel_candidates(d, 3)?;
    match ks.len() {
        0 => Ok(None),
        1 => Ok(ks.pop()),
        n => Err(Error::Invariant(format!("{} has {n} orbits of order-3 kernels", d.set))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqf::q;

    fn disc(s: &str) -> Discriminant {
        Discriminant::of(&SingularitySet::parse(s).unwrap(), true)
    }

    fn realized(s: &str) -> bool {
        let d = disc(s);
        embeds_genus(&extension_genus(&d, &ExtensionKernel::trivial()).unwrap())
    }

    #[test]
    fn embedding_examples() {
        assert!(realized("A1"));
        assert!(!realized("19A1"));
        assert!(realized("2D8"));
    }

    #[test]
    fn transcendental_of_2a9() {
        let t = transcendental_genus(&disc("2A9"), &ExtensionKernel::trivial()).unwrap();
        assert_eq!((t.sig_plus, t.sig_minus), (2, 1));
        let e = FiniteQuadraticForm::cyclic(5, q(2, 5)).unwrap();
        let h = FiniteQuadraticForm::cyclic(2, q(1, 2)).unwrap();
        let h3 = FiniteQuadraticForm::cyclic(2, q(3, 2)).unwrap();
        let expected = e.orthogonal_sum(&e).orthogonal_sum(&h).orthogonal_sum(&h).orthogonal_sum(&h3);
        assert_eq!(t.disc.primary_part(5).render(), expected.primary_part(5).render());
        assert_eq!(t.disc.order(), 200);
        assert_eq!(t.disc.brown(), expected.brown());
        assert!(t.is_consistent());
    }

    #[test]
    fn six_a2_kernel() {
        let d = disc("6A2");
        let ks = kernel_candidates(&d, 3).unwrap();
        assert_eq!(ks.len(), 1);
        let x = &ks[0].gens[0];
        assert!(x.coords[..6].iter().all(|&c| c != 0));
        let quo = quotient_form(&d.form, &ks[0]).unwrap();
        assert_eq!(quo.order() * 9, d.form.order());
    }

    #[test]
    fn low_weight_has_no_kernel() {
        assert!(kernel_candidates(&disc("5A2"), 3).unwrap().is_empty());
        assert!(kernel_candidates(&disc("A1"), 3).unwrap().is_empty());
        assert_eq!(kernel_candidates(&disc("4A4"), 5).unwrap().len(), 1);
    }

    #[test]
    fn nine_a2_has_rank_three_kernel() {
        let ks = elementary_three_kernels(&disc("9A2"));
        assert_eq!(ks[0].invariants, vec![3, 3, 3]);
    }
}
