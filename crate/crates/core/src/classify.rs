//! The classification pipeline: realizability, connected components, symmetry, real
//! curves and monodromy for non-special, torus and special irreducible sextics.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::data::{MaximizingRow, ReferenceData};
use crate::error::{Error, Result};
use crate::fqf::{q, FiniteQuadraticForm};
use crate::lattices::{all_sets, degenerates_to, induced_of_type, perturbations, Discriminant, RootType, SingularitySet, SymGenerator, SymKind};
use crate::mm::{EModule, Quotient};
use crate::nikulin::{
    elementary_three_kernels, embeds_genus, embeds_primitively_in_l, extension_genus, kernel_candidates, torus_admissible,
    transcendental_genus, ExtensionKernel, GenusDescriptor,
};

/// Largest Milnor number handled by computation; maximizing sets come from reference data.
pub const MU_COMPUTED: u32 = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Trivial kernel.
    Ns,
    /// Kernel `Z/3`.
    Torus,
    /// Kernel `(Z/3)^2`.
    Torus4,
    /// Kernel `(Z/3)^3`.
    Torus12,
    /// Kernel `Z/5`.
    Special5,
    /// Kernel `Z/7`.
    Special7,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Ns, Family::Torus, Family::Torus4, Family::Torus12, Family::Special5, Family::Special7];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Ns => "ns",
            Family::Torus => "3",
            Family::Torus4 => "3-3",
            Family::Torus12 => "3-3-3",
            Family::Special5 => "5",
            Family::Special7 => "7",
        }
    }

    /// Accepts the tags above and the names `ns`, `torus`, `torus4`, `torus12`, `special5`, `special7`.
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "ns" => Family::Ns,
            "3" | "torus" => Family::Torus,
            "3-3" | "torus4" => Family::Torus4,
            "3-3-3" | "torus12" => Family::Torus12,
            "5" | "special5" => Family::Special5,
            "7" | "special7" => Family::Special7,
            _ => return None,
        })
    }

    pub fn kernel(self) -> Vec<i64> {
        match self {
            Family::Ns => vec![],
            Family::Torus => vec![3],
            Family::Torus4 => vec![3, 3],
            Family::Torus12 => vec![3, 3, 3],
            Family::Special5 => vec![5],
            Family::Special7 => vec![7],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RealCurve {
    Yes,
    No,
    Undetermined,
}

impl fmt::Display for RealCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RealCurve::Yes => "yes",
            RealCurve::No => "no",
            RealCurve::Undetermined => "undetermined",
        })
    }
}

/// Permutation group of the singular points: a permutation belongs to it iff its restriction
/// to each bracket is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monodromy {
    pub brackets: Vec<SingularitySet>,
    /// Only the `E8` points may be permuted.
    pub e8_only: bool,
}

impl Monodromy {
    pub fn full() -> Monodromy {
        Monodromy { brackets: vec![], e8_only: false }
    }

    pub fn is_full(&self) -> bool {
        self.brackets.is_empty() && !self.e8_only
    }

    /// Bracket notation, e.g. `[2A4+2A2]+D6`; `full` for the whole type-preserving group.
    pub fn render(&self, set: &SingularitySet) -> String {
        if self.e8_only {
            return "E8-points".into();
        }
        if self.brackets.is_empty() {
            return "full".into();
        }
        let mut rest = set.clone();
        let mut parts = Vec::new();
        for b in &self.brackets {
            rest = rest.difference(b).expect("bracket is a subset");
            parts.push(format!("[{b}]"));
        }
        if !rest.is_empty() {
            parts.push(rest.to_string());
        }
        parts.join("+")
    }
}

#[derive(Clone, Debug)]
pub struct HomologicalTypeRecord {
    pub set: SingularitySet,
    pub kernel: ExtensionKernel,
    pub tgenus: GenusDescriptor,
    /// Canonical representative of the class in `E(T) / Im d-perp`.
    pub component_class: u32,
    pub symmetric: bool,
    pub real_curve: RealCurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub set: SingularitySet,
    pub family: Family,
    pub realized: bool,
    /// `(r, c)`: real components and pairs of complex conjugate ones.
    pub components: Option<(u32, u32)>,
    pub monodromy: Option<String>,
    pub real_curve: Option<RealCurve>,
    pub symmetric: Option<bool>,
    pub e_order: Option<u64>,
    pub irregular: Vec<u64>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    fn unrealized(set: &SingularitySet, family: Family) -> ClassificationReport {
        ClassificationReport {
            set: set.clone(),
            family,
            realized: false,
            components: None,
            monodromy: None,
            real_curve: None,
            symmetric: None,
            e_order: None,
            irregular: vec![],
            notes: vec![],
        }
    }

    /// Total number of components `r + 2c`.
    pub fn total_components(&self) -> Option<u32> {
        self.components.map(|(r, c)| r + 2 * c)
    }
}

/// A set that failed to classify, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub set: SingularitySet,
    pub error: Error,
}

/// Lattice data of a primitive homological type extending a set with `mu <= 18`.
#[derive(Clone, Debug)]
pub struct NsAnalysis {
    pub disc: Discriminant,
    pub tgenus: GenusDescriptor,
    pub emodule: EModule,
    /// Generators of the symmetries of the set; left empty when `E+(T)` is trivial.
    pub generators: Vec<SymGenerator>,
    /// Images of the generators in the local groups at the irregular primes.
    pub raw: Vec<u32>,
}

impl NsAnalysis {
    /// `None` if the set admits no primitive homological type.
    pub fn new(set: &SingularitySet) -> Result<Option<NsAnalysis>> {
        if set.mu() > MU_COMPUTED {
            return Err(Error::Unsupported { set: set.to_string(), reason: "Milnor number 19 is answered from reference data".into() });
        }
        let disc = Discriminant::of(set, true);
        let trivial = ExtensionKernel::trivial();
        if !embeds_genus(&extension_genus(&disc, &trivial)?) {
            return Ok(None);
        }
        let tgenus = transcendental_genus(&disc, &trivial)?;
        let emodule = EModule::new(&tgenus, &set.to_string())?;
        let generators = if emodule.e_plus.is_trivial() { vec![] } else { disc.sym_prime_generators()? };
        let raw = generators
            .iter()
            .map(|g| match &g.mirrors {
                Some(m) => emodule.raw_product(&tgenus.disc, m),
                None => Ok(emodule.d4k_swap_vector()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(NsAnalysis { disc, tgenus, emodule, generators, raw }))
    }

    pub fn set(&self) -> &SingularitySet {
        &self.disc.set
    }

    /// The discriminant of `T`, on the generators of `discr S_h`.
    pub fn t_form(&self) -> &FiniteQuadraticForm {
        &self.tgenus.disc
    }

    /// Images of the generators in `E(T)`.
    pub fn dperp_image(&self) -> Vec<u32> {
        self.raw.iter().map(|&v| self.emodule.e.reduce(v)).collect()
    }

    /// `E(T) / Im d-perp`.
    pub fn cokernel(&self) -> Quotient {
        self.emodule.e.modulo(&self.raw)
    }

    /// The homological types admit an orientation reversing automorphism.
    pub fn is_symmetric(&self) -> Result<bool> {
        if !self.emodule.sigma_tilde_in_minus_minus() {
            return Ok(true);
        }
        let raw = &self.raw;
        let span = Quotient::new(self.emodule.e.dim, raw).span();
        Ok(span.iter().any(|&v| self.emodule.e.reduce(v) == 0 && self.emodule.e_plus.reduce(v) != 0))
    }

    /// Permutation group of the singular points realized by monodromy.
    pub fn monodromy(&self) -> Result<Monodromy> {
        if self.emodule.e_plus.is_trivial() {
            return Ok(Monodromy::full());
        }
        let raw = &self.raw;
        let internal: Vec<u32> =
            self.generators.iter().zip(raw).filter(|(g, _)| matches!(g.kind, SymKind::Internal(_))).map(|(_, &v)| v).collect();
        let quo = self.emodule.e_plus.modulo(&internal);
        let mut by_type: BTreeMap<RootType, u32> = BTreeMap::new();
        for (g, &v) in self.generators.iter().zip(raw) {
            if let SymKind::Transposition(r, _, _) = g.kind {
                let w = quo.reduce(v);
                if let Some(&old) = by_type.get(&r) {
                    if old != w {
                        return Err(Error::Invariant(format!("{}: transpositions of {r} disagree in E+", self.set())));
                    }
                }
                by_type.insert(r, w);
            }
        }
        let mut groups: BTreeMap<u32, Vec<RootType>> = BTreeMap::new();
        for (r, w) in by_type {
            if w != 0 {
                groups.entry(w).or_default().push(r);
            }
        }
        let values: Vec<u32> = groups.keys().copied().collect();
        if quo.modulo(&values).rank() != quo.rank() + values.len() {
            return Err(Error::Unsupported { set: self.set().to_string(), reason: "permutation group is not of bracket form".into() });
        }
        let mut brackets: Vec<SingularitySet> = groups
            .into_values()
            .map(|types| {
                let pts = types.iter().flat_map(|&r| std::iter::repeat(r).take(self.set().count(r))).collect();
                SingularitySet::new(pts)
            })
            .collect();
        brackets.sort_by(|a, b| a.points()[0].cmp(&b.points()[0]));
        Ok(Monodromy { brackets, e8_only: false })
    }

    /// Component classes, each listed by its canonical representative in `E(T)`.
    pub fn records(&self, real_curve: RealCurve) -> Result<Vec<HomologicalTypeRecord>> {
        let coker = self.cokernel();
        let symmetric = self.is_symmetric()?;
        let mut reps: Vec<u32> = (0..(1u32 << coker.dim)).map(|v| coker.reduce(v)).collect();
        reps.sort();
        reps.dedup();
        Ok(reps
            .into_iter()
            .map(|c| HomologicalTypeRecord {
                set: self.set().clone(),
                kernel: ExtensionKernel::trivial(),
                tgenus: self.tgenus.clone(),
                component_class: c,
                symmetric,
                real_curve,
            })
            .collect())
    }
}

/// Whether `T` contains a vector of square 2: `S_h + Za`, `a^2 = 2`, glued along `alpha + beta`
/// with `alpha` of order 2 and square `-1/2`, embeds primitively in the K3 lattice.
pub fn square_two_test(disc: &Discriminant) -> Result<bool> {
    let beta = FiniteQuadraticForm::cyclic(2, q(1, 2))?;
    let big = disc.form.orthogonal_sum(&beta);
    let mu = disc.set.mu() as usize;
    for alpha in disc.form.torsion(2) {
        if disc.form.element_order(&alpha) != 2 || disc.form.qv(&alpha) != q(3, 2) {
            continue;
        }
        let mut c = alpha.coords.clone();
        c.push(1);
        let (quo, _) = big.quotient_form(&[big.element(&c)])?;
        if embeds_primitively_in_l(2, mu, &quo) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Perturbations of a maximizing set invariant under its real structure: the exchanged pair
/// is perturbed identically, the other points freely.
pub fn symmetric_perturbations(row: &MaximizingRow) -> Vec<SingularitySet> {
    let set = &row.marked.set;
    let (fixed, pair) = match &row.conj_pairs {
        Some(cp) => {
            let r = cp.points()[0];
            (set.difference(&SingularitySet::new(vec![r, r])).expect("marked pair is in the set"), Some(r))
        }
        None => (set.clone(), None),
    };
    let mut base = perturbations(&fixed);
    base.push(SingularitySet::empty());
    let mut out: Vec<SingularitySet> = match pair {
        None => base,
        Some(r) => {
            let mut v = Vec::new();
            for y in induced_of_type(r) {
                let yy = y.union(&y);
                v.extend(base.iter().map(|b| b.union(&yy)));
            }
            v
        }
    };
    out.sort();
    out.dedup();
    out
}

/// Whether `set` is among the perturbations of a maximizing set invariant under its real
/// structure: the exchanged pair is perturbed identically, the other points freely.
pub fn is_symmetric_perturbation(set: &SingularitySet, row: &MaximizingRow) -> bool {
    let whole = &row.marked.set;
    match &row.conj_pairs {
        None => degenerates_to(set, whole),
        Some(cp) => {
            let r = cp.points()[0];
            let fixed = whole.difference(&SingularitySet::new(vec![r, r])).expect("marked pair is in the set");
            induced_of_type(r).iter().any(|y| set.difference(&y.union(y)).is_some_and(|rest| degenerates_to(&rest, &fixed)))
        }
    }
}

/// Reference data shared by all classifiers.
pub struct Atlas {
    pub data: ReferenceData,
}

impl Atlas {
    pub fn new(data: ReferenceData) -> Atlas {
        Atlas { data }
    }

    pub fn builtin() -> Atlas {
        Atlas::new(ReferenceData::builtin())
    }

    /// Obtained from a real maximizing sextic by a perturbation respecting its real structure.
    pub fn is_real_perturbation(&self, set: &SingularitySet) -> bool {
        self.data.maximizing_ns.iter().filter(|r| r.r > 0).any(|r| is_symmetric_perturbation(set, r))
    }

    pub fn real_curve(&self, a: &NsAnalysis, symmetric: bool) -> Result<RealCurve> {
        if !symmetric {
            return Ok(RealCurve::No);
        }
        match self.data.override_for(a.set(), "real_curve") {
            Some("yes") => return Ok(RealCurve::Yes),
            Some("no") => return Ok(RealCurve::No),
            Some(other) => return Err(Error::Data(format!("{}: bad real_curve override '{other}'", a.set()))),
            None => {}
        }
        if self.is_real_perturbation(a.set()) || square_two_test(&a.disc)? {
            return Ok(RealCurve::Yes);
        }
        Ok(RealCurve::Undetermined)
    }

    fn maximizing_report(&self, set: &SingularitySet, family: Family) -> ClassificationReport {
        let rows = if family == Family::Ns { &self.data.maximizing_ns } else { &self.data.maximizing_torus };
        let Some(row) = rows.iter().find(|r| &r.marked.set == set) else {
            return ClassificationReport::unrealized(set, family);
        };
        let mut rep = ClassificationReport::unrealized(set, family);
        rep.realized = true;
        rep.components = Some((row.r, row.c));
        rep.real_curve = Some(if row.r > 0 { RealCurve::Yes } else { RealCurve::No });
        if family == Family::Ns {
            rep.monodromy = Some(Monodromy { brackets: vec![], e8_only: true }.render(set));
        }
        rep.notes.push("maximizing set, reference data".into());
        rep
    }

    pub fn classify_nonspecial(&self, set: &SingularitySet) -> Result<ClassificationReport> {
        if set.mu() > MU_COMPUTED {
            return Ok(self.maximizing_report(set, Family::Ns));
        }
        let Some(a) = NsAnalysis::new(set)? else {
            return Ok(ClassificationReport::unrealized(set, Family::Ns));
        };
        let classes = a.cokernel().order() as u32;
        let symmetric = a.is_symmetric()?;
        let real = self.real_curve(&a, symmetric)?;
        let mut rep = ClassificationReport::unrealized(set, Family::Ns);
        rep.realized = true;
        rep.components = Some(if symmetric { (classes, 0) } else { (0, classes) });
        rep.symmetric = Some(symmetric);
        rep.real_curve = Some(real);
        rep.e_order = Some(a.emodule.e.order());
        rep.irregular = a.emodule.irregular.clone();
        rep.monodromy = Some(a.monodromy()?.render(set));
        if classes > 1 {
            rep.notes.push(format!("{classes} homological types"));
        }
        if symmetric && real != RealCurve::Yes {
            rep.notes.push(format!("real component, real curves: {real}"));
        }
        Ok(rep)
    }

    /// Transcendental genus of the torus type extension, if realized.
    pub fn torus_genus(set: &SingularitySet) -> Result<Option<(Discriminant, ExtensionKernel, GenusDescriptor)>> {
        let w = set.weight();
        if !(6..=7).contains(&w) {
            return Ok(None);
        }
        let d = Discriminant::of(set, true);
        let Some(k) = torus_admissible(&d)? else { return Ok(None) };
        if !embeds_genus(&extension_genus(&d, &k)?) {
            return Ok(None);
        }
        let t = transcendental_genus(&d, &k)?;
        Ok(Some((d, k, t)))
    }

    pub fn classify_torus(&self, set: &SingularitySet) -> Result<ClassificationReport> {
        if set.mu() > MU_COMPUTED {
            return Ok(self.maximizing_report(set, Family::Torus));
        }
        let Some((_, _, t)) = Self::torus_genus(set)? else {
            return Ok(ClassificationReport::unrealized(set, Family::Torus));
        };
        let e = EModule::new(&t, &set.to_string())?;
        if !e.e.is_trivial() {
            return Err(Error::Invariant(format!("{set}: torus type with E(T) of order {}", e.e.order())));
        }
        let mut rep = ClassificationReport::unrealized(set, Family::Torus);
        rep.realized = true;
        rep.components = Some((1, 0));
        rep.symmetric = Some(true);
        rep.real_curve = Some(RealCurve::Yes);
        rep.e_order = Some(1);
        rep.irregular = e.irregular.clone();
        Ok(rep)
    }

    /// Kernel families `Z/5`, `Z/7`, `(Z/3)^2`, `(Z/3)^3` with a candidate kernel, and whether
    /// some candidate extension embeds.
    pub fn classify_special_kernels(&self, set: &SingularitySet) -> Result<Vec<(Family, bool)>> {
        let d = Discriminant::of(set, true);
        let mut out = Vec::new();
        let order = d.form.order();
        for (n, fam) in [(5, Family::Special5), (7, Family::Special7)] {
            if order % (n as i128 * n as i128) != 0 {
                continue;
            }
            let ks = kernel_candidates(&d, n)?;
            if ks.is_empty() {
                continue;
            }
            let mut realized = false;
            for k in &ks {
                realized |= embeds_genus(&extension_genus(&d, k)?);
            }
            out.push((fam, realized));
        }
        let rank = match set.weight() {
            8 => Some((2, Family::Torus4)),
            9 => Some((3, Family::Torus12)),
            _ => None,
        };
        if let Some((rank, fam)) = rank {
            if let Some(k) = elementary_three_kernels(&d).into_iter().find(|k| k.invariants.len() == rank) {
                out.push((fam, embeds_genus(&extension_genus(&d, &k)?)));
            }
        }
        Ok(out)
    }

    fn special_report(&self, set: &SingularitySet, family: Family) -> Result<ClassificationReport> {
        let found = self.classify_special_kernels(set)?;
        let mut rep = ClassificationReport::unrealized(set, family);
        if found.iter().any(|&(f, r)| f == family && r) {
            rep.realized = true;
            rep.notes.push("component count not computed for this family".into());
        }
        Ok(rep)
    }

    pub fn classify_family(&self, set: &SingularitySet, family: Family) -> Result<ClassificationReport> {
        match family {
            Family::Ns => self.classify_nonspecial(set),
            Family::Torus => self.classify_torus(set),
            _ => self.special_report(set, family),
        }
    }

    /// One report per family.
    pub fn classify(&self, set: &SingularitySet) -> Result<Vec<ClassificationReport>> {
        let mut out = vec![self.classify_nonspecial(set)?, self.classify_torus(set)?];
        let found = self.classify_special_kernels(set)?;
        for fam in [Family::Torus4, Family::Torus12, Family::Special5, Family::Special7] {
            let mut rep = ClassificationReport::unrealized(set, fam);
            if found.iter().any(|&(f, r)| f == fam && r) {
                rep.realized = true;
                rep.notes.push("component count not computed for this family".into());
            }
            out.push(rep);
        }
        Ok(out)
    }

    /// Candidate sets of a family: every set could carry a trivial kernel, the others need weight
    /// or discriminant divisibility.
    fn candidates(family: Family, mu_max: u32) -> Vec<SingularitySet> {
        let mut sets = all_sets(mu_max);
        match family {
            Family::Ns => sets.insert(0, SingularitySet::empty()),
            Family::Torus => sets.retain(|s| (6..=7).contains(&s.weight())),
            Family::Torus4 => sets.retain(|s| s.weight() == 8),
            Family::Torus12 => sets.retain(|s| s.weight() == 9),
            Family::Special5 => sets.retain(|s| s.points().iter().filter(|r| matches!(r, RootType::A(n) if (n + 1) % 5 == 0)).count() >= 2),
            Family::Special7 => sets.retain(|s| s.points().iter().filter(|r| matches!(r, RootType::A(n) if (n + 1) % 7 == 0)).count() >= 2),
        }
        sets
    }

    /// Reports for all candidate sets with `mu <= mu_max`, in canonical order.
    pub fn enumerate(&self, family: Family, mu_max: u32) -> Vec<std::result::Result<ClassificationReport, Failure>> {
        Self::candidates(family, mu_max)
            .par_iter()
            .map(|s| self.classify_family(s, family).map_err(|error| Failure { set: s.clone(), error }))
            .collect()
    }

    /// Realized sets of a family, in canonical order.
    pub fn realized(&self, family: Family, mu_max: u32) -> std::result::Result<Vec<ClassificationReport>, Failure> {
        let mut out = Vec::new();
        for r in self.enumerate(family, mu_max) {
            let r = r?;
            if r.realized {
                out.push(r);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SingularitySet {
        SingularitySet::parse(s).unwrap()
    }

    fn atlas() -> Atlas {
        Atlas::builtin()
    }

    #[test]
    fn symmetric_perturbation_test_matches_listing() {
        let data = ReferenceData::builtin();
        for row in data.maximizing_ns.iter().filter(|r| r.r > 0).step_by(7) {
            let listed: std::collections::BTreeSet<_> = symmetric_perturbations(row).into_iter().collect();
            for s in perturbations(&row.marked.set) {
                assert_eq!(is_symmetric_perturbation(&s, row), listed.contains(&s), "{s} in {}", row.spec);
            }
        }
    }

    #[test]
    fn two_a9_has_two_real_components() {
        let a = NsAnalysis::new(&set("2A9")).unwrap().unwrap();
        assert!(a.dperp_image().iter().all(|&v| v == 0));
        let rep = atlas().classify_nonspecial(&set("2A9")).unwrap();
        assert_eq!(rep.components, Some((2, 0)));
        assert_eq!(rep.real_curve, Some(RealCurve::Yes));
    }

    #[test]
    fn a7_a6_a5_is_real_without_real_curves() {
        let rep = atlas().classify_nonspecial(&set("A7+A6+A5")).unwrap();
        assert_eq!(rep.components, Some((1, 0)));
        assert_eq!(rep.symmetric, Some(true));
        assert_eq!(rep.real_curve, Some(RealCurve::No));
    }

    #[test]
    fn conjugate_pair() {
        let rep = atlas().classify_nonspecial(&set("E6+A11+A1")).unwrap();
        assert_eq!(rep.components, Some((0, 1)));
        assert_eq!(rep.real_curve, Some(RealCurve::No));
    }

    #[test]
    fn small_sets() {
        let at = atlas();
        let rep = at.classify_nonspecial(&set("A1")).unwrap();
        assert!(rep.realized);
        assert_eq!(rep.components, Some((1, 0)));
        assert!(!at.classify_nonspecial(&set("19A1")).unwrap().realized);
        assert!(!at.classify_torus(&set("A1")).unwrap().realized);
        assert!(at.classify_special_kernels(&set("A1")).unwrap().is_empty());
    }

    #[test]
    fn torus_examples() {
        let at = atlas();
        let rep = at.classify_torus(&set("6A2")).unwrap();
        assert_eq!(rep.components, Some((1, 0)));
        let rep = at.classify_torus(&set("A17+A2")).unwrap();
        assert_eq!(rep.components, Some((1, 0)));
        let rep = at.classify_torus(&set("E6+A8+2A2+A1")).unwrap();
        assert_eq!(rep.components, Some((1, 1)));
    }

    #[test]
    fn monodromy_brackets() {
        let a = NsAnalysis::new(&set("3E6")).unwrap().unwrap();
        assert_eq!(a.monodromy().unwrap().render(a.set()), "[3E6]");
        let a = NsAnalysis::new(&set("3A4+3A2")).unwrap().unwrap();
        assert_eq!(a.monodromy().unwrap().render(a.set()), "[3A4]+[3A2]");
        let a = NsAnalysis::new(&set("A1")).unwrap().unwrap();
        assert!(a.monodromy().unwrap().is_full());
    }

    #[test]
    fn square_two_vectors() {
        for s in ["E7+A11", "D5+A7+A6", "2D8"] {
            assert!(square_two_test(&Discriminant::of(&set(s), true)).unwrap(), "{s}");
        }
        assert!(!square_two_test(&Discriminant::of(&set("2D7+2A2"), true)).unwrap());
    }

    #[test]
    fn families_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.tag()), Some(f));
        }
    }
}
