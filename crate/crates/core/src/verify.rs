//! Comparison of computed results against the shipped reference tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::classify::{square_two_test, Atlas, ClassificationReport, Family, NsAnalysis, RealCurve, MU_COMPUTED};
use crate::data::GenKind;
use crate::error::{Error, Result};
use crate::lattices::{Discriminant, RootType, SingularitySet, SymKind};

/// Tables that can be verified independently.
pub const TABLES: [&str; 6] = ["disconnected", "group", "nonreal", "exceptional", "special", "overrides"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub table: &'static str,
    /// Row spec, or `(missing)` for a computed row absent from the table.
    pub row: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn count(&self, table: &str) -> (usize, usize) {
        let rows: Vec<_> = self.checks.iter().filter(|c| c.table == table).collect();
        (rows.iter().filter(|c| c.ok).count(), rows.len())
    }

    fn push(&mut self, table: &'static str, row: impl ToString, expected: impl ToString, computed: impl ToString) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        self.checks.push(Check { table, row: row.to_string(), ok: expected == computed, expected, computed });
    }
}

fn fmt_rc(rc: Option<(u32, u32)>) -> String {
    match rc {
        Some((r, c)) => format!("({r},{c})"),
        None => "unrealized".into(),
    }
}

/// Realized non-special sets with `mu <= 18` and their analyses.
struct Computed {
    reports: BTreeMap<SingularitySet, ClassificationReport>,
    analyses: BTreeMap<SingularitySet, NsAnalysis>,
}

impl Computed {
    fn new(atlas: &Atlas) -> Result<Computed> {
        let reports: BTreeMap<_, _> = atlas
            .realized(Family::Ns, MU_COMPUTED)
            .map_err(|f| f.error)?
            .into_iter()
            .map(|r| (r.set.clone(), r))
            .collect();
        let mut analyses = BTreeMap::new();
        for s in reports.keys() {
            if let Some(a) = NsAnalysis::new(s)? {
                analyses.insert(s.clone(), a);
            }
        }
        Ok(Computed { reports, analyses })
    }

    fn report(&self, atlas: &Atlas, s: &SingularitySet) -> Result<ClassificationReport> {
        match self.reports.get(s) {
            Some(r) => Ok(r.clone()),
            None => atlas.classify_nonspecial(s),
        }
    }
}

fn disconnected(atlas: &Atlas, c: &Computed, out: &mut VerifyReport) -> Result<()> {
    let mut listed = BTreeSet::new();
    for row in &atlas.data.disconnected {
        listed.insert(row.set.clone());
        let rep = c.report(atlas, &row.set)?;
        out.push("disconnected", &row.set, fmt_rc(Some((row.r, row.c))), fmt_rc(rep.components));
    }
    for (s, r) in &c.reports {
        if r.components != Some((1, 0)) && !listed.contains(s) {
            out.push("disconnected", "(missing)", "-", format!("{s} {}", fmt_rc(r.components)));
        }
    }
    Ok(())
}

fn groups(atlas: &Atlas, c: &Computed, out: &mut VerifyReport) -> Result<()> {
    let mut listed = BTreeSet::new();
    for row in &atlas.data.groups {
        listed.insert(row.set.clone());
        let rep = c.report(atlas, &row.set)?;
        out.push("group", &row.entry, &row.entry, rep.monodromy.unwrap_or_else(|| "unrealized".into()));
    }
    for (s, r) in &c.reports {
        if r.monodromy.as_deref() != Some("full") && !listed.contains(s) {
            out.push("group", "(missing)", "-", r.monodromy.clone().unwrap_or_default());
        }
    }
    Ok(())
}

fn nonreal(atlas: &Atlas, c: &Computed, out: &mut VerifyReport) -> Result<()> {
    let mut listed = BTreeSet::new();
    for row in &atlas.data.nonreal {
        listed.insert(row.set.clone());
        let rep = c.report(atlas, &row.set)?;
        let computed = if row.test_prime.is_some() {
            match rep.symmetric {
                Some(false) => "asymmetric".to_string(),
                Some(true) => "symmetric".to_string(),
                None => "unrealized".to_string(),
            }
        } else {
            let sq2 = square_two_test(&Discriminant::of(&row.set, true))?;
            format!(
                "symmetric={} real-perturbation={} square2={}",
                rep.symmetric == Some(true),
                atlas.is_real_perturbation(&row.set),
                sq2
            )
        };
        let expected = if row.test_prime.is_some() {
            "asymmetric".to_string()
        } else {
            format!("symmetric=true real-perturbation=false square2={}", row.square2)
        };
        out.push("nonreal", &row.entry, expected, computed);
    }
    for (s, r) in &c.reports {
        let nonreal = r.symmetric == Some(false) || !atlas.is_real_perturbation(s);
        if nonreal && !listed.contains(s) {
            out.push("nonreal", "(missing)", "-", s);
        }
    }
    Ok(())
}

fn gen_kind(kind: &SymKind, set: &SingularitySet) -> (GenKind, RootType) {
    match *kind {
        SymKind::Internal(i) => (GenKind::Sym, set.points()[i]),
        SymKind::Transposition(r, _, _) => (GenKind::Swap, r),
    }
}

fn exceptional(atlas: &Atlas, c: &Computed, out: &mut VerifyReport) -> Result<()> {
    let mut listed = BTreeSet::new();
    for row in &atlas.data.exceptional {
        listed.insert(row.set.clone());
        let Some(a) = c.analyses.get(&row.set) else {
            out.push("exceptional", &row.set, "realized", "unrealized");
            continue;
        };
        let irr: Vec<String> = a.emodule.irregular.iter().map(u64::to_string).collect();
        let exp_irr: Vec<String> = row.irregular.iter().map(u64::to_string).collect();
        out.push("exceptional", format!("{} irregular", row.set), exp_irr.join(","), irr.join(","));
        out.push("exceptional", format!("{} |E|", row.set), row.order, a.emodule.e.order());
        let images = a.dperp_image();
        let mut verdict = Vec::new();
        let mut span = Vec::new();
        let mut present = 0;
        for (g, &v) in a.generators.iter().zip(&images) {
            if row.generators.contains(&gen_kind(&g.kind, a.set())) {
                present += 1;
                span.push(v);
                if v == 0 {
                    verdict.push(format!("{} trivial", g.label));
                }
            }
        }
        let computed = if row.generators.is_empty() {
            if images.iter().all(|&v| v == 0) { "image trivial".to_string() } else { "image nontrivial".to_string() }
        } else if present == 0 {
            "no listed generator present".to_string()
        } else if !verdict.is_empty() {
            verdict.join("; ")
        } else if !a.emodule.e.modulo(&span).is_trivial() {
            "listed generators do not span".to_string()
        } else {
            "listed generators span".to_string()
        };
        let expected = if row.generators.is_empty() { "image trivial" } else { "listed generators span" };
        out.push("exceptional", format!("{} generators", row.set), expected, computed);
    }
    let a4 = RootType::A(4);
    for (s, a) in &c.analyses {
        let local = a.emodule.e_is_local(5) && s.count(a4) > 0;
        if !a.emodule.e.is_trivial() && !local && !listed.contains(s) {
            out.push("exceptional", "(missing)", "-", s);
        }
    }
    Ok(())
}

fn special(atlas: &Atlas, out: &mut VerifyReport) -> Result<()> {
    let mut expected: BTreeMap<Family, BTreeSet<SingularitySet>> = BTreeMap::new();
    for row in &atlas.data.special {
        let fam = Family::ALL
            .into_iter()
            .find(|f| f.kernel() == row.kernel)
            .ok_or_else(|| Error::Data(format!("special.tsv: no family with kernel {:?}", row.kernel)))?;
        expected.entry(fam).or_default().insert(row.set.clone());
    }
    for (fam, sets) in expected {
        let computed: BTreeSet<SingularitySet> =
            atlas.realized(fam, 19).map_err(|f| f.error)?.into_iter().map(|r| r.set).collect();
        let show = |s: &BTreeSet<SingularitySet>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        out.push("special", fam.tag(), show(&sets), show(&computed));
    }
    Ok(())
}

fn overrides(atlas: &Atlas, c: &Computed, out: &mut VerifyReport) -> Result<()> {
    for row in &atlas.data.overrides {
        let rep = c.report(atlas, &row.set)?;
        let ok = match (row.key.as_str(), rep.symmetric) {
            ("real_curve", Some(true)) => !atlas.is_real_perturbation(&row.set) && matches!(row.value.as_str(), "yes" | "no"),
            _ => false,
        };
        out.push("overrides", format!("{} {}={}", row.set, row.key, row.value), "applicable", if ok { "applicable" } else { "not applicable" });
        if ok {
            let want = if row.value == "yes" { RealCurve::Yes } else { RealCurve::No };
            out.push("overrides", format!("{} real_curve", row.set), want, rep.real_curve.map(|r| r.to_string()).unwrap_or_default());
        }
    }
    Ok(())
}

/// Runs the selected tables (all when `tables` is empty).
pub fn verify(atlas: &Atlas, tables: &[&str]) -> Result<VerifyReport> {
    for t in tables {
        if !TABLES.contains(t) {
            return Err(Error::Data(format!("unknown table '{t}'")));
        }
    }
    let want = |t: &str| tables.is_empty() || tables.contains(&t);
    let mut out = VerifyReport::default();
    let needs_ns = TABLES.iter().any(|t| *t != "special" && want(t));
    let c = if needs_ns { Some(Computed::new(atlas)?) } else { None };
    if let Some(c) = &c {
        if want("disconnected") {
            disconnected(atlas, c, &mut out)?;
        }
        if want("group") {
            groups(atlas, c, &mut out)?;
        }
        if want("nonreal") {
            nonreal(atlas, c, &mut out)?;
        }
        if want("exceptional") {
            exceptional(atlas, c, &mut out)?;
        }
        if want("overrides") {
            overrides(atlas, c, &mut out)?;
        }
    }
    if want("special") {
        special(atlas, &mut out)?;
    }
    Ok(out)
}
