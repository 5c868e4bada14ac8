//! End-to-end acceptance checks, one PASS/FAIL line per criterion. All comparisons are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use sextic::classify::{Atlas, ClassificationReport, Family, NsAnalysis, RealCurve, MU_COMPUTED};
use sextic::degen::{asymmetric_strata, maximizing_closure, perturbations, ClusterGraph};
use sextic::fqf::{q, FiniteQuadraticForm, FqfAutomorphism, FqfElement};
use sextic::lattices::{all_sets, gram_of_h, Discriminant, RootType, SingularitySet, SymKind};
use sextic::mm::EModule;
use sextic::nikulin::torus_admissible;
use sextic::verify::verify;

type Outcome = Result<(), String>;

fn set(s: &str) -> SingularitySet {
    SingularitySet::parse(s).unwrap()
}

fn sets(specs: &[&str]) -> BTreeSet<SingularitySet> {
    specs.iter().map(|s| set(s)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(s: &BTreeSet<SingularitySet>) -> String {
    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

struct Ctx {
    atlas: Atlas,
    ns: Vec<ClassificationReport>,
    torus: Vec<ClassificationReport>,
}

impl Ctx {
    fn realized(&self, family: Family, mu_max: u32) -> Result<BTreeSet<SingularitySet>, String> {
        let r = self.atlas.realized(family, mu_max).map_err(|f| format!("{}: {}", f.set, f.error))?;
        Ok(r.into_iter().map(|r| r.set).collect())
    }

    fn analysis(&self, s: &SingularitySet) -> Result<NsAnalysis, String> {
        NsAnalysis::new(s).map_err(|e| e.to_string())?.ok_or_else(|| format!("{s} is not realized"))
    }
}

fn enumeration_tallies(c: &Ctx) -> Outcome {
    ensure(c.ns.len() == 2996, || format!("ns count {} != 2996", c.ns.len()))?;
    ensure(c.torus.len() == 105, || format!("torus count {} != 105", c.torus.len()))?;
    let five = c.realized(Family::Special5, 19)?;
    let want5 = sets(&["2A9", "A9+2A4+A2", "A9+2A4+A1", "A9+2A4", "4A4+A2", "4A4+2A1", "4A4+A1", "4A4"]);
    ensure(five == want5, || format!("Z/5 sets: {}", show(&five)))?;
    let seven = c.realized(Family::Special7, 19)?;
    ensure(seven == sets(&["3A6+A1", "3A6"]), || format!("Z/7 sets: {}", show(&seven)))?;
    let four = c.realized(Family::Torus4, 19)?;
    let want4 = sets(&["E6+A5+4A2", "E6+6A2", "2A5+4A2", "A5+6A2+A1", "A5+6A2", "8A2+A1", "8A2"]);
    ensure(four == want4, || format!("weight 8 sets: {}", show(&four)))?;
    let twelve = c.realized(Family::Torus12, 19)?;
    ensure(twelve == sets(&["9A2"]), || format!("weight 9 sets: {}", show(&twelve)))
}

fn closure_identity(c: &Ctx) -> Outcome {
    let maximizing = &c.atlas.data.maximizing_ns;
    ensure(maximizing.len() == 110, || format!("{} maximizing rows", maximizing.len()))?;
    let mut closure: BTreeSet<SingularitySet> = sets(&["2D8", "D9+D8", "2D9", "2D4+4A2", "D7+D4+3A2", "2D7+2A2"]);
    closure.insert(SingularitySet::empty());
    for row in maximizing {
        closure.extend(perturbations(&row.marked.set).into_iter().filter(|s| s.mu() <= MU_COMPUTED));
    }
    let computed: BTreeSet<SingularitySet> = c.ns.iter().map(|r| r.set.clone()).collect();
    let extra: BTreeSet<_> = computed.difference(&closure).cloned().collect();
    let missing: BTreeSet<_> = closure.difference(&computed).cloned().collect();
    ensure(extra.is_empty() && missing.is_empty(), || {
        format!("computed-only: {}; closure-only: {}", show(&extra), show(&missing))
    })
}

fn disconnected_table(c: &Ctx) -> Outcome {
    let rows = &c.atlas.data.disconnected;
    ensure(rows.len() == 14, || format!("{} rows", rows.len()))?;
    for row in rows {
        let rep = c.atlas.classify_nonspecial(&row.set).map_err(|e| e.to_string())?;
        ensure(rep.components == Some((row.r, row.c)), || format!("{}: {:?} != ({},{})", row.set, rep.components, row.r, row.c))?;
    }
    let two_a9 = c.atlas.classify_nonspecial(&set("2A9")).map_err(|e| e.to_string())?;
    ensure(two_a9.components == Some((2, 0)), || format!("2A9: {:?}", two_a9.components))?;
    let a765 = c.atlas.classify_nonspecial(&set("A7+A6+A5")).map_err(|e| e.to_string())?;
    ensure(a765.components == Some((1, 0)) && a765.real_curve == Some(RealCurve::No), || {
        format!("A7+A6+A5: {:?}, real curve {:?}", a765.components, a765.real_curve)
    })
}

fn exceptional_groups(c: &Ctx) -> Outcome {
    let report = verify(&c.atlas, &["exceptional"]).map_err(|e| e.to_string())?;
    let rows = c.atlas.data.exceptional.len();
    ensure(rows == 9, || format!("{rows} exceptional rows"))?;
    if let Some(f) = report.failures().next() {
        return Err(format!("{}: expected {}, computed {}", f.row, f.expected, f.computed));
    }
    let a = c.analysis(&set("2A9"))?;
    ensure(a.emodule.e.order() == 2 && a.emodule.irregular == [5], || "2A9: E(T) is not Z/2 at 5".into())?;
    ensure(!a.raw.is_empty() && a.dperp_image().iter().all(|&v| v == 0), || "2A9: image of d-perp is nonzero".into())
}

/// First element of `t` with the given order and square.
fn element_with(t: &FiniteQuadraticForm, order: i64, square: sextic::fqf::Q) -> Result<FqfElement, String> {
    t.elements()
        .into_iter()
        .find(|x| t.element_order(x) == order && t.qv(x) == square)
        .ok_or_else(|| format!("no element of order {order} and square {square}"))
}

fn det_plus_spot_checks(c: &Ctx) -> Outcome {
    let a = c.analysis(&set("A7+A6+A5"))?;
    let t = a.t_form();
    let alphas = [element_with(t, 8, q(7, 8))?, element_with(t, 7, q(6, 7))?, element_with(t, 3, q(4, 3))?];
    let got: Vec<i32> =
        alphas.iter().map(|x| a.emodule.det_plus_of_mirror(t, 2, x)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(got == [1, -1, -1], || format!("A7+A6+A5 at 2: {got:?}"))?;
    for s in ["3A6", "2A6+D6", "2A6+D5+A1", "2A6+2A3"] {
        let a = c.analysis(&set(s))?;
        let t = a.t_form();
        for square in [q(6, 7), q(12, 7)] {
            for x in t.elements().iter().filter(|x| t.element_order(x) == 7 && t.qv(x) == square) {
                let v = a.emodule.det_plus_of_mirror(t, 7, x).map_err(|e| e.to_string())?;
                ensure(v == 1, || format!("{s}: det+ of a mirror of square {square} at 7 is {v}"))?;
            }
        }
        for g in &a.generators {
            let Some(ms) = &g.mirrors else { continue };
            let v: i32 = ms.iter().map(|x| a.emodule.det_plus_of_mirror(t, 7, x)).product::<Result<i32, _>>().map_err(|e| e.to_string())?;
            ensure(v == 1, || format!("{s}: det+ of {} at 7 is {v}", g.label))?;
        }
        ensure(!a.is_symmetric().map_err(|e| e.to_string())?, || format!("{s} is symmetric"))?;
    }
    Ok(())
}

fn symmetry_hits(c: &Ctx, p: u64, r: RootType) -> Result<usize, String> {
    let mut n = 0;
    for rep in c.ns.iter().filter(|rep| rep.set.count(r) > 0) {
        let a = c.analysis(&rep.set)?;
        if !a.emodule.e_plus_is_local(p) {
            continue;
        }
        n += 1;
        let hit = a.generators.iter().zip(&a.raw).any(|(g, &v)| {
            matches!(g.kind, SymKind::Internal(i) if a.set().points()[i] == r) && a.emodule.e_plus.reduce(v) != 0
        });
        ensure(hit, || format!("{}: symmetry of {r} is trivial in E+", rep.set))?;
    }
    Ok(n)
}

fn monodromy(c: &Ctx) -> Outcome {
    let rows = c.atlas.data.groups.len();
    ensure(rows == 13, || format!("{rows} group rows"))?;
    let report = verify(&c.atlas, &["group"]).map_err(|e| e.to_string())?;
    if let Some(f) = report.failures().next() {
        return Err(format!("{}: expected {}, computed {}", f.row, f.expected, f.computed));
    }
    let three = symmetry_hits(c, 3, RootType::A(2))?;
    let five = symmetry_hits(c, 5, RootType::A(4))?;
    ensure(three == 171 && five == 28, || format!("hypothesis counts {three} (p=3) and {five} (p=5)"))
}

fn overlap(c: &Ctx) -> Outcome {
    let ns: BTreeSet<_> = c.ns.iter().map(|r| &r.set).collect();
    let both: Vec<_> = c.torus.iter().map(|r| &r.set).filter(|s| ns.contains(s)).collect();
    ensure(both.len() == 51, || format!("{} sets in both families", both.len()))?;
    ensure(both.iter().all(|s| s.weight() == 6), || "overlap contains a set of weight 7".into())
}

fn cluster_graphs(c: &Ctx) -> Outcome {
    let asym = asymmetric_strata(&c.ns, &c.atlas.data);
    let c2 = ClusterGraph::build(2, &c.atlas.data, &asym);
    ensure(c2.is_connected() && c2.betti1() == 0, || format!("C2: {} components, cycle rank {}", c2.components(), c2.betti1()))?;
    let c3 = ClusterGraph::build(3, &c.atlas.data, &asym);
    let min: Vec<_> = c3.minimal().into_iter().map(|i| c3.vertices[i].set.clone()).collect();
    ensure(min == [set("E6+2A5+A1")], || format!("C3 minimal vertices: {min:?}"))?;
    let c7 = ClusterGraph::build(7, &c.atlas.data, &asym);
    ensure(c7.betti1() == 3, || format!("C7 cycle rank {}", c7.betti1()))?;
    let targets: BTreeSet<_> = maximizing_closure(&set("2A9"), &c.atlas.data.maximizing_ns).into_iter().collect();
    ensure(targets == sets(&["A19", "A10+A9"]), || format!("2A9 targets: {}", show(&targets)))
}

/// Mirrors of `t` with a defined image in the local groups.
fn usable_mirrors(t: &FiniteQuadraticForm, e: &EModule) -> Vec<FqfElement> {
    t.elements()
        .into_iter()
        .filter(|x| matches!(t.is_mirror(x), Ok(Some(_))) && e.mirror_vector(t, x).is_ok())
        .collect()
}

fn properties(c: &Ctx) -> Outcome {
    for s in all_sets(12) {
        let mu = s.mu() as i64;
        let b = gram_of_h(&s).discriminant_form().map_err(|e| e.to_string())?.brown();
        ensure(b == (1 - mu).rem_euclid(8), || format!("{s}: Brown invariant {b} of S_h"))?;
    }
    for rep in &c.ns {
        let a = c.analysis(&rep.set)?;
        let g = &a.tgenus;
        ensure(g.is_consistent(), || format!("{}: transcendental genus violates van der Blij", rep.set))?;
        ensure(a.emodule.order_formula() == a.emodule.e.order(), || {
            format!("{}: |E| {} vs formula {}", rep.set, a.emodule.e.order(), a.emodule.order_formula())
        })?;
    }
    for s in ["2A9", "A7+A6+A5", "E6+2A4+2A2", "2A6+2A2+2A1", "E6+A7+A5", "3A6"] {
        let a = c.analysis(&set(s))?;
        let t = a.t_form();
        let id = t.identity();
        let ms = usable_mirrors(t, &a.emodule);
        let mut seen: BTreeMap<Vec<Vec<i64>>, (u32, u32)> = BTreeMap::new();
        let mut record = |auto: FqfAutomorphism, mirrors: &[FqfElement]| -> Outcome {
            let v = a.emodule.eval_product(t, mirrors).map_err(|e| e.to_string())?;
            let old = *seen.entry(auto.matrix).or_insert(v);
            ensure(old == v, || format!("{s}: two factorizations give {old:?} and {v:?}"))
        };
        let refl: Vec<FqfAutomorphism> = ms.iter().map(|x| t.reflection(x)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for (x, r) in ms.iter().zip(&refl) {
            ensure(t.is_automorphism(r) && t.compose(r, r) == id, || format!("{s}: reflection in a mirror is not an involution"))?;
            record(r.clone(), std::slice::from_ref(x))?;
        }
        let k = ms.len().min(40);
        for i in 0..k {
            for j in 0..k {
                record(t.compose(&refl[i], &refl[j]), &[ms[i].clone(), ms[j].clone()])?;
            }
        }
    }
    for rep in &c.torus {
        let (_, _, t) = Atlas::torus_genus(&rep.set).map_err(|e| e.to_string())?.ok_or("torus genus vanished")?;
        let e = EModule::new(&t, &rep.set.to_string()).map_err(|e| e.to_string())?;
        ensure(e.e.is_trivial(), || format!("{}: torus E(T) of order {}", rep.set, e.e.order()))?;
    }
    for s in all_sets(19).into_iter().filter(|s| (6..=7).contains(&s.weight())) {
        torus_admissible(&Discriminant::of(&s, true)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let atlas = Atlas::builtin();
    let load = |f: Family| atlas.realized(f, MU_COMPUTED).map_err(|f| format!("{}: {}", f.set, f.error));
    let (ns, torus) = match (load(Family::Ns), load(Family::Torus)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            println!("FAIL enumeration: {e}");
            return ExitCode::FAILURE;
        }
    };
    let ctx = Ctx { atlas, ns, torus };
    let criteria: [(&str, fn(&Ctx) -> Outcome); 9] = [
        ("enumeration tallies", enumeration_tallies),
        ("closure identity", closure_identity),
        ("disconnected strata", disconnected_table),
        ("exceptional E-groups", exceptional_groups),
        ("det+ spot checks", det_plus_spot_checks),
        ("monodromy", monodromy),
        ("ns/torus overlap", overlap),
        ("cluster graphs", cluster_graphs),
        ("property sweeps", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check(&ctx) {
            Ok(()) => println!("PASS {} {name} ({:.1?})", i + 1, t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
