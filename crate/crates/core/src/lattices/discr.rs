use std::ops::Range;

use super::set::{RootType, SingularitySet};
use crate::error::{Error, Result};
use crate::fqf::{q, FiniteQuadraticForm, FqfAutomorphism, FqfElement, Q};

/// Glue generators of `discr R` with orders and q-matrix (negative definite sign).
pub fn component_form(r: RootType) -> (Vec<i64>, Vec<Vec<Q>>) {
    match r {
        RootType::A(n) => {
            let n = n as i64;
            (vec![n + 1], vec![vec![q(-n, n + 1)]])
        }
        RootType::D(n) if n % 2 == 1 => (vec![4], vec![vec![q(-(n as i64), 4)]]),
        RootType::D(n) => {
            let n = n as i64;
            let s = q(-n, 4);
            let b = q(n - 2, 4);
            (vec![2, 2], vec![vec![s, b], vec![b, s]])
        }
        RootType::E(6) => (vec![3], vec![vec![q(-4, 3)]]),
        RootType::E(7) => (vec![2], vec![vec![q(-3, 2)]]),
        RootType::E(_) => (vec![], vec![]),
    }
}

/// Minimal `|v^2|` over the dual coset with glue coordinates `c`.
pub fn coset_min_norm(r: RootType, c: &[i64]) -> Q {
    match r {
        RootType::A(n) => {
            let n = n as i64;
            let k = c[0].rem_euclid(n + 1);
            q(k * (n + 1 - k), n + 1)
        }
        RootType::D(n) if n % 2 == 1 => match c[0].rem_euclid(4) {
            0 => q(0, 1),
            2 => q(1, 1),
            _ => q(n as i64, 4),
        },
        RootType::D(n) => match (c[0].rem_euclid(2), c[1].rem_euclid(2)) {
            (0, 0) => q(0, 1),
            (1, 1) => q(1, 1),
            _ => q(n as i64, 4),
        },
        RootType::E(6) => {
            if c[0].rem_euclid(3) == 0 {
                q(0, 1)
            } else {
                q(4, 3)
            }
        }
        RootType::E(7) => {
            if c[0].rem_euclid(2) == 0 {
                q(0, 1)
            } else {
                q(3, 2)
            }
        }
        RootType::E(_) => q(0, 1),
    }
}

/// Discriminant form of `S` (or `S_h`) on the glue generators of its points.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub set: SingularitySet,
    pub form: FiniteQuadraticForm,
    /// Generator range of each point, in the order of `set.points()`.
    pub comps: Vec<Range<usize>>,
    /// Index of the generator of `<1/2>` coming from `h`.
    pub h: Option<usize>,
}

impl Discriminant {
    pub fn of(set: &SingularitySet, with_h: bool) -> Discriminant {
        let mut labels = Vec::new();
        let mut orders = Vec::new();
        let mut blocks: Vec<Vec<Vec<Q>>> = Vec::new();
        let mut comps = Vec::new();
        for (i, &r) in set.points().iter().enumerate() {
            let (o, m) = component_form(r);
            let start = orders.len();
            for j in 0..o.len() {
                labels.push(format!("{r}#{i}.{j}"));
            }
            orders.extend(o);
            blocks.push(m);
            comps.push(start..orders.len());
        }
        let mut h = None;
        if with_h {
            h = Some(orders.len());
            labels.push("h".into());
            orders.push(2);
            blocks.push(vec![vec![q(1, 2)]]);
        }
        let n = orders.len();
        let mut qmat = vec![vec![q(0, 1); n]; n];
        let mut off = 0;
        for b in &blocks {
            for i in 0..b.len() {
                for j in 0..b.len() {
                    qmat[off + i][off + j] = b[i][j];
                }
            }
            off += b.len();
        }
        let form = FiniteQuadraticForm::new(labels, orders, qmat).expect("root discriminants are nondegenerate");
        Discriminant { set: set.clone(), form, comps, h }
    }

    /// Sum of per-point coset minima; the `h` coordinate is ignored.
    pub fn min_norm(&self, x: &FqfElement) -> Q {
        self.set
            .points()
            .iter()
            .zip(&self.comps)
            .map(|(&r, rg)| coset_min_norm(r, &x.coords[rg.clone()]))
            .sum()
    }

    pub fn sym_prime_generators(&self) -> Result<Vec<SymGenerator>> {
        let mut out = Vec::new();
        let pts = self.set.points();
        for (i, &r) in pts.iter().enumerate() {
            let rg = self.comps[i].clone();
            match r {
                RootType::A(n) if n >= 2 => out.push(self.negation_generator(i, format!("-id[{r}#{i}]"))?),
                RootType::D(n) if n % 2 == 1 => out.push(self.negation_generator(i, format!("-id[{r}#{i}]"))?),
                RootType::E(6) => out.push(self.negation_generator(i, format!("-id[{r}#{i}]"))?),
                RootType::D(n) => {
                    let (s, c) = (rg.start, rg.start + 1);
                    let v = self.unit(&[(s, 1), (c, 1)]);
                    let swap = self.form.reflection(&v)?;
                    out.push(self.checked(format!("swap[{r}#{i}]"), SymKind::Internal(i), swap, Some(vec![v]))?);
                    if n == 4 {
                        let sv = self.unit(&[(s, 1)]);
                        let a = self.form.reflection(&sv)?;
                        out.push(self.checked(format!("triality[{r}#{i}]"), SymKind::Internal(i), a, Some(vec![sv]))?);
                    }
                }
                _ => {}
            }
        }
        for i in 1..pts.len() {
            let r = pts[i];
            if pts[i - 1] != r || matches!(r, RootType::E(8)) {
                continue;
            }
            out.push(self.transposition(i - 1, i)?);
        }
        Ok(out)
    }

    fn unit(&self, entries: &[(usize, i64)]) -> FqfElement {
        let mut c = vec![0; self.form.rank()];
        for &(i, v) in entries {
            c[i] += v;
        }
        self.form.element(&c)
    }

    /// p-primary parts of `x`, one element per prime dividing its order.
    fn primary_pieces(&self, x: &FqfElement) -> Vec<FqfElement> {
        let ord = self.form.element_order(x);
        crate::arith::prime_factors(ord as u64)
            .into_iter()
            .map(|p| {
                let mut pa = 1;
                while ord % (pa * p as i64) == 0 {
                    pa *= p as i64;
                }
                let m = ord / pa;
                // m * u = 1 mod pa projects onto the p-part
                let u = crate::arith::mod_inverse(m as i128, pa as i128).unwrap() as i64;
                self.form.scale(x, m * u)
            })
            .collect()
    }

    fn negation_generator(&self, i: usize, label: String) -> Result<SymGenerator> {
        let rg = self.comps[i].clone();
        let n = self.form.rank();
        let mut m = vec![vec![0i64; n]; n];
        for (j, row) in m.iter_mut().enumerate() {
            row[j] = if rg.contains(&j) { -1 } else { 1 };
        }
        let auto = self.normalize(FqfAutomorphism { matrix: m });
        let g = self.unit(&[(rg.start, 1)]);
        let mirrors = Some(self.primary_pieces(&g).into_iter().filter(|x| self.form.element_order(x) > 2).collect());
        self.checked(label, SymKind::Internal(i), auto, mirrors)
    }

    fn transposition(&self, i: usize, j: usize) -> Result<SymGenerator> {
        let (a, b) = (self.comps[i].clone(), self.comps[j].clone());
        let n = self.form.rank();
        let mut m = vec![vec![0i64; n]; n];
        for k in 0..n {
            let img = if a.contains(&k) {
                b.start + (k - a.start)
            } else if b.contains(&k) {
                a.start + (k - b.start)
            } else {
                k
            };
            m[img][k] = 1;
        }
        let auto = FqfAutomorphism { matrix: m };
        let r = self.set.points()[i];
        let label = format!("({r}#{i} {r}#{j})");
        let kind = SymKind::Transposition(r, i, j);
        let mirrors = match r {
            RootType::D(n) if n % 2 == 0 && n % 4 == 2 => {
                Some(vec![self.unit(&[(a.start, 1), (b.start, -1)]), self.unit(&[(a.start + 1, 1), (b.start + 1, -1)])])
            }
            // not a product of reflections; see `EModule::d4k_swap_vector`
            RootType::D(_) => None,
            _ => {
                let d = self.unit(&[(a.start, 1), (b.start, -1)]);
                Some(self.primary_pieces(&d))
            }
        };
        self.checked(label, kind, auto, mirrors)
    }

    fn normalize(&self, a: FqfAutomorphism) -> FqfAutomorphism {
        let n = self.form.rank();
        let mut m = a.matrix;
        for (i, row) in m.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x = x.rem_euclid(self.form.orders()[i]);
            }
        }
        debug_assert_eq!(m.len(), n);
        FqfAutomorphism { matrix: m }
    }

    /// Product of reflections in `mirrors`, applied right to left as listed.
    pub fn product_of_reflections(&self, mirrors: &[FqfElement]) -> Result<FqfAutomorphism> {
        let mut acc = self.form.identity();
        for x in mirrors.iter().rev() {
            let r = self.form.reflection(x)?;
            acc = self.form.compose(&r, &acc);
        }
        Ok(self.normalize(acc))
    }

    fn checked(&self, label: String, kind: SymKind, auto: FqfAutomorphism, mirrors: Option<Vec<FqfElement>>) -> Result<SymGenerator> {
        let auto = self.normalize(auto);
        if !self.form.is_automorphism(&auto) {
            return Err(Error::Invariant(format!("{label} does not preserve q on {}", self.set)));
        }
        if let Some(m) = &mirrors {
            if self.product_of_reflections(m)? != auto {
                return Err(Error::Invariant(format!("mirror factorization of {label} on {} is wrong", self.set)));
            }
        }
        Ok(SymGenerator { label, kind, auto, mirrors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymKind {
    /// Dynkin symmetry of a single point.
    Internal(usize),
    /// Exchange of two isomorphic points.
    Transposition(RootType, usize, usize),
}

#[derive(Clone, Debug)]
pub struct SymGenerator {
    pub label: String,
    pub kind: SymKind,
    pub auto: FqfAutomorphism,
    /// Mirrors whose reflections multiply to `auto`; `None` for the exchange of two `D_{4k}`
    /// points, which is not a product of reflections.
    pub mirrors: Option<Vec<FqfElement>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SingularitySet {
        SingularitySet::parse(s).unwrap()
    }

    #[test]
    fn closed_forms_match_grams() {
        for r in [RootType::A(1), RootType::A(5), RootType::A(9), RootType::D(4), RootType::D(5), RootType::D(6), RootType::D(8), RootType::D(10), RootType::E(6), RootType::E(7)] {
            let s = SingularitySet::new(vec![r]);
            let d = Discriminant::of(&s, false);
            let g = super::super::gram::gram_of(&s).discriminant_form().unwrap();
            assert_eq!(d.form.render(), g.render(), "{r}");
        }
    }

    #[test]
    fn generators_for_2a9() {
        let d = Discriminant::of(&set("2A9"), true);
        let g = d.sym_prime_generators().unwrap();
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn generators_for_e8_and_a4() {
        assert!(Discriminant::of(&set("E8"), true).sym_prime_generators().unwrap().is_empty());
        let g = Discriminant::of(&set("A4"), true).sym_prime_generators().unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].mirrors.as_ref().unwrap().len(), 1);
    }

    #[test]
    fn d_even_pairs_factor() {
        for s in ["2D4", "2D6", "2D8", "D4", "2E7", "2A1+2A7"] {
            let d = Discriminant::of(&set(s), true);
            let gens = d.sym_prime_generators().unwrap();
            for g in gens {
                assert!(d.form.is_automorphism(&g.auto));
            }
        }
    }

    #[test]
    fn min_norms() {
        assert_eq!(coset_min_norm(RootType::A(2), &[1]), q(2, 3));
        assert_eq!(coset_min_norm(RootType::A(1), &[1]), q(1, 2));
        assert_eq!(coset_min_norm(RootType::D(8), &[0, 0]), q(0, 1));
    }
}
