//! Miranda–Morrison invariants of an indefinite even genus: local sign-pair groups,
//! the groups `E` and `E+`, and the images of reflections in them.

use std::collections::BTreeSet;

use crate::arith::{chi, legendre, unit_part};
use crate::error::{Error, Result};
use crate::fqf::{BlockKind, FiniteQuadraticForm, FqfElement, JordanBlock};
use crate::nikulin::GenusDescriptor;

/// Element of `{±1} x {±1}` as two bits: bit 0 is the determinant, bit 1 the spinor sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPair(pub u8);

impl SignPair {
    pub const ONE: SignPair = SignPair(0);
    pub const MINUS_MINUS: SignPair = SignPair(3);

    pub fn new(det: i32, spin: i32) -> SignPair {
        SignPair(u8::from(det < 0) | (u8::from(spin < 0) << 1))
    }

    pub fn det(self) -> i32 {
        if self.0 & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn spin(self) -> i32 {
        if self.0 & 2 == 2 {
            -1
        } else {
            1
        }
    }

    pub fn mul(self, o: SignPair) -> SignPair {
        SignPair(self.0 ^ o.0)
    }

    pub fn all() -> [SignPair; 4] {
        [SignPair(0), SignPair(1), SignPair(2), SignPair(3)]
    }
}

/// Subgroup of `F_2^2` (or of `Gamma_0`) closed under xor, as a sorted element list.
fn span2(gens: &[u8]) -> Vec<u8> {
    let mut s: BTreeSet<u8> = BTreeSet::from([0]);
    loop {
        let cur: Vec<u8> = s.iter().copied().collect();
        let before = s.len();
        for a in &cur {
            for g in gens {
                s.insert(a ^ g);
            }
        }
        if s.len() == before {
            return s.into_iter().collect();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaInvariants {
    pub p: u64,
    pub e_p: u32,
    /// Image of the local group in `Gamma'_{p,0}`, bit 0 determinant, bit 1 `chi_p` of the spinor norm.
    pub sigma_sharp: Vec<u8>,
    /// Preimage in `Gamma_0` of `sigma_sharp`.
    pub sigma_tilde: Vec<SignPair>,
    pub gamma22_contained: bool,
    /// At `p = 2` with no unimodular constituent: the local group in `Gamma_{2,0}`, as
    /// determinant bit and spinor norm residue mod 8.
    pub sharp_mod8: Vec<(u8, i64)>,
}

impl SigmaInvariants {
    pub fn is_regular(&self) -> bool {
        self.e_p == 1
    }
}

/// Image of a rational sign pair in `Gamma'_{p,0}`.
pub fn phi(p: u64, g: SignPair) -> u8 {
    let spin = if g.spin() < 0 { chi(p, -1) } else { 1 };
    (g.0 & 1) | (u8::from(spin < 0) << 1)
}

fn value_set_mod8(kind: &BlockKind) -> BTreeSet<i64> {
    match *kind {
        BlockKind::Cyclic(c) => BTreeSet::from([0, c.rem_euclid(8), 4]),
        BlockKind::U => BTreeSet::from([0, 2, 4, 6]),
        BlockKind::V => {
            let mut s = BTreeSet::new();
            for x in 0..8 {
                for y in 0..8 {
                    s.insert((2 * (x * x + x * y + y * y)) % 8);
                }
            }
            s
        }
    }
}

/// A scale-2 block `<c/2>` only fixes `c` mod 4; choose the first one mod 8 so that the
/// unit parts of all constituents multiply to the unit part of the determinant.
fn fix_scale_two_unit(g: &GenusDescriptor, mut blocks: Vec<JordanBlock>) -> Vec<JordanBlock> {
    let Some(first) = blocks.iter().position(|b| b.k == 1 && matches!(b.kind, BlockKind::Cyclic(_))) else {
        return blocks;
    };
    let det_unit = (if g.sig_minus % 2 == 1 { -1 } else { 1 }) * unit_part(g.disc.order(), 2);
    let mut prod: i128 = 1;
    for (i, b) in blocks.iter().enumerate() {
        if i == first {
            continue;
        }
        prod *= match b.kind {
            BlockKind::Cyclic(c) => c as i128,
            BlockKind::U => -1,
            BlockKind::V => 3,
        };
    }
    // u * prod = det_unit mod 8 and odd squares are 1 mod 8
    let u = (det_unit * prod).rem_euclid(8) as i64;
    if let BlockKind::Cyclic(c) = blocks[first].kind {
        debug_assert_eq!(c.rem_euclid(4), u % 4);
    }
    blocks[first].kind = BlockKind::Cyclic(u);
    blocks
}

pub fn sigma_invariants(g: &GenusDescriptor, p: u64) -> Result<SigmaInvariants> {
    let rank = g.rank();
    if g.sig_plus == 0 || g.sig_minus == 0 || rank < 3 {
        return Err(Error::Unsupported { set: g.disc.render(), reason: "genus must be indefinite of rank at least 3".into() });
    }
    let blocks = g.disc.jordan(p);
    let len: usize = blocks.iter().map(|b| b.dim()).sum();
    let r0 = rank - len;
    let full = vec![0u8, 1, 2, 3];
    let mut sharp_mod8 = Vec::new();
    let (sharp, gamma22) = if p == 2 {
        if r0 > 0 {
            (full, true)
        } else {
            let blocks = fix_scale_two_unit(g, blocks);
            let mut sums: BTreeSet<i64> = BTreeSet::from([0]);
            let mut m0_odd = false;
            for b in &blocks {
                let w = match b.k {
                    1 => 1,
                    2 => 2,
                    3 => 4,
                    _ => continue,
                };
                if b.k == 1 && matches!(b.kind, BlockKind::Cyclic(_)) {
                    m0_odd = true;
                }
                let vals = value_set_mod8(&b.kind);
                sums = sums.iter().flat_map(|s| vals.iter().map(move |v| (s + w * v) % 8)).collect();
            }
            if !m0_odd {
                return Err(Error::Unsupported {
                    set: g.disc.render(),
                    reason: "2-adic constituent of scale 2 is even or absent".into(),
                });
            }
            // closure in {±1} x (Z_2^x / squares), elements (det bit, residue mod 8)
            let gens: Vec<(u8, i64)> = sums.iter().filter(|v| *v % 2 == 1).map(|&c| (1u8, c)).collect();
            let mut group: BTreeSet<(u8, i64)> = BTreeSet::from([(0, 1)]);
            loop {
                let cur: Vec<_> = group.iter().copied().collect();
                let before = group.len();
                for (d, c) in cur {
                    for &(d2, c2) in &gens {
                        group.insert((d ^ d2, (c * c2) % 8));
                    }
                }
                if group.len() == before {
                    break;
                }
            }
            let contains22 = group.contains(&(0, 5));
            sharp_mod8 = group.iter().copied().collect();
            let sharp: BTreeSet<u8> = group.iter().map(|&(d, c)| d | (u8::from(chi(2, c as i128) < 0) << 1)).collect();
            (sharp.into_iter().collect(), contains22)
        }
    } else if r0 >= 2 {
        (full, true)
    } else if r0 == 1 {
        let pp = p as i128;
        let rest = g.disc.order() / g.disc.primary_part(p).order();
        let mut l = legendre(-1, pp).pow(g.sig_minus as u32) * legendre(rest, pp) * legendre(2, pp);
        for b in &blocks {
            if let BlockKind::Cyclic(c) = b.kind {
                l *= legendre(c as i128, pp);
            }
        }
        (span2(&[1 | (u8::from(l < 0) << 1)]), true)
    } else {
        (vec![0], true)
    };
    let e_p = (4 / sharp.len()) as u32;
    let tilde = SignPair::all().into_iter().filter(|&s| sharp.contains(&phi(p, s))).collect();
    Ok(SigmaInvariants { p, e_p, sigma_sharp: sharp, sigma_tilde: tilde, gamma22_contained: gamma22, sharp_mod8 })
}

/// Quotient of `F_2^n` by a subspace, with canonical coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub dim: u32,
    /// Echelon basis of the subspace, each with a distinct leading bit.
    basis: Vec<u32>,
}

impl Quotient {
    pub fn new(dim: u32, gens: &[u32]) -> Quotient {
        let mut basis: Vec<u32> = Vec::new();
        for &g in gens {
            let mut v = g;
            for &b in &basis {
                let lead = 31 - b.leading_zeros();
                if v >> lead & 1 == 1 {
                    v ^= b;
                }
            }
            if v != 0 {
                let lead = 31 - v.leading_zeros();
                for b in basis.iter_mut() {
                    if *b >> lead & 1 == 1 {
                        *b ^= v;
                    }
                }
                basis.push(v);
                basis.sort_by(|a, b| b.cmp(a));
            }
        }
        Quotient { dim, basis }
    }

    pub fn order(&self) -> u64 {
        1u64 << (self.dim - self.basis.len() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Minimal representative of the coset of `v`.
    pub fn reduce(&self, mut v: u32) -> u32 {
        for &b in &self.basis {
            let lead = 31 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// All vectors of the subspace.
    pub fn span(&self) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in &self.basis {
            let n = out.len();
            for i in 0..n {
                out.push(out[i] ^ b);
            }
        }
        out
    }

    /// Image of the span of `vs` in the quotient, as a quotient by it.
    pub fn modulo(&self, vs: &[u32]) -> Quotient {
        let mut g = self.basis.clone();
        g.extend_from_slice(vs);
        Quotient::new(self.dim, &g)
    }
}

/// The groups `E(N)` and `E+(N)` of a genus together with the local data.
#[derive(Clone, Debug)]
pub struct EModule {
    pub genus: GenusDescriptor,
    pub local: Vec<SigmaInvariants>,
    /// Irregular primes; prime `i` occupies bits `2i` (determinant) and `2i+1` (spinor).
    pub irregular: Vec<u64>,
    pub e: Quotient,
    pub e_plus: Quotient,
}

impl EModule {
    pub fn new(g: &GenusDescriptor, name: &str) -> Result<EModule> {
        let mut primes = g.disc.primes();
        if !primes.contains(&2) {
            primes.insert(0, 2);
        }
        let mut local = Vec::new();
        for p in primes {
            let s = sigma_invariants(g, p).map_err(|e| match e {
                Error::Unsupported { reason, .. } => Error::Unsupported { set: name.to_string(), reason },
                other => other,
            })?;
            if p == 2 && !s.gamma22_contained {
                return Self::without_gamma22(g, name, s, local);
            }
            // for irregular p = 1 mod 4 the local group lies in the image of Gamma_0 or is <(-1,-1)>
            if !s.is_regular() && p % 4 == 1 && !(s.sigma_sharp.iter().all(|&x| x <= 1) || s.sigma_sharp == vec![0, 3]) {
                return Err(Error::Invariant(format!("{name}: irregular p = {p} with local group {:?}", s.sigma_sharp)));
            }
            local.push(s);
        }
        let irregular: Vec<u64> = local.iter().filter(|s| !s.is_regular()).map(|s| s.p).collect();
        if irregular.len() > 2 {
            return Err(Error::Unsupported { set: name.to_string(), reason: format!("{} irregular primes", irregular.len()) });
        }
        let dim = 2 * irregular.len() as u32;
        let mut rel: Vec<u32> = Vec::new();
        for (i, &p) in irregular.iter().enumerate() {
            let s = local.iter().find(|s| s.p == p).unwrap();
            rel.extend(s.sigma_sharp.iter().map(|&x| u32::from(x) << (2 * i)));
        }
        let embed = |g: SignPair| -> u32 {
            irregular.iter().enumerate().map(|(i, &p)| u32::from(phi(p, g)) << (2 * i)).fold(0, |a, b| a | b)
        };
        let mut rel_e = rel.clone();
        rel_e.extend(SignPair::all().into_iter().map(embed));
        let mut rel_plus = rel;
        rel_plus.push(embed(SignPair::MINUS_MINUS));
        Ok(EModule {
            genus: g.clone(),
            local,
            e: Quotient::new(dim, &rel_e),
            e_plus: Quotient::new(dim, &rel_plus),
            irregular,
        })
    }

    /// Mirror-vector analogue for the exchange of two `D_{4k}` points: it lifts to the exchange
    /// of two even rank-2 constituents of `N (x) Z_2`, with determinant 1 and spinor norm
    /// 3 mod 4, and to the identity at all other primes.
    pub fn d4k_swap_vector(&self) -> u32 {
        match self.irregular.iter().position(|&p| p == 2) {
            Some(i) => 0b10 << (2 * i),
            None => 0,
        }
    }

    /// The local group at 2 misses `Gamma_{2,2}`: compute in the full group `Gamma_{2,0}`,
    /// supported only when 2 is the sole irregular prime and both groups vanish.
    fn without_gamma22(g: &GenusDescriptor, name: &str, s2: SigmaInvariants, mut local: Vec<SigmaInvariants>) -> Result<EModule> {
        let unsupported = |reason: &str| Error::Unsupported { set: name.to_string(), reason: reason.to_string() };
        for p in g.disc.primes().into_iter().filter(|&p| p != 2) {
            let s = sigma_invariants(g, p)?;
            if !s.is_regular() {
                return Err(unsupported("local group at 2 misses Gamma_{2,2} and another prime is irregular"));
            }
            local.push(s);
        }
        // bit 0 determinant, bits 1 and 2 the residue mod 8 in {1, 3, 5, 7} = <3> x <5>
        let enc = |d: u8, c: i64| u32::from(d) | ((c as u32 >> 1) & 1) << 1 | ((c as u32 >> 2) & 1) << 2;
        let sharp: Vec<u32> = s2.sharp_mod8.iter().map(|&(d, c)| enc(d, c)).collect();
        let mut rel_e = sharp.clone();
        rel_e.extend([enc(1, 1), enc(0, 7)]);
        let mut rel_plus = sharp;
        rel_plus.push(enc(1, 7));
        if !Quotient::new(3, &rel_e).is_trivial() || !Quotient::new(3, &rel_plus).is_trivial() {
            return Err(unsupported("local group at 2 misses Gamma_{2,2} and E(N) is nontrivial"));
        }
        local.push(s2);
        Ok(EModule { genus: g.clone(), local, irregular: vec![], e: Quotient::new(0, &[]), e_plus: Quotient::new(0, &[]) })
    }

    pub fn local_at(&self, p: u64) -> Option<&SigmaInvariants> {
        self.local.iter().find(|s| s.p == p)
    }

    /// `prod e_p`.
    pub fn e_total(&self) -> u64 {
        self.local.iter().map(|s| u64::from(s.e_p)).product()
    }

    /// Intersection of the `sigma_tilde_p` over all primes.
    pub fn sigma_tilde(&self) -> Vec<SignPair> {
        SignPair::all().into_iter().filter(|g| self.local.iter().all(|s| s.sigma_tilde.contains(g))).collect()
    }

    /// Order formula `|E| = prod e_p / [Gamma_0 : sigma_tilde]`.
    pub fn order_formula(&self) -> u64 {
        self.e_total() * self.sigma_tilde().len() as u64 / 4
    }

    /// Whether `sigma_tilde` lies in the subgroup generated by `(-1,-1)`.
    pub fn sigma_tilde_in_minus_minus(&self) -> bool {
        self.sigma_tilde().iter().all(|g| *g == SignPair::ONE || *g == SignPair::MINUS_MINUS)
    }

    /// Order of the local group `E_p`: 2 when `p = 1 mod 4` and `e_p |sigma_tilde_p| = 8`.
    pub fn local_e_order(&self, p: u64) -> u64 {
        match self.local_at(p) {
            Some(s) if p % 4 == 1 && s.e_p as usize * s.sigma_tilde.len() == 8 => 2,
            _ => 1,
        }
    }

    /// Order of the local group `E+_p`.
    pub fn local_e_plus_order(&self, p: u64) -> u64 {
        if p % 4 == 1 {
            return self.local_e_order(p);
        }
        match self.local_at(p) {
            Some(s) => {
                let plus = s.sigma_tilde.iter().filter(|g| **g == SignPair::ONE || **g == SignPair::MINUS_MINUS).count();
                if s.e_p as usize * plus == 4 {
                    2
                } else {
                    1
                }
            }
            None => 1,
        }
    }

    /// `E` is the order-2 group `E_p`: one irregular prime, or two with `|E| = |E_p| = 2`.
    pub fn e_is_local(&self, p: u64) -> bool {
        self.irregular.contains(&p) && self.local_e_order(p) == 2 && (self.irregular.len() == 1 || self.e.order() == 2)
    }

    /// `E+` is the order-2 group `E+_p`.
    pub fn e_plus_is_local(&self, p: u64) -> bool {
        self.irregular.contains(&p)
            && self.local_e_plus_order(p) == 2
            && (self.irregular.len() == 1 || self.e_plus.order() == 2)
    }

    /// Sum of the mirror vectors of a product of reflections.
    pub fn raw_product(&self, disc: &FiniteQuadraticForm, mirrors: &[FqfElement]) -> Result<u32> {
        if self.irregular.is_empty() {
            return Ok(0);
        }
        let mut v = 0;
        for x in mirrors {
            v ^= self.mirror_vector(disc, x)?;
        }
        Ok(v)
    }

    /// Raw vector `(delta_p, |xi|_p)` over the irregular primes, for a mirror of `disc`.
    pub fn mirror_vector(&self, disc: &FiniteQuadraticForm, xi: &FqfElement) -> Result<u32> {
        let mut v = 0u32;
        for (i, &p) in self.irregular.iter().enumerate() {
            let (abs, delta) = disc.norms_of_mirror(xi, p)?;
            let abs = abs.ok_or(Error::UndefinedNorm)?;
            v |= (u32::from(delta < 0) | (u32::from(abs < 0) << 1)) << (2 * i);
        }
        Ok(v)
    }

    /// Images in `E` and `E+` of a product of reflections.
    pub fn eval_product(&self, disc: &FiniteQuadraticForm, mirrors: &[FqfElement]) -> Result<(u32, u32)> {
        let v = self.raw_product(disc, mirrors)?;
        Ok((self.e.reduce(v), self.e_plus.reduce(v)))
    }

    /// `det+` of the isometry lifting a reflection, when well defined.
    pub fn det_plus_of_mirror(&self, disc: &FiniteQuadraticForm, p: u64, xi: &FqfElement) -> Result<i32> {
        let s = self.local_at(p).ok_or_else(|| Error::Invariant(format!("no local data at {p}")))?;
        let in_mm = s.sigma_tilde.iter().all(|g| *g == SignPair::ONE || *g == SignPair::MINUS_MINUS);
        if !in_mm {
            return Err(Error::Unsupported { set: disc.render(), reason: format!("sigma_tilde at {p} not in <(-1,-1)>") });
        }
        let (abs, delta) = disc.norms_of_mirror(xi, p)?;
        Ok(delta * abs.ok_or(Error::UndefinedNorm)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{Discriminant, SingularitySet};
    use crate::nikulin::{transcendental_genus, ExtensionKernel};

    fn module(s: &str) -> (Discriminant, EModule) {
        let d = Discriminant::of(&SingularitySet::parse(s).unwrap(), true);
        let t = transcendental_genus(&d, &ExtensionKernel::trivial()).unwrap();
        let e = EModule::new(&t, s).unwrap();
        (d, e)
    }

    #[test]
    fn two_a9_has_order_two() {
        let (_, e) = module("2A9");
        assert_eq!(e.irregular, vec![5]);
        assert_eq!(e.e.order(), 2);
        assert_eq!(e.order_formula(), 2);
    }

    #[test]
    fn regular_genus_is_trivial() {
        let (_, e) = module("A1");
        assert!(e.irregular.is_empty());
        assert_eq!(e.e.order(), 1);
        assert_eq!(e.e_plus.order(), 1);
    }

    #[test]
    fn quotient_reduction() {
        let q = Quotient::new(4, &[0b0011, 0b0100]);
        assert_eq!(q.order(), 4);
        assert_eq!(q.reduce(0b0011), 0);
        assert_eq!(q.reduce(0b0001), q.reduce(0b0010));
        assert_eq!(q.reduce(0b0101), q.reduce(0b0001));
    }
}
