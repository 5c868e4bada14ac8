//! Nondegenerate finite quadratic forms: groups with a `Q/2Z`-valued quadratic
//! form whose polarization is `Q/Z`-valued.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{legendre, mod_inverse, prime_factors};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Reduce into `[0, 2)`.
pub fn mod2(x: Q) -> Q {
    let two = Q::from_integer(2);
    let r = x - two * (x / two).floor();
    r
}

/// Reduce into `[0, 1)`.
pub fn mod1(x: Q) -> Q {
    x - x.floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqfElement {
    pub coords: Vec<i64>,
}

/// Automorphism given by the images of the generators (column `j` is the image of generator `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqfAutomorphism {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `<c/p^k>`, with `c` the numerator in `[0, 2p^k)`.
    Cyclic(i64),
    U,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBlock {
    pub p: u64,
    pub k: u32,
    pub kind: BlockKind,
}

impl JordanBlock {
    pub fn dim(&self) -> usize {
        match self.kind {
            BlockKind::Cyclic(_) => 1,
            _ => 2,
        }
    }

    /// Order of the block as a group.
    pub fn order(&self) -> i128 {
        (self.p as i128).pow(self.k * self.dim() as u32)
    }
}

/// Data of a mirror: `p^k xi = 0` and `xi^2 = 2m/p^k mod 2`, `p` not dividing `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mirror {
    pub p: u64,
    pub k: u32,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    labels: Vec<String>,
    orders: Vec<i64>,
    qmat: Vec<Vec<Q>>,
}

impl FiniteQuadraticForm {
    pub fn new(labels: Vec<String>, orders: Vec<i64>, qmat: Vec<Vec<Q>>) -> Result<Self> {
        let n = orders.len();
        if labels.len() != n || qmat.len() != n || qmat.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidForm("dimension mismatch".into()));
        }
        let mut m = qmat;
        for i in 0..n {
            if orders[i] < 1 {
                return Err(Error::InvalidForm("nonpositive order".into()));
            }
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidForm("asymmetric matrix".into()));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                m[i][j] = if i == j { mod2(m[i][j]) } else { mod1(m[i][j]) };
                if !(m[i][j] * orders[i]).is_integer() {
                    return Err(Error::InvalidForm(format!("b(g{i},g{j}) not killed by the order of g{i}")));
                }
            }
            let qd = m[i][i] * orders[i] * orders[i];
            if !(qd.is_integer() && qd.to_integer().rem_euclid(2) == 0) {
                return Err(Error::InvalidForm(format!("q(ord(g{i}) g{i}) is not 0 mod 2")));
            }
        }
        let f = FiniteQuadraticForm { labels, orders, qmat: m };
        let f = f.drop_trivial();
        if !f.is_nondegenerate() {
            return Err(Error::Degenerate("bilinear form is degenerate".into()));
        }
        Ok(f)
    }

    fn drop_trivial(self) -> Self {
        let keep: Vec<usize> = (0..self.orders.len()).filter(|&i| self.orders[i] > 1).collect();
        FiniteQuadraticForm {
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            orders: keep.iter().map(|&i| self.orders[i]).collect(),
            qmat: keep.iter().map(|&i| keep.iter().map(|&j| self.qmat[i][j]).collect()).collect(),
        }
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm { labels: vec![], orders: vec![], qmat: vec![] }
    }

    /// Cyclic form `<value>` on `Z/n`.
    pub fn cyclic(n: i64, value: Q) -> Result<Self> {
        Self::new(vec!["g".into()], vec![n], vec![vec![value]])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Diagonal relation matrix presenting the group on the generators.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        let n = self.orders.len();
        (0..n).map(|i| (0..n).map(|j| if i == j { self.orders[i] } else { 0 }).collect()).collect()
    }

    pub fn qmatrix(&self) -> &[Vec<Q>] {
        &self.qmat
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> i128 {
        self.orders.iter().map(|&d| d as i128).product()
    }

    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn primes(&self) -> Vec<u64> {
        prime_factors(self.exponent() as u64)
    }

    // ---- elements ----

    pub fn element(&self, coords: &[i64]) -> FqfElement {
        assert_eq!(coords.len(), self.rank(), "coordinate length");
        let coords = coords.iter().zip(&self.orders).map(|(&x, &d)| x.rem_euclid(d)).collect();
        FqfElement { coords }
    }

    pub fn zero(&self) -> FqfElement {
        FqfElement { coords: vec![0; self.rank()] }
    }

    pub fn generator(&self, i: usize) -> FqfElement {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        self.element(&c)
    }

    pub fn add(&self, x: &FqfElement, y: &FqfElement) -> FqfElement {
        let c: Vec<i64> = x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect();
        self.element(&c)
    }

    pub fn scale(&self, x: &FqfElement, s: i64) -> FqfElement {
        let c: Vec<i64> = x.coords.iter().map(|a| a * s).collect();
        self.element(&c)
    }

    pub fn neg(&self, x: &FqfElement) -> FqfElement {
        self.scale(x, -1)
    }

    pub fn is_zero(&self, x: &FqfElement) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn element_order(&self, x: &FqfElement) -> i64 {
        x.coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |a, o| a.lcm(&o))
    }

    /// Quadratic value in `[0, 2)`.
    pub fn qv(&self, x: &FqfElement) -> Q {
        let n = self.rank();
        let mut s = Q::from_integer(0);
        for i in 0..n {
            let xi = x.coords[i];
            if xi == 0 {
                continue;
            }
            s += self.qmat[i][i] * (xi * xi);
            for j in i + 1..n {
                let xj = x.coords[j];
                if xj != 0 {
                    s += self.qmat[i][j] * (2 * xi * xj);
                }
            }
            s = mod2(s);
        }
        mod2(s)
    }

    /// Bilinear value in `[0, 1)`.
    pub fn bv(&self, x: &FqfElement, y: &FqfElement) -> Q {
        let n = self.rank();
        let mut s = Q::from_integer(0);
        for i in 0..n {
            if x.coords[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y.coords[j] != 0 {
                    s += self.qmat[i][j] * (x.coords[i] * y.coords[j]);
                }
            }
            s = mod1(s);
        }
        mod1(s)
    }

    /// All elements, in lexicographic coordinate order. Intended for small forms.
    pub fn elements(&self) -> Vec<FqfElement> {
        let mut out = vec![self.zero()];
        for i in 0..self.rank() {
            let mut next = Vec::with_capacity(out.len() * self.orders[i] as usize);
            for e in &out {
                for c in 0..self.orders[i] {
                    let mut v = e.clone();
                    v.coords[i] = c;
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Elements killed by `n`.
    pub fn torsion(&self, n: i64) -> Vec<FqfElement> {
        let steps: Vec<(i64, i64)> = self
            .orders
            .iter()
            .map(|&d| {
                let g = d.gcd(&n);
                (d / g, g)
            })
            .collect();
        let mut out = vec![self.zero()];
        for (i, &(step, count)) in steps.iter().enumerate() {
            if count == 1 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * count as usize);
            for e in &out {
                for c in 0..count {
                    let mut v = e.clone();
                    v.coords[i] = c * step;
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// All elements of order exactly `n` with `q = 0 mod 2`.
    pub fn isotropic_elements(&self, n: i64) -> Vec<FqfElement> {
        self.torsion(n)
            .into_iter()
            .filter(|x| self.element_order(x) == n && self.qv(x) == Q::from_integer(0))
            .collect()
    }

    // ---- constructions ----

    pub fn orthogonal_sum(&self, other: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let n = self.rank();
        let m = other.rank();
        let mut qmat = vec![vec![Q::from_integer(0); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                qmat[i][j] = self.qmat[i][j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                qmat[n + i][n + j] = other.qmat[i][j];
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().copied());
        FiniteQuadraticForm { labels, orders, qmat }
    }

    pub fn negate(&self) -> FiniteQuadraticForm {
        let n = self.rank();
        let mut qmat = self.qmat.clone();
        for i in 0..n {
            for j in 0..n {
                qmat[i][j] = if i == j { mod2(-qmat[i][j]) } else { mod1(-qmat[i][j]) };
            }
        }
        FiniteQuadraticForm { labels: self.labels.clone(), orders: self.orders.clone(), qmat }
    }

    /// Embedding of the `p`-primary part: generators `(d_i / p^{a_i}) g_i`.
    pub fn primary_generators(&self, p: u64) -> Vec<FqfElement> {
        let p = p as i64;
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let d = self.orders[i];
            let mut pa = 1;
            while d % (pa * p) == 0 {
                pa *= p;
            }
            if pa > 1 {
                let mut c = vec![0; self.rank()];
                c[i] = d / pa;
                out.push(self.element(&c));
            }
        }
        out
    }

    pub fn primary_part(&self, p: u64) -> FiniteQuadraticForm {
        let gens = self.primary_generators(p);
        self.form_on(&gens, |i| format!("{}_{}", self.labels[i], p))
    }

    /// Form restricted to the given elements, assumed to be a basis of the subgroup they span.
    fn form_on(&self, gens: &[FqfElement], label: impl Fn(usize) -> String) -> FiniteQuadraticForm {
        let n = gens.len();
        let mut qmat = vec![vec![Q::from_integer(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                qmat[i][j] = if i == j { self.qv(&gens[i]) } else { self.bv(&gens[i], &gens[j]) };
            }
        }
        let labels = (0..n)
            .map(|i| {
                let src = gens[i].coords.iter().position(|&c| c != 0).unwrap_or(0);
                if self.labels.is_empty() {
                    format!("g{i}")
                } else {
                    label(src)
                }
            })
            .collect();
        let orders = gens.iter().map(|g| self.element_order(g)).collect();
        FiniteQuadraticForm { labels, orders, qmat }.drop_trivial()
    }

    /// Discriminant form of an even nondegenerate lattice given by its Gram matrix.
    pub fn from_gram(gram: &[Vec<i64>]) -> Result<FiniteQuadraticForm> {
        let n = gram.len();
        for i in 0..n {
            if gram[i].len() != n {
                return Err(Error::InvalidForm("Gram matrix not square".into()));
            }
            if gram[i][i] % 2 != 0 {
                return Err(Error::InvalidForm("lattice is not even".into()));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidForm("Gram matrix not symmetric".into()));
                }
            }
        }
        let g: Mat = gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        if intmat::det(&g) == 0 {
            return Err(Error::Degenerate("Gram determinant is zero".into()));
        }
        let s = intmat::smith(&g);
        // dual generators f_i = Q e_i / d_i, with pairings from Q^T G Q
        let qt_g_q = intmat::mul(&intmat::mul(&intmat::transpose(&s.q), &g), &s.q);
        let idx: Vec<usize> = (0..n).filter(|&i| s.diag[i] > 1).collect();
        let m = idx.len();
        let mut qmat = vec![vec![Q::from_integer(0); m]; m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                let v = Q::new(qt_g_q[i][j] as i64, (s.diag[i] * s.diag[j]) as i64);
                qmat[a][b] = v;
            }
        }
        let orders = idx.iter().map(|&i| s.diag[i] as i64).collect();
        let labels = (0..m).map(|i| format!("f{i}")).collect();
        FiniteQuadraticForm::new(labels, orders, qmat)
    }

    /// Checks the form is nondegenerate prime by prime on the socle.
    pub fn is_nondegenerate(&self) -> bool {
        for p in self.primes() {
            let pi = p as i64;
            let socle: Vec<FqfElement> = (0..self.rank())
                .filter(|&i| self.orders[i] % pi == 0)
                .map(|i| {
                    let mut c = vec![0; self.rank()];
                    c[i] = self.orders[i] / pi;
                    self.element(&c)
                })
                .collect();
            let rows: Vec<Vec<i64>> = socle
                .iter()
                .map(|s| {
                    (0..self.rank())
                        .map(|j| {
                            let v = self.bv(s, &self.generator(j)) * pi;
                            v.to_integer().rem_euclid(pi)
                        })
                        .collect()
                })
                .collect();
            if rank_mod_p(rows, pi) != socle.len() {
                return false;
            }
        }
        true
    }

    /// Evenness: `q(x) = 0 mod 1` for every element of order two.
    pub fn is_even(&self) -> bool {
        // q is additive mod Z on the 2-torsion, so the socle basis suffices
        (0..self.rank()).filter(|&i| self.orders[i] % 2 == 0).all(|i| {
            let mut c = vec![0; self.rank()];
            c[i] = self.orders[i] / 2;
            self.qv(&self.element(&c)).is_integer()
        })
    }

    // ---- Jordan decomposition ----

    pub fn jordan(&self, p: u64) -> Vec<JordanBlock> {
        let pi = p as i64;
        let mut basis = self.primary_generators(p);
        let mut blocks = Vec::new();
        while !basis.is_empty() {
            let ords: Vec<i64> = basis.iter().map(|g| self.element_order(g)).collect();
            let top = *ords.iter().max().unwrap();
            let k = top.trailing_zeros_base(pi);
            let tops: Vec<usize> = (0..basis.len()).filter(|&i| ords[i] == top).collect();
            let exact = |x: &FqfElement| *self.bv(x, x).denom() == top;
            let mut pick: Option<(usize, FqfElement)> = tops.iter().find(|&&i| exact(&basis[i])).map(|&i| (i, basis[i].clone()));
            if pick.is_none() && p != 2 {
                'outer: for (a, &i) in tops.iter().enumerate() {
                    for &j in &tops[a + 1..] {
                        let s = self.add(&basis[i], &basis[j]);
                        if exact(&s) {
                            pick = Some((i, s));
                            break 'outer;
                        }
                    }
                }
            }
            if let Some((i, x)) = pick {
                let bxx = self.bv(&x, &x) * top;
                let u = bxx.to_integer();
                let uinv = mod_inverse(u as i128, top as i128).expect("unit") as i64;
                let c = (self.qv(&x) * top).to_integer();
                blocks.push(JordanBlock { p, k, kind: BlockKind::Cyclic(c) });
                basis.remove(i);
                basis = basis
                    .iter()
                    .map(|y| {
                        let s = (self.bv(y, &x) * top).to_integer();
                        let coef = (s * uinv).rem_euclid(top);
                        self.add(y, &self.scale(&x, -coef))
                    })
                    .filter(|y| !self.is_zero(y))
                    .collect();
                continue;
            }
            // p = 2 and no odd cyclic summand of top order: split a hyperbolic-type plane
            let mut pair = None;
            'find: for (a, &i) in tops.iter().enumerate() {
                for &j in &tops[a + 1..] {
                    let b = self.bv(&basis[i], &basis[j]);
                    if *b.denom() == top {
                        pair = Some((i, j));
                        break 'find;
                    }
                }
            }
            let (i, j) = pair.expect("nondegenerate 2-part has a plane of top scale");
            let x = basis[i].clone();
            let y = basis[j].clone();
            let a = (self.qv(&x) * top).to_integer() / 2;
            let c = (self.qv(&y) * top).to_integer() / 2;
            let kind = if a.rem_euclid(2) == 1 && c.rem_euclid(2) == 1 { BlockKind::V } else { BlockKind::U };
            blocks.push(JordanBlock { p, k, kind });
            let m11 = (self.bv(&x, &x) * top).to_integer();
            let m12 = (self.bv(&x, &y) * top).to_integer();
            let m22 = (self.bv(&y, &y) * top).to_integer();
            let det = (m11 * m22 - m12 * m12).rem_euclid(top);
            let dinv = mod_inverse(det as i128, top as i128).expect("odd determinant") as i64;
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            basis.remove(hi);
            basis.remove(lo);
            basis = basis
                .iter()
                .map(|z| {
                    let r1 = (self.bv(z, &x) * top).to_integer();
                    let r2 = (self.bv(z, &y) * top).to_integer();
                    let alpha = ((m22 * r1 - m12 * r2) * dinv).rem_euclid(top);
                    let beta = ((m11 * r2 - m12 * r1) * dinv).rem_euclid(top);
                    let t = self.add(&self.scale(&x, -alpha), &self.scale(&y, -beta));
                    self.add(z, &t)
                })
                .filter(|z| !self.is_zero(z))
                .collect();
        }
        blocks.sort_by_key(|b| (b.k, b.dim()));
        blocks
    }

    /// Length of the `p`-part and, when defined, the unit class `u` with `det_p = u / |F_p|`.
    /// For odd `p` the class is the Legendre symbol (±1); for `p = 2` it is a residue in {1,3,5,7}
    /// and is absent when the 2-part is odd.
    pub fn length_and_det(&self, p: u64) -> (usize, Option<i64>) {
        let blocks = self.jordan(p);
        let len = blocks.iter().map(JordanBlock::dim).sum();
        (len, det_class(&blocks, p))
    }

    pub fn length(&self, p: u64) -> usize {
        let pi = p as i64;
        self.orders.iter().filter(|&&d| d % pi == 0).count()
    }

    /// Minimal number of generators.
    pub fn total_length(&self) -> usize {
        self.primes().into_iter().map(|p| self.length(p)).max().unwrap_or(0)
    }

    /// Brown invariant modulo 8, summed over Jordan blocks.
    pub fn brown(&self) -> i64 {
        self.primes()
            .into_iter()
            .flat_map(|p| self.jordan(p))
            .map(|b| block_brown(&b))
            .sum::<i64>()
            .rem_euclid(8)
    }

    /// Canonical text rendering via Jordan blocks.
    pub fn render(&self) -> String {
        let blocks: Vec<JordanBlock> = self.primes().into_iter().flat_map(|p| normalize_odd(self.jordan(p))).collect();
        render_blocks(&blocks)
    }

    // ---- mirrors and reflections ----

    fn primary_prime(&self, x: &FqfElement) -> Result<Option<u64>> {
        let o = self.element_order(x);
        if o == 1 {
            return Ok(None);
        }
        let f = prime_factors(o as u64);
        if f.len() != 1 {
            return Err(Error::MixedPrimary);
        }
        Ok(Some(f[0]))
    }

    pub fn is_mirror(&self, x: &FqfElement) -> Result<Option<Mirror>> {
        let Some(p) = self.primary_prime(x)? else { return Ok(None) };
        let pi = p as i64;
        let ord = self.element_order(x);
        let v = self.qv(x);
        let (n, d) = (*v.numer(), *v.denom());
        if p == 2 {
            if d == 1 {
                // q = 0 is never of the form 2m/2^k with m odd; q = 1 gives k = 1
                if n == 1 && ord <= 2 {
                    return Ok(Some(Mirror { p, k: 1, m: 1 }));
                }
                return Ok(None);
            }
            let j = d.trailing_zeros();
            let k = j + 1;
            if ord > 1i64 << k {
                return Ok(None);
            }
            return Ok(Some(Mirror { p, k, m: n.rem_euclid(2 * d) }));
        }
        if d != ord {
            return Ok(None);
        }
        let k = d.trailing_zeros_base(pi);
        debug_assert!(n % 2 == 0);
        let m = (n / 2).rem_euclid(d);
        if m % pi == 0 {
            return Ok(None);
        }
        Ok(Some(Mirror { p, k, m }))
    }

    pub fn reflection(&self, xi: &FqfElement) -> Result<FqfAutomorphism> {
        self.is_mirror(xi)?.ok_or(Error::NotMirror)?;
        let ord = self.element_order(xi);
        let qx = self.qv(xi);
        let n = self.rank();
        let mut matrix = vec![vec![0i64; n]; n];
        for j in 0..n {
            let g = self.generator(j);
            let c = Q::from_integer(2) * self.bv(&g, xi) / qx;
            let inv = mod_inverse(*c.denom() as i128, ord as i128).ok_or(Error::NotMirror)? as i64;
            let coef = (c.numer().rem_euclid(ord) * inv).rem_euclid(ord);
            let img = self.add(&g, &self.scale(xi, -coef));
            for i in 0..n {
                matrix[i][j] = img.coords[i];
            }
        }
        Ok(FqfAutomorphism { matrix })
    }

    /// `(|xi|_p, delta_p(xi))`; the norm is `None` exactly when `p = 2`, `xi` is 2-primary
    /// and `xi^2 = 0 mod 1`.
    pub fn norms_of_mirror(&self, xi: &FqfElement, p: u64) -> Result<(Option<i32>, i32)> {
        let mir = self.is_mirror(xi)?.ok_or(Error::NotMirror)?;
        Ok(mirror_norms(&mir, self.qv(xi), p))
    }

    // ---- automorphisms ----

    pub fn identity(&self) -> FqfAutomorphism {
        let n = self.rank();
        FqfAutomorphism { matrix: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn apply(&self, a: &FqfAutomorphism, x: &FqfElement) -> FqfElement {
        let n = self.rank();
        let c: Vec<i64> = (0..n).map(|i| (0..n).map(|j| a.matrix[i][j] * x.coords[j]).sum()).collect();
        self.element(&c)
    }

    /// `a` after `b`.
    pub fn compose(&self, a: &FqfAutomorphism, b: &FqfAutomorphism) -> FqfAutomorphism {
        let n = self.rank();
        let mut matrix = vec![vec![0i64; n]; n];
        for j in 0..n {
            let img = self.apply(a, &self.apply(b, &self.generator(j)));
            for i in 0..n {
                matrix[i][j] = img.coords[i];
            }
        }
        FqfAutomorphism { matrix }
    }

    pub fn is_automorphism(&self, a: &FqfAutomorphism) -> bool {
        let n = self.rank();
        let imgs: Vec<FqfElement> = (0..n).map(|j| self.apply(a, &self.generator(j))).collect();
        for i in 0..n {
            if !self.is_zero(&self.scale(&imgs[i], self.orders[i])) {
                return false;
            }
            if self.qv(&imgs[i]) != self.qmat[i][i] {
                return false;
            }
            for j in i + 1..n {
                if self.bv(&imgs[i], &imgs[j]) != self.qmat[i][j] {
                    return false;
                }
            }
        }
        // bijective: nondegeneracy plus preservation of b forces injectivity
        true
    }

    // ---- subquotients ----

    /// The form on `K^perp / K` for the subgroup `K` generated by `kernel`.
    pub fn quotient_form(&self, kernel: &[FqfElement]) -> Result<(FiniteQuadraticForm, Vec<FqfElement>)> {
        for k in kernel {
            if self.qv(k) != Q::from_integer(0) {
                return Err(Error::NotIsotropic);
            }
            for l in kernel {
                if self.bv(k, l) != Q::from_integer(0) {
                    return Err(Error::NotIsotropic);
                }
            }
        }
        let n = self.rank();
        if kernel.is_empty() {
            return Ok((self.clone(), (0..n).map(|i| self.generator(i)).collect()));
        }
        // K^perp preimage: x with sum_i x_i b(g_i, k) = 0 mod 1 for each k
        let kcount = kernel.len();
        let mut sys: Mat = vec![vec![0i128; n + kcount]; kcount];
        for (r, k) in kernel.iter().enumerate() {
            let bs: Vec<Q> = (0..n).map(|i| self.bv(&self.generator(i), k)).collect();
            let den = bs.iter().fold(1i64, |a, b| a.lcm(b.denom()));
            for i in 0..n {
                sys[r][i] = (bs[i] * den).to_integer() as i128;
            }
            sys[r][n + r] = -(den as i128);
        }
        let ker = intmat::kernel(&sys, n + kcount);
        let mut span: Mat = vec![Vec::new(); n];
        for i in 0..n {
            span[i].extend(ker[i].iter().copied());
            for j in 0..n {
                span[i].push(if i == j { self.orders[i] as i128 } else { 0 });
            }
        }
        let basis = intmat::column_basis(&span);
        // relations: order lattice plus kernel lifts, in basis coordinates
        let mut rel: Mat = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                rel[i].push(if i == j { self.orders[i] as i128 } else { 0 });
            }
            for k in kernel {
                rel[i].push(k.coords[i] as i128);
            }
        }
        let bs = intmat::smith(&basis);
        // basis^{-1} = Q diag^{-1} P
        let pr = intmat::mul(&bs.p, &rel);
        let mut scaled = pr.clone();
        for i in 0..n {
            for v in scaled[i].iter_mut() {
                if *v % bs.diag[i] != 0 {
                    return Err(Error::Invariant("relation outside K-perp".into()));
                }
                *v /= bs.diag[i];
            }
        }
        let coords = intmat::mul(&bs.q, &scaled);
        let s = intmat::smith(&coords);
        let gens_mat = intmat::mul(&basis, &s.p_inv);
        let mut gens = Vec::new();
        for (j, &d) in s.diag.iter().enumerate() {
            if d > 1 {
                let c: Vec<i64> = (0..n).map(|i| gens_mat[i][j] as i64).collect();
                gens.push(self.element(&c));
            }
        }
        let m = gens.len();
        let mut qmat = vec![vec![Q::from_integer(0); m]; m];
        for i in 0..m {
            for j in 0..m {
                qmat[i][j] = if i == j { self.qv(&gens[i]) } else { self.bv(&gens[i], &gens[j]) };
            }
        }
        let orders: Vec<i64> = s.diag.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
        let labels = (0..m).map(|i| format!("k{i}")).collect();
        let f = FiniteQuadraticForm::new(labels, orders, qmat)?;
        Ok((f, gens))
    }
}

pub(crate) fn mirror_norms(mir: &Mirror, qx: Q, p: u64) -> (Option<i32>, i32) {
    use crate::arith::chi;
    if mir.p != p {
        let rk = (mir.p as i128).pow(mir.k);
        (Some(chi(p, rk)), 1)
    } else if p == 2 && qx.is_integer() {
        (None, -1)
    } else {
        (Some(chi(p, mir.m as i128)), -1)
    }
}

trait BaseZeros {
    fn trailing_zeros_base(self, p: i64) -> u32;
}

impl BaseZeros for i64 {
    fn trailing_zeros_base(self, p: i64) -> u32 {
        let mut n = self;
        let mut k = 0;
        while n != 0 && n % p == 0 {
            n /= p;
            k += 1;
        }
        k
    }
}

fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c].rem_euclid(p) != 0) else { continue };
        rows.swap(rank, piv);
        let inv = mod_inverse(rows[rank][c] as i128, p as i128).unwrap() as i64;
        for r in 0..rows.len() {
            if r != rank {
                let f = (rows[r][c] * inv).rem_euclid(p);
                if f != 0 {
                    for cc in 0..cols {
                        rows[r][cc] = (rows[r][cc] - f * rows[rank][cc]).rem_euclid(p);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Unit class of `|F_p| det_p F` from a Jordan decomposition (see `length_and_det`).
pub fn det_class(blocks: &[JordanBlock], p: u64) -> Option<i64> {
    if p == 2 {
        let mut u: i64 = 1;
        for b in blocks {
            match b.kind {
                BlockKind::Cyclic(c) => {
                    if b.k == 1 {
                        return None;
                    }
                    u = (u * c).rem_euclid(8);
                }
                BlockKind::U => u = (u * 7).rem_euclid(8),
                BlockKind::V => u = (u * 3).rem_euclid(8),
            }
        }
        Some(u)
    } else {
        let mut s = 1i64;
        for b in blocks {
            if let BlockKind::Cyclic(c) = b.kind {
                s *= i64::from(legendre(c as i128, p as i128));
            }
        }
        Some(s)
    }
}

pub fn block_brown(b: &JordanBlock) -> i64 {
    match b.kind {
        BlockKind::U => 0,
        BlockKind::V => {
            if b.k % 2 == 1 {
                4
            } else {
                0
            }
        }
        BlockKind::Cyclic(c) => {
            if b.p == 2 {
                (c + i64::from(b.k) * (c * c - 1) / 2).rem_euclid(8)
            } else if b.k % 2 == 0 {
                0
            } else {
                // Gauss sum of exp(2 pi i a x^2 / p^k), a = c/2
                let a = c / 2;
                let l = legendre(a as i128, b.p as i128);
                let base = if b.p % 4 == 1 { 0 } else { 2 };
                if l == 1 {
                    base
                } else {
                    (base + 4) % 8
                }
            }
        }
    }
}

/// For odd `p`, rewrites each scale as `<2/p^k>+...+<2a/p^k>` with `a` the least
/// representative of the total square class.
fn normalize_odd(mut blocks: Vec<JordanBlock>) -> Vec<JordanBlock> {
    let Some(p) = blocks.first().map(|b| b.p) else { return blocks };
    if p == 2 {
        return blocks;
    }
    let nonresidue = (2..p as i64).find(|&a| legendre(a as i128, p as i128) == -1).unwrap();
    let mut i = 0;
    while i < blocks.len() {
        let k = blocks[i].k;
        let mut j = i;
        let mut sign = 1;
        while j < blocks.len() && blocks[j].k == k {
            if let BlockKind::Cyclic(c) = blocks[j].kind {
                sign *= legendre((c / 2) as i128, p as i128);
            }
            blocks[j].kind = BlockKind::Cyclic(2);
            j += 1;
        }
        if sign == -1 {
            blocks[j - 1].kind = BlockKind::Cyclic(2 * nonresidue);
        }
        i = j;
    }
    blocks
}

pub fn render_blocks(blocks: &[JordanBlock]) -> String {
    if blocks.is_empty() {
        return "0".into();
    }
    blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Cyclic(c) => {
                let v = Q::new(c, (b.p as i64).pow(b.k));
                format!("<{}/{}>", v.numer(), v.denom())
            }
            BlockKind::U => format!("u_{}", b.k),
            BlockKind::V => format!("v_{}", b.k),
        })
        .collect::<Vec<_>>()
        .join("+")
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(n: i64) -> FiniteQuadraticForm {
        FiniteQuadraticForm::cyclic(2, q(n, 2)).unwrap()
    }

    #[test]
    fn orthogonal_sum_of_halves() {
        let f = half(1).orthogonal_sum(&half(3));
        assert_eq!(f.order(), 4);
        assert_eq!(f.qmatrix()[0][1], q(0, 1));
        assert_eq!(f.qmatrix()[1][1], q(3, 2));
        assert_eq!(f.orthogonal_sum(&FiniteQuadraticForm::trivial()), f);
    }

    #[test]
    fn primary_part_of_cyclic_ten() {
        let f = FiniteQuadraticForm::cyclic(10, q(11, 10)).unwrap();
        let f5 = f.primary_part(5);
        assert_eq!(f5.orders(), &[5]);
        assert_eq!(f5.qmatrix()[0][0], q(2, 5));
        assert_eq!(half(1).primary_part(3).order(), 1);
    }

    #[test]
    fn degenerate_form_rejected() {
        let r = FiniteQuadraticForm::new(
            vec!["a".into(), "b".into()],
            vec![2, 2],
            vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]],
        );
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn evenness_examples() {
        assert!(!half(1).is_even());
        assert!(FiniteQuadraticForm::cyclic(5, q(2, 5)).unwrap().is_even());
        assert!(!half(3).orthogonal_sum(&half(3)).is_even());
    }

    #[test]
    fn length_and_det_examples() {
        let f = FiniteQuadraticForm::cyclic(5, q(2, 5)).unwrap();
        // b(g,g) = 2/5, so |F| det = 2, a non-square mod 5
        assert_eq!(f.length_and_det(5), (1, Some(-1)));
        assert_eq!(half(1).length_and_det(2), (1, None));
        assert_eq!(FiniteQuadraticForm::trivial().length_and_det(3), (0, Some(1)));
    }

    #[test]
    fn brown_of_small_forms() {
        assert_eq!(half(1).brown(), 1);
        assert_eq!(half(3).brown(), 7);
        assert_eq!(FiniteQuadraticForm::trivial().brown(), 0);
    }

    #[test]
    fn mirror_examples() {
        let f = FiniteQuadraticForm::cyclic(8, q(7, 8)).unwrap();
        let g = f.generator(0);
        assert_eq!(f.is_mirror(&g).unwrap(), Some(Mirror { p: 2, k: 4, m: 7 }));
        let f5 = FiniteQuadraticForm::cyclic(5, q(4, 5)).unwrap();
        assert_eq!(f5.is_mirror(&f5.generator(0)).unwrap(), Some(Mirror { p: 5, k: 1, m: 2 }));
        assert_eq!(f5.is_mirror(&f5.zero()).unwrap(), None);
        let mixed = FiniteQuadraticForm::cyclic(10, q(11, 10)).unwrap();
        assert_eq!(mixed.is_mirror(&mixed.generator(0)), Err(Error::MixedPrimary));
    }

    #[test]
    fn reflection_examples() {
        let f = FiniteQuadraticForm::cyclic(5, q(2, 5)).unwrap();
        let r = f.reflection(&f.generator(0)).unwrap();
        assert_eq!(f.apply(&r, &f.generator(0)), f.element(&[-1]));
        let ff = f.orthogonal_sum(&f);
        let xi = ff.element(&[1, -1]);
        let r = ff.reflection(&xi).unwrap();
        assert_eq!(ff.apply(&r, &ff.generator(0)), ff.generator(1));
        assert_eq!(ff.apply(&r, &ff.generator(1)), ff.generator(0));
        let h = half(1);
        assert!(h.is_mirror(&h.generator(0)).unwrap().is_some());
        assert_eq!(h.reflection(&h.generator(0)).unwrap(), h.identity());
    }

    #[test]
    fn norms_examples() {
        let f = FiniteQuadraticForm::cyclic(7, q(6, 7)).unwrap();
        assert_eq!(f.norms_of_mirror(&f.generator(0), 2).unwrap(), (Some(-1), 1));
        let f = FiniteQuadraticForm::cyclic(8, q(7, 8)).unwrap();
        assert_eq!(f.norms_of_mirror(&f.generator(0), 2).unwrap(), (Some(-1), -1));
        let f = FiniteQuadraticForm::cyclic(5, q(4, 5)).unwrap();
        assert_eq!(f.norms_of_mirror(&f.generator(0), 5).unwrap(), (Some(-1), -1));
        let f = FiniteQuadraticForm::cyclic(2, q(1, 1));
        assert!(f.is_err(), "<1> on Z/2 is degenerate");
    }

    #[test]
    fn negation_examples() {
        let f = FiniteQuadraticForm::cyclic(5, q(2, 5)).unwrap();
        let n = f.negate();
        assert_eq!(n.qmatrix()[0][0], q(8, 5));
        assert_eq!(n.qv(&n.element(&[2])), q(2, 5));
        assert_eq!(half(1).negate().qmatrix()[0][0], q(3, 2));
        assert_eq!(n.negate(), f);
    }

    #[test]
    fn gram_discriminant_of_h() {
        let f = FiniteQuadraticForm::from_gram(&[vec![2]]).unwrap();
        assert_eq!(f.render(), "<1/2>");
    }
}
