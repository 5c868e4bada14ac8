use num_rational::Ratio;

use super::set::{RootType, SingularitySet};
use crate::error::{Error, Result};
use crate::fqf::FiniteQuadraticForm;
use crate::intmat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    gram: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for i in 0..n {
            if gram[i].len() != n {
                return Err(Error::InvalidForm("Gram matrix not square".into()));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidForm("Gram matrix not symmetric".into()));
                }
            }
        }
        Ok(IntegerLattice { gram })
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn det(&self) -> i128 {
        let m: intmat::Mat = self.gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        intmat::det(&m)
    }

    /// `(sigma_+, sigma_-)` by exact symmetric elimination.
    pub fn signature(&self) -> (usize, usize) {
        type R = Ratio<i128>;
        let n = self.rank();
        let mut m: Vec<Vec<R>> = self.gram.iter().map(|r| r.iter().map(|&x| R::from_integer(x as i128)).collect()).collect();
        let (mut pos, mut neg) = (0, 0);
        let mut alive: Vec<usize> = (0..n).collect();
        while let Some(&first) = alive.first() {
            let zero = R::from_integer(0);
            let piv = alive.iter().copied().find(|&i| m[i][i] != zero);
            let piv = match piv {
                Some(p) => p,
                None => {
                    // all diagonals zero: replace e_i by e_i + e_j for a nonzero b(e_i, e_j)
                    let pair = alive.iter().flat_map(|&i| alive.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && m[i][j] != zero);
                    let Some((i, j)) = pair else {
                        alive.retain(|&x| x != first);
                        continue;
                    };
                    for k in 0..n {
                        let v = m[j][k];
                        m[i][k] += v;
                    }
                    for k in 0..n {
                        let v = m[k][j];
                        m[k][i] += v;
                    }
                    i
                }
            };
            let d = m[piv][piv];
            if d > zero {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.retain(|&x| x != piv);
            for &i in &alive {
                let f = m[i][piv] / d;
                for &j in &alive {
                    let v = m[piv][j];
                    m[i][j] -= f * v;
                }
            }
        }
        (pos, neg)
    }

    pub fn orthogonal_sum(&self, other: &IntegerLattice) -> IntegerLattice {
        let (n, k) = (self.rank(), other.rank());
        let mut g = vec![vec![0; n + k]; n + k];
        for i in 0..n {
            g[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..k {
            g[n + i][n..].copy_from_slice(&other.gram[i]);
        }
        IntegerLattice { gram: g }
    }

    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm> {
        FiniteQuadraticForm::from_gram(&self.gram)
    }
}

/// Edges of the Dynkin diagram of a root type, on vertices `0..rank`.
pub fn dynkin_edges(r: RootType) -> Vec<(usize, usize)> {
    let n = r.rank() as usize;
    match r {
        RootType::A(_) => (1..n).map(|i| (i - 1, i)).collect(),
        RootType::D(_) => {
            let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((n - 3, n - 1));
            e
        }
        RootType::E(_) => {
            let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((2, n - 1));
            e
        }
    }
}

/// Negative definite Cartan-type Gram matrix of a root type.
pub fn root_gram(r: RootType) -> IntegerLattice {
    let n = r.rank() as usize;
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (a, b) in dynkin_edges(r) {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    IntegerLattice { gram: g }
}

pub fn gram_of(s: &SingularitySet) -> IntegerLattice {
    s.points().iter().fold(IntegerLattice { gram: vec![] }, |acc, &r| acc.orthogonal_sum(&root_gram(r)))
}

/// `S_h = S + Zh` with `h^2 = 2`.
pub fn gram_of_h(s: &SingularitySet) -> IntegerLattice {
    gram_of(s).orthogonal_sum(&IntegerLattice { gram: vec![vec![2]] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grams() {
        assert_eq!(root_gram(RootType::A(1)).gram(), &[vec![-2]]);
        assert_eq!(root_gram(RootType::A(2)).gram(), &[vec![-2, 1], vec![1, -2]]);
        let e8 = root_gram(RootType::E(8));
        assert_eq!(e8.det(), 1);
        assert_eq!(e8.signature(), (0, 8));
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let u = IntegerLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(u.signature(), (1, 1));
        let s = gram_of_h(&SingularitySet::parse("2A9").unwrap());
        assert_eq!(s.signature(), (1, 18));
    }

    #[test]
    fn discriminants_from_grams() {
        assert_eq!(root_gram(RootType::E(8)).discriminant_form().unwrap().order(), 1);
        let h = IntegerLattice::new(vec![vec![2]]).unwrap();
        assert_eq!(h.discriminant_form().unwrap().render(), "<1/2>");
        let a9 = root_gram(RootType::A(9)).discriminant_form().unwrap();
        assert_eq!(a9.order(), 10);
        assert_eq!(a9.primary_part(5).render(), "<2/5>");
        assert_eq!(a9.primary_part(2).render(), "<3/2>");
    }
}
