//! Dense integer matrices and Smith normal form with transforms.

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[t][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

/// Result of `smith`: `p * a * q = d` with `p`, `q` unimodular.
pub struct Smith {
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
    /// Nonnegative diagonal entries, each dividing the next; length min(rows, cols).
    pub diag: Vec<i128>,
}

fn swap_rows(m: &mut Mat, i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut Mat, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

// row_i += c * row_j
fn add_row(m: &mut Mat, i: usize, j: usize, c: i128) {
    if c == 0 {
        return;
    }
    let rj = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(rj) {
        *x += c * y;
    }
}

fn add_col(m: &mut Mat, i: usize, j: usize, c: i128) {
    if c == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[i] += c * row[j];
    }
}

fn neg_row(m: &mut Mat, i: usize) {
    for x in m[i].iter_mut() {
        *x = -*x;
    }
}

pub fn smith(a: &Mat) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.clone();
    let mut p = identity(rows);
    let mut p_inv = identity(rows);
    let mut q = identity(cols);
    let r = rows.min(cols);
    for t in 0..r {
        // pivot: smallest nonzero absolute value in the trailing block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                swap_rows(&mut d, t, bi);
                swap_rows(&mut p, t, bi);
                swap_cols(&mut p_inv, t, bi);
            }
            if bj != t {
                swap_cols(&mut d, t, bj);
                swap_cols(&mut q, t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let c = d[i][t].div_euclid(d[t][t]);
                add_row(&mut d, i, t, -c);
                add_row(&mut p, i, t, -c);
                add_col(&mut p_inv, t, i, c);
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let c = d[t][j].div_euclid(d[t][t]);
                add_col(&mut d, j, t, -c);
                add_col(&mut q, j, t, -c);
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let piv = d[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut p, t, i, 1);
                    add_col(&mut p_inv, i, t, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            neg_row(&mut d, t);
            neg_row(&mut p, t);
            for row in p_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let diag = (0..r).map(|i| d[i][i]).collect();
    Smith { p, p_inv, q, diag }
}

/// Integer determinant by fraction-free elimination (Bareiss).
pub fn det(a: &Mat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Basis (as columns) of the integer kernel of `a`.
pub fn kernel(a: &Mat, cols: usize) -> Mat {
    if a.is_empty() {
        return identity(cols);
    }
    let s = smith(a);
    let rank = s.diag.iter().filter(|&&x| x != 0).count();
    let basis: Vec<Vec<i128>> = (rank..cols).map(|j| s.q.iter().map(|row| row[j]).collect()).collect();
    transpose_cols(&basis, cols)
}

fn transpose_cols(cols_list: &[Vec<i128>], n: usize) -> Mat {
    (0..n).map(|i| cols_list.iter().map(|c| c[i]).collect()).collect()
}

/// A basis, as columns of a square matrix, of the full-rank lattice spanned by the columns of `a`.
pub fn column_basis(a: &Mat) -> Mat {
    let n = a.len();
    let s = smith(a);
    let mut b = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = s.p_inv[i][j] * s.diag.get(j).copied().unwrap_or(0);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_a2_cartan() {
        let a = vec![vec![2, -1], vec![-1, 2]];
        let s = smith(&a);
        assert_eq!(s.diag, vec![1, 3]);
        let d = mul(&mul(&s.p, &a), &s.q);
        assert_eq!(d, vec![vec![1, 0], vec![0, 3]]);
        assert_eq!(mul(&s.p, &s.p_inv), identity(2));
    }

    #[test]
    fn determinant_of_e8_is_one() {
        let mut g = vec![vec![0i128; 8]; 8];
        for i in 0..8 {
            g[i][i] = 2;
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        assert_eq!(det(&g), 1);
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel(&vec![vec![2, 3]], 2);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0].len(), 1);
        assert_eq!(2 * k[0][0] + 3 * k[1][0], 0);
    }
}
