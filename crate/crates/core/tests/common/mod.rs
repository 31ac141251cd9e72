//! Naive reference computations used to cross-check the library.
//! Nothing here calls into `msw_core` arithmetic; matrices are plain `Vec<Vec<u64>>`.
#![allow(dead_code)]

use msw_core::Matrix;

pub type M = Vec<Vec<u64>>;

pub fn plain(m: &Matrix) -> M {
    m.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse by Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn mul(a: &M, b: &M, p: u64) -> M {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for j in 0..m {
            out[i][j] = (0..k).map(|t| a[i][t] * b[t][j] % p).sum::<u64>() % p;
        }
    }
    out
}

pub fn identity(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det(a: &M, p: u64) -> u64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0] % p;
    }
    let mut acc = 0;
    for j in 0..n {
        if a[0][j] == 0 {
            continue;
        }
        let minor: M = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = a[0][j] * det(&minor, p) % p;
        acc = if j % 2 == 0 { (acc + term) % p } else { (acc + p - term) % p };
    }
    acc
}

/// Adjugate over determinant.
pub fn inverse(a: &M, p: u64) -> Option<M> {
    let n = a.len();
    let d = det(a, p);
    if d == 0 {
        return None;
    }
    let dinv = inv_mod(d, p);
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: M = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let c = det(&minor, p);
            let signed = if (i + j) % 2 == 0 { c } else { (p - c) % p };
            out[i][j] = signed * dinv % p;
        }
    }
    Some(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest order of a nonvanishing minor. Only for small matrices.
pub fn rank_by_minors(a: &M, p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: M = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                if det(&sub, p) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Rank by plain row reduction on a copy.
pub fn rank(a: &M, p: u64) -> usize {
    let mut m = a.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_multiple_of(p) {
                let factor = m[i][c] * inv % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - factor * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of the span of matrices, each flattened to a row.
pub fn span_dim(mats: &[M], p: u64) -> usize {
    let rows: M = mats.iter().map(|m| m.iter().flatten().copied().collect()).collect();
    rank(&rows, p)
}

/// All vectors of length `n` over GF(p), lexicographic.
pub fn vectors(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every linear combination of `basis`.
pub fn span_elements(basis: &[M], p: u64) -> Vec<M> {
    let rows = basis.first().map_or(0, Vec::len);
    let cols = basis.first().and_then(|b| b.first()).map_or(0, Vec::len);
    vectors(basis.len(), p)
        .into_iter()
        .map(|c| {
            let mut acc = vec![vec![0; cols]; rows];
            for (k, b) in c.iter().zip(basis) {
                for i in 0..rows {
                    for j in 0..cols {
                        acc[i][j] = (acc[i][j] + k * b[i][j]) % p;
                    }
                }
            }
            acc
        })
        .collect()
}

pub fn has_nonzero_eigenvalue(a: &M, p: u64) -> bool {
    let n = a.len();
    (1..p).any(|l| {
        let shifted: M = (0..n)
            .map(|i| (0..n).map(|j| if i == j { (a[i][j] + p - l) % p } else { a[i][j] }).collect())
            .collect();
        det(&shifted, p) == 0
    })
}

pub fn trivial_spectrum(basis: &[M], p: u64) -> bool {
    span_elements(basis, p).iter().all(|m| !has_nonzero_eigenvalue(m, p))
}

pub fn is_strictly_upper(a: &M) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().take(i + 1).all(|&v| v == 0))
}

/// Some nonzero `x` with `x^T P x = 0`.
pub fn isotropic(pm: &M, p: u64) -> bool {
    let n = pm.len();
    vectors(n, p).into_iter().skip(1).any(|x| {
        let mut q = 0;
        for i in 0..n {
            for j in 0..n {
                q = (q + x[i] * pm[i][j] % p * x[j]) % p;
            }
        }
        q == 0
    })
}

/// Gaussian binomial by the q-Pascal rule `[n, k] = [n-1, k-1] + q^k [n-1, k]`.
pub fn gaussian(n: usize, k: usize, q: u128) -> u128 {
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![0u128; m + 1];
        for j in 0..=m {
            let left = if j > 0 { row[j - 1] } else { 0 };
            let right = if j < m { q.pow(j as u32) * row[j] } else { 0 };
            next[j] = left + right;
        }
        row = next;
    }
    if k > n {
        0
    } else {
        row[k]
    }
}

/// Canonical `E_ij - E_ji` basis of the alternating matrices.
pub fn alternating(n: usize, p: u64) -> Vec<M> {
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            let mut m = vec![vec![0; n]; n];
            m[i][j] = 1;
            m[j][i] = p - 1;
            out.push(m);
        }
    }
    out
}
