//! Enumeration of Grassmannians by RREF pivot pattern.
//!
//! Subspaces are indexed as follows: pivot column sets in lexicographic order,
//! then the free entries of the RREF (row-major positions) read as a base-p
//! number with the last position least significant. Any index range can be
//! re-created independently, which is what scan partitioning relies on.

use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::subspace::VectorSubspace;

/// Number of `d`-dimensional subspaces of `GF(q)^n`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    let d = d.min(n - d);
    let q = q as u128;
    // [n, k+1] = [n, k] (q^{n-k} - 1) / (q^{k+1} - 1), exact at every step
    let mut acc: u128 = 1;
    for k in 0..d {
        let num = q.checked_pow((n - k) as u32).map(|x| x - 1);
        let den = q.pow((k + 1) as u32) - 1;
        match num.and_then(|x| acc.checked_mul(x)) {
            Some(prod) => acc = prod / den,
            None => return u128::MAX,
        }
    }
    acc
}

/// The set of all `d`-dimensional subspaces of `GF(p)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grassmannian {
    field: FieldSpec,
    n: usize,
    d: usize,
}

fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for (row, &pc) in pivots.iter().enumerate() {
        for col in pc + 1..n {
            if !is_pivot[col] {
                out.push((row, col));
            }
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let d = c.len();
    for i in (0..d).rev() {
        if c[i] < n - d + i {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Grassmannian {
    pub fn new(field: FieldSpec, n: usize, d: usize) -> Result<Self> {
        if d > n {
            return Err(MswError::InvalidArgument(format!(
                "subspace dimension {d} exceeds ambient dimension {n}"
            )));
        }
        Ok(Self { field, n, d })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn ambient(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> u128 {
        gaussian_binomial(self.n, self.d, self.field.p() as u64)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Length computed pattern by pattern rather than by the product formula.
    pub fn pattern_sum(&self) -> u128 {
        let mut combo: Vec<usize> = (0..self.d).collect();
        let mut total = 0u128;
        loop {
            total += self.field.power_count(free_positions(self.n, &combo).len());
            if !next_combination(&mut combo, self.n) {
                return total;
            }
        }
    }

    pub fn iter(&self) -> GrassmannianIter {
        self.iter_range(0, self.len())
    }

    /// Subspaces with indices in `start..end` (clamped to the length).
    pub fn iter_range(&self, start: u128, end: u128) -> GrassmannianIter {
        let end = end.min(self.len());
        let start = start.min(end);
        let mut combo: Vec<usize> = (0..self.d).collect();
        let mut offset = start;
        loop {
            let size = self.field.power_count(free_positions(self.n, &combo).len());
            if offset < size || !next_combination(&mut combo, self.n) {
                break;
            }
            offset -= size;
        }
        let free = free_positions(self.n, &combo);
        let p = self.field.p() as u128;
        let mut digits = vec![0u32; free.len()];
        for k in (0..free.len()).rev() {
            digits[k] = (offset % p) as u32;
            offset /= p;
        }
        let mut it = GrassmannianIter {
            field: self.field,
            n: self.n,
            combo,
            free,
            digits,
            rows: Vec::new(),
            index: start,
            end,
        };
        it.rebuild_rows();
        it
    }

    pub fn unrank(&self, index: u128) -> Option<VectorSubspace> {
        self.iter_range(index, index + 1).next()
    }

    /// Index of `w` in the enumeration order.
    pub fn rank_of(&self, w: &VectorSubspace) -> Option<u128> {
        if w.ambient() != self.n || w.dim() != self.d || w.field() != self.field {
            return None;
        }
        let pivots = w.pivots();
        let mut combo: Vec<usize> = (0..self.d).collect();
        let mut index = 0u128;
        while combo != pivots {
            index += self.field.power_count(free_positions(self.n, &combo).len());
            if !next_combination(&mut combo, self.n) {
                return None;
            }
        }
        let p = self.field.p() as u128;
        let mut offset = 0u128;
        for (row, col) in free_positions(self.n, &pivots) {
            offset = offset * p + w.basis()[row][col] as u128;
        }
        Some(index + offset)
    }
}

/// Iterator over a contiguous index range of a [`Grassmannian`].
pub struct GrassmannianIter {
    field: FieldSpec,
    n: usize,
    combo: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    rows: Vec<Vec<u32>>,
    index: u128,
    end: u128,
}

impl GrassmannianIter {
    /// Index of the next subspace to be yielded.
    pub fn position(&self) -> u128 {
        self.index
    }

    fn rebuild_rows(&mut self) {
        self.rows = self
            .combo
            .iter()
            .map(|&c| {
                let mut v = vec![0u32; self.n];
                v[c] = 1;
                v
            })
            .collect();
        for (k, &(r, c)) in self.free.iter().enumerate() {
            self.rows[r][c] = self.digits[k];
        }
    }

    fn advance(&mut self) {
        let p = self.field.p();
        for k in (0..self.free.len()).rev() {
            let (r, c) = self.free[k];
            self.digits[k] += 1;
            if self.digits[k] < p {
                self.rows[r][c] = self.digits[k];
                return;
            }
            self.digits[k] = 0;
            self.rows[r][c] = 0;
        }
        if next_combination(&mut self.combo, self.n) {
            self.free = free_positions(self.n, &self.combo);
            self.digits = vec![0; self.free.len()];
            self.rebuild_rows();
        }
    }
}

impl Iterator for GrassmannianIter {
    type Item = VectorSubspace;

    fn next(&mut self) -> Option<VectorSubspace> {
        if self.index >= self.end {
            return None;
        }
        let out = VectorSubspace::from_canonical(self.field, self.n, self.rows.clone());
        self.index += 1;
        if self.index < self.end {
            self.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.index).unwrap_or(usize::MAX);
        (left, Some(left))
    }
}

/// All `d`-dimensional subspaces of `Mat_{m,n}(GF(p))`, via row-major vectorization.
#[derive(Clone, Copy, Debug)]
pub struct MatrixGrassmannian {
    inner: Grassmannian,
    rows: usize,
    cols: usize,
}

impl MatrixGrassmannian {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, d: usize) -> Result<Self> {
        Ok(Self {
            inner: Grassmannian::new(field, rows * cols, d)?,
            rows,
            cols,
        })
    }

    pub fn len(&self) -> u128 {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn vector_grassmannian(&self) -> &Grassmannian {
        &self.inner
    }

    pub fn iter_range(&self, start: u128, end: u128) -> impl Iterator<Item = MatrixSpace> {
        let (field, rows, cols) = (self.inner.field(), self.rows, self.cols);
        self.inner
            .iter_range(start, end)
            .map(move |w| space_from_vectors(field, rows, cols, &w))
    }

    pub fn iter(&self) -> impl Iterator<Item = MatrixSpace> {
        self.iter_range(0, self.len())
    }

    pub fn unrank(&self, index: u128) -> Option<MatrixSpace> {
        self.iter_range(index, index + 1).next()
    }

    pub fn rank_of(&self, s: &MatrixSpace) -> Option<u128> {
        if s.shape() != (self.rows, self.cols) {
            return None;
        }
        let vs = s.basis().iter().map(|b| b.as_slice().to_vec()).collect();
        let w = VectorSubspace::from_canonical(s.field(), self.rows * self.cols, vs);
        self.inner.rank_of(&w)
    }
}

fn space_from_vectors(field: FieldSpec, rows: usize, cols: usize, w: &VectorSubspace) -> MatrixSpace {
    let basis = w
        .basis()
        .iter()
        .map(|v| Matrix::from_vec(field, rows, cols, v.clone()).expect("canonical entries"))
        .collect();
    MatrixSpace::from_canonical(field, rows, cols, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        // (2^9-1)(2^8-1)(2^7-1) / ((2^3-1)(2^2-1)(2-1))
        assert_eq!(gaussian_binomial(9, 3, 2), 511 * 255 * 127 / (7 * 3));
        assert_eq!(gaussian_binomial(9, 3, 2), 788_035);
        assert_eq!(gaussian_binomial(5, 0, 3), 1);
        assert_eq!(gaussian_binomial(5, 5, 3), 1);
    }

    #[test]
    fn enumeration_matches_counts_and_is_distinct() {
        for (n, d, p) in [(2, 1, 2), (4, 2, 2), (3, 1, 3), (4, 2, 3), (3, 0, 5)] {
            let g = Grassmannian::new(gf(p), n, d).unwrap();
            let all: Vec<_> = g.iter().collect();
            assert_eq!(all.len() as u128, g.len());
            assert_eq!(g.pattern_sum(), g.len());
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            for (i, w) in all.iter().enumerate() {
                assert_eq!(w.dim(), d);
                assert_eq!(VectorSubspace::span(gf(p), n, w.basis().to_vec()), *w);
                assert_eq!(g.rank_of(w), Some(i as u128));
            }
        }
    }

    #[test]
    fn ranges_concatenate() {
        let g = Grassmannian::new(gf(3), 4, 2).unwrap();
        let all: Vec<_> = g.iter().collect();
        let mut pieces = Vec::new();
        for (a, b) in [(0, 7), (7, 50), (50, 51), (51, 130)] {
            pieces.extend(g.iter_range(a, b));
        }
        assert_eq!(pieces, all);
        assert_eq!(g.unrank(42), Some(all[42].clone()));
        assert_eq!(g.unrank(g.len()), None);
    }

    #[test]
    fn pivot_sets_are_lexicographic() {
        let g = Grassmannian::new(gf(2), 4, 2).unwrap();
        let pivots: Vec<Vec<usize>> = g.iter().map(|w| w.pivots()).collect();
        let mut sorted = pivots.clone();
        sorted.sort();
        assert_eq!(pivots, sorted);
    }

    #[test]
    fn matrix_grassmannian_counts() {
        let f = gf(2);
        assert_eq!(MatrixGrassmannian::new(f, 2, 2, 4).unwrap().len(), 1);
        let full: Vec<_> = MatrixGrassmannian::new(f, 2, 2, 4).unwrap().iter().collect();
        assert_eq!(full, vec![MatrixSpace::full(f, 2, 2)]);
        assert_eq!(MatrixGrassmannian::new(f, 2, 2, 1).unwrap().iter().count(), 15);
        assert_eq!(MatrixGrassmannian::new(f, 3, 3, 3).unwrap().len(), 788_035);
    }
}
