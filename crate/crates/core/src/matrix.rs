//! Dense matrices over GF(p) and the eliminations everything else is built on.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::subspace::VectorSubspace;

/// A dense `rows x cols` matrix over GF(p), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Invertible `T` with `T * A = reduced`.
    pub transform: Matrix,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// `s * I`
    pub fn scalar(field: FieldSpec, n: usize, s: u32) -> Self {
        Self::identity(field, n).scale(s)
    }

    /// The elementary matrix `e_i e_j^T`.
    pub fn unit(field: FieldSpec, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.data[i * cols + j] = 1;
        m
    }

    /// Build from row-major canonical entries; every entry must lie in `[0, p)`.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MswError::InvalidArgument(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.p()) {
            return Err(MswError::EntryOutOfRange {
                value: bad as u64,
                p: field.p(),
            });
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Build from signed integers, reducing modulo p. Rows must be equally long.
    pub fn from_rows<R: AsRef<[i64]>>(field: FieldSpec, rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(MswError::ShapeMismatch {
                    expected: (r, c),
                    found: (r, row.len()),
                });
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(f(i, j)));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A column vector (`n x 1`).
    pub fn column(field: FieldSpec, v: &[u32]) -> Self {
        Self {
            field,
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_row_vectors(field: FieldSpec, cols: usize, vs: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vs.len() * cols);
        for v in vs {
            debug_assert_eq!(v.len(), cols);
            data.extend_from_slice(v);
        }
        Self {
            field,
            rows: vs.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_column_vectors(field: FieldSpec, rows: usize, vs: &[Vec<u32>]) -> Self {
        Self::from_row_vectors(field, rows, vs).transpose()
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries (the vectorization used to canonicalize spaces).
    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.field, other.field, "field mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Self { data, ..*self }
    }

    /// In-place `self += s * other`.
    pub fn add_scaled_assign(&mut self, s: u32, other: &Self) {
        debug_assert_eq!(self.shape(), other.shape());
        if s == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.mul_add(*a, s, b);
        }
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.field;
        Self {
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
            ..*self
        }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
            ..*self
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = self.field.p() as u64;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(self.field, n, m);
        let mut acc = vec![0u64; m];
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            for t in 0..k {
                let a = self.data[i * k + t] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for (slot, &b) in acc.iter_mut().zip(brow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for j in 0..m {
                out.data[i * m + j] = acc[j] as u32;
            }
        }
        out
    }

    /// `A x` for a vector `x`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "shape mismatch in apply");
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(MswError::NotSquare(self.rows, self.cols));
        }
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The `h x w` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        let mut out = Self::zeros(self.field, h, w);
        for i in 0..h {
            out.data[i * w..(i + 1) * w]
                .copy_from_slice(&self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + w]);
        }
        out
    }

    /// Assemble `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        let mut out = Self::zeros(a.field, rows, cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.data[(r0 + i) * cols + c0 + j] = blk.get(i, j);
                }
            }
        }
        out
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(field: FieldSpec, cols: usize, parts: &[Self]) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Reduced row-echelon form with the recorded left transform.
    ///
    /// Pivots are chosen leftmost column first, topmost available row first.
    pub fn rref(&self) -> Rref {
        let (m, n) = self.shape();
        // Augment [A | I] and eliminate only on the first n columns.
        let w = n + m;
        let mut buf = vec![0u32; m * w];
        for i in 0..m {
            buf[i * w..i * w + n].copy_from_slice(self.row(i));
            buf[i * w + n + i] = 1;
        }
        let pivots = eliminate(self.field, &mut buf, m, w, n);
        let mut reduced = Self::zeros(self.field, m, n);
        let mut transform = Self::zeros(self.field, m, m);
        for i in 0..m {
            reduced.data[i * n..(i + 1) * n].copy_from_slice(&buf[i * w..i * w + n]);
            transform.data[i * m..(i + 1) * m].copy_from_slice(&buf[i * w + n..(i + 1) * w]);
        }
        Rref {
            reduced,
            rank: pivots.len(),
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        rank_in_place(self.field, &mut buf, self.rows, self.cols)
    }

    /// `{x : A x = 0}` in canonical form.
    pub fn kernel(&self) -> VectorSubspace {
        let n = self.cols;
        let mut buf = self.data.clone();
        let pivots = eliminate(self.field, &mut buf, self.rows, n, n);
        let f = self.field;
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut vs = Vec::with_capacity(n - pivots.len());
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(buf[r * n + free]);
            }
            vs.push(v);
        }
        VectorSubspace::span(f, n, vs)
    }

    /// `{y : y^T A = 0}`.
    pub fn left_kernel(&self) -> VectorSubspace {
        self.transpose().kernel()
    }

    /// Column space as a subspace of `GF(p)^rows`.
    pub fn image(&self) -> VectorSubspace {
        VectorSubspace::span(self.field, self.rows, self.transpose().to_rows())
    }

    pub fn det(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(MswError::NotSquare(self.rows, self.cols));
        }
        let mut buf = self.data.clone();
        Ok(det_in_place(self.field, &mut buf, self.rows))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(MswError::NotSquare(self.rows, self.cols));
        }
        let r = self.rref();
        if r.rank < self.rows {
            return Err(MswError::Singular);
        }
        Ok(r.transform)
    }

    /// All `lambda` in GF(p) with `det(N - lambda I) = 0`, by evaluating at every field element.
    pub fn eigenvalues_in_field(&self) -> Result<BTreeSet<u32>> {
        if !self.is_square() {
            return Err(MswError::NotSquare(self.rows, self.cols));
        }
        Ok(self
            .field
            .elements()
            .filter(|&l| self.has_eigenvalue(l))
            .collect())
    }

    /// Whether `det(N - lambda I) = 0`. `N` must be square.
    pub fn has_eigenvalue(&self, lambda: u32) -> bool {
        let n = self.rows;
        let f = self.field;
        let mut buf = self.data.clone();
        for i in 0..n {
            buf[i * n + i] = f.sub(buf[i * n + i], lambda);
        }
        rank_in_place(f, &mut buf, n, n) < n
    }

    /// First nonzero eigenvalue in the field, scanning `1..p` in order.
    pub fn first_nonzero_eigenvalue(&self) -> Option<u32> {
        (1..self.field.p()).find(|&l| self.has_eigenvalue(l))
    }

    /// `N^n = 0` where `n` is the side length.
    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.pow(self.rows as u32)?.is_zero())
    }
}

/// Gauss-Jordan elimination on a row-major `rows x width` buffer, pivoting only in
/// the first `pivot_cols` columns. Returns the pivot columns.
pub(crate) fn eliminate(
    f: FieldSpec,
    buf: &mut [u32],
    rows: usize,
    width: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * width + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..width {
                buf.swap(pr * width + j, r * width + j);
            }
        }
        let inv = f.inv(buf[r * width + c]).expect("nonzero pivot");
        if inv != 1 {
            for j in c..width {
                buf[r * width + j] = f.mul(buf[r * width + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = buf[i * width + c];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for j in c..width {
                let v = buf[r * width + j];
                if v != 0 {
                    buf[i * width + j] = f.mul_add(buf[i * width + j], neg, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination only (no back-substitution, no normalization).
pub(crate) fn rank_in_place(f: FieldSpec, buf: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                buf.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(buf[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            let factor = buf[i * cols + c];
            if factor == 0 {
                continue;
            }
            let s = f.neg(f.mul(factor, inv));
            for j in c..cols {
                let v = buf[r * cols + j];
                if v != 0 {
                    buf[i * cols + j] = f.mul_add(buf[i * cols + j], s, v);
                }
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn det_in_place(f: FieldSpec, buf: &mut [u32], n: usize) -> u32 {
    let mut det = 1u32;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| buf[i * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            for j in c..n {
                buf.swap(pr * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let piv = buf[c * n + c];
        det = f.mul(det, piv);
        let inv = f.inv(piv).expect("nonzero pivot");
        for i in c + 1..n {
            let factor = buf[i * n + c];
            if factor == 0 {
                continue;
            }
            let s = f.neg(f.mul(factor, inv));
            for j in c..n {
                let v = buf[c * n + j];
                if v != 0 {
                    buf[i * n + j] = f.mul_add(buf[i * n + j], s, v);
                }
            }
        }
    }
    det
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.field, self.to_rows())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized as a list of rows.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn rref_identity() {
        let f = gf(2);
        let r = Matrix::identity(f, 3).rref();
        assert_eq!(r.reduced, Matrix::identity(f, 3));
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_equal_rows() {
        let f = gf(2);
        let a = Matrix::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        let r = a.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced, Matrix::from_rows(f, &[[1, 1], [0, 0]]).unwrap());
        assert_eq!(r.transform.mul(&a), r.reduced);
        assert!(r.transform.is_invertible());
    }

    #[test]
    fn rref_antidiagonal_gf3() {
        let f = gf(3);
        let a = Matrix::from_rows(f, &[[0, 1], [2, 0]]).unwrap();
        let r = a.rref();
        assert_eq!(r.reduced, Matrix::identity(f, 2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.transform.mul(&a), r.reduced);
    }

    #[test]
    fn kernels() {
        let f = gf(3);
        assert_eq!(Matrix::identity(f, 2).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(f, 2, 2).kernel(), VectorSubspace::full(f, 2));
        let e12 = Matrix::unit(f, 2, 2, 0, 1);
        assert_eq!(e12.kernel(), VectorSubspace::span(f, 2, vec![vec![1, 0]]));
    }

    #[test]
    fn inverses() {
        let f3 = gf(3);
        assert_eq!(Matrix::identity(f3, 3).inverse().unwrap(), Matrix::identity(f3, 3));
        let a = Matrix::from_rows(f3, &[[0, 1], [2, 0]]).unwrap();
        let expected = Matrix::from_rows(f3, &[[0, 2], [1, 0]]).unwrap();
        assert_eq!(a.inverse().unwrap(), expected);
        assert_eq!(a.mul(&expected), Matrix::identity(f3, 2));
        let f2 = gf(2);
        let s = Matrix::from_rows(f2, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(s.inverse(), Err(MswError::Singular));
        assert_eq!(
            Matrix::zeros(f2, 2, 3).inverse(),
            Err(MswError::NotSquare(2, 3))
        );
    }

    #[test]
    fn eigenvalues() {
        let f3 = gf(3);
        let nil = Matrix::from_rows(f3, &[[0, 1, 2], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert_eq!(nil.eigenvalues_in_field().unwrap(), BTreeSet::from([0]));
        assert_eq!(
            Matrix::identity(f3, 2).eigenvalues_in_field().unwrap(),
            BTreeSet::from([1])
        );
        // Alternating 3x3 over GF(3) with a^2 + b^2 + c^2 = 2, so lambda^2 = 1.
        let alt = Matrix::from_rows(f3, &[[0, 1, 1], [2, 0, 0], [2, 0, 0]]).unwrap();
        let ev = alt.eigenvalues_in_field().unwrap();
        assert!(ev.contains(&1));
        assert_eq!(ev, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn nilpotency() {
        let f2 = gf(2);
        let su = Matrix::from_rows(f2, &[[0, 1, 1], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert!(su.is_nilpotent().unwrap());
        assert!(!Matrix::identity(f2, 1).is_nilpotent().unwrap());
        let f3 = gf(3);
        let a = Matrix::from_rows(f3, &[[0, 1], [2, 0]]).unwrap();
        assert_eq!(a.mul(&a), Matrix::scalar(f3, 2, 2));
        assert!(!a.is_nilpotent().unwrap());
    }

    #[test]
    fn det_matches_rank() {
        let f5 = gf(5);
        let a = Matrix::from_rows(f5, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(a.det().unwrap(), f5.reduce(4 - 6));
        let b = Matrix::from_rows(f5, &[[1, 2], [2, 4]]).unwrap();
        assert_eq!(b.det().unwrap(), 0);
    }

    #[test]
    fn blocks_reassemble() {
        let f = gf(7);
        let n = Matrix::from_fn(f, 4, 4, |i, j| (3 * i + j * j) as i64);
        let a = n.block(0, 0, 1, 1);
        let c = n.block(0, 1, 1, 3);
        let b = n.block(1, 0, 3, 1);
        let d = n.block(1, 1, 3, 3);
        assert_eq!(Matrix::from_blocks(&a, &c, &b, &d), n);
    }

    #[test]
    fn serializes_as_rows() {
        let f = gf(3);
        let a = Matrix::from_rows(f, &[[0, 1], [2, 0]]).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[0,1],[2,0]]");
    }
}
