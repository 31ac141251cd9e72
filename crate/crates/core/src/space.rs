//! Linear subspaces of `Mat_{m,n}(GF(p))`.
//!
//! A [`MatrixSpace`] keeps the RREF of its row-major vectorized basis, so
//! equality of spaces is equality of basis lists. Elements are enumerated in
//! coefficient-lexicographic order (first coefficient most significant).
//! Scale-invariant questions (ranks, eigenvalues, nilpotency) only look at
//! the normalized elements, whose leading coefficient is 1. In the full
//! order the first element of every line is the normalized one, so a first
//! witness found this way is also the first witness in the full order.

use serde::{Deserialize, Serialize};

use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::matrix::{eliminate, rank_in_place, Matrix};
use crate::subspace::VectorSubspace;

/// Default ceiling on the number of elements an exact enumeration may visit.
pub const DEFAULT_CAP: u64 = 1 << 22;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixSpace {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    basis: Vec<Matrix>,
}

/// Number of elements of each rank `0..=min(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub counts: Vec<u64>,
}

impl RankProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Largest rank with a nonzero count.
    pub fn max_rank(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

impl MatrixSpace {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            basis: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let basis = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| Matrix::unit(field, rows, cols, i, j))
            .collect();
        Self {
            field,
            rows,
            cols,
            basis,
        }
    }

    /// Canonical span of `mats`, all of which must be `rows x cols` over `field`.
    pub fn span(field: FieldSpec, rows: usize, cols: usize, mats: &[Matrix]) -> Result<Self> {
        for m in mats {
            if m.field() != field {
                return Err(MswError::FieldMismatch {
                    left: field.p(),
                    right: m.field().p(),
                });
            }
            if m.shape() != (rows, cols) {
                return Err(MswError::ShapeMismatch {
                    expected: (rows, cols),
                    found: m.shape(),
                });
            }
        }
        Ok(Self::span_unchecked(field, rows, cols, mats.iter()))
    }

    pub(crate) fn span_unchecked<'a>(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mats: impl Iterator<Item = &'a Matrix>,
    ) -> Self {
        let width = rows * cols;
        let mut buf = Vec::new();
        let mut count = 0;
        for m in mats {
            buf.extend_from_slice(m.as_slice());
            count += 1;
        }
        let rank = eliminate(field, &mut buf, count, width, width).len();
        let basis = (0..rank)
            .map(|i| {
                Matrix::from_vec(field, rows, cols, buf[i * width..(i + 1) * width].to_vec())
                    .expect("reduced entries")
            })
            .collect();
        Self {
            field,
            rows,
            cols,
            basis,
        }
    }

    /// Trusts that the vectorized basis is already in RREF.
    pub(crate) fn from_canonical(field: FieldSpec, rows: usize, cols: usize, basis: Vec<Matrix>) -> Self {
        Self {
            field,
            rows,
            cols,
            basis,
        }
    }

    /// Span of `f(B)` over the basis `B`.
    pub fn map_basis(&self, rows: usize, cols: usize, f: impl Fn(&Matrix) -> Matrix) -> Self {
        let images: Vec<Matrix> = self.basis.iter().map(f).collect();
        Self::span_unchecked(self.field, rows, cols, images.iter())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MswError::NotSquare(self.rows, self.cols))
        }
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.as_slice().iter().position(|&x| x != 0).expect("nonzero basis"))
            .collect()
    }

    /// Coordinates of `m` in the canonical basis, or `None` if `m` is not a member.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<u32>> {
        if m.shape() != self.shape() || m.field() != self.field {
            return None;
        }
        let coeffs: Vec<u32> = self.pivots().iter().map(|&p| m.as_slice()[p]).collect();
        (self.combination(&coeffs) == *m).then_some(coeffs)
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.coordinates(m).is_some()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Self::span_unchecked(
            self.field,
            self.rows,
            self.cols,
            self.basis.iter().chain(other.basis.iter()),
        )
    }

    pub fn combination(&self, coeffs: &[u32]) -> Matrix {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut acc = Matrix::zeros(self.field, self.rows, self.cols);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            acc.add_scaled_assign(*c, b);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        self.map_basis(self.cols, self.rows, Matrix::transpose)
    }

    /// `p^dim`, saturating.
    pub fn element_count(&self) -> u128 {
        self.field.power_count(self.dim())
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        let count = self.element_count();
        if count > cap as u128 {
            return Err(MswError::EnumerationTooLarge { count, cap });
        }
        Ok(())
    }

    /// Every element exactly once, coefficient-lexicographic.
    pub fn elements(&self, cap: u64) -> Result<Elements<'_>> {
        self.check_cap(cap)?;
        Ok(Elements {
            space: self,
            digits: vec![0; self.dim()],
            current: Matrix::zeros(self.field, self.rows, self.cols),
            started: false,
        })
    }

    /// Visit the normalized nonzero elements (leading coefficient 1) in
    /// enumeration order until `visit` returns `true`; returns that element.
    pub fn find_normalized(
        &self,
        cap: u64,
        mut visit: impl FnMut(&Matrix) -> bool,
    ) -> Result<Option<Matrix>> {
        self.check_cap(cap)?;
        let p = self.field.p();
        let dim = self.dim();
        for lead in (0..dim).rev() {
            let mut current = self.basis[lead].clone();
            let mut digits = vec![0u32; dim];
            'line: loop {
                if visit(&current) {
                    return Ok(Some(current));
                }
                // odometer over the coefficients after `lead`, last fastest
                let mut k = dim;
                loop {
                    if k == lead + 1 {
                        break 'line;
                    }
                    k -= 1;
                    current.add_scaled_assign(1, &self.basis[k]);
                    digits[k] += 1;
                    if digits[k] < p {
                        break;
                    }
                    digits[k] = 0;
                }
            }
        }
        Ok(None)
    }

    /// Largest rank of any element, with the first element attaining it.
    pub fn upper_rank(&self, cap: u64) -> Result<(usize, Matrix)> {
        let ceiling = self.rows.min(self.cols);
        let mut best = (0, Matrix::zeros(self.field, self.rows, self.cols));
        let mut buf = Vec::with_capacity(self.rows * self.cols);
        self.find_normalized(cap, |m| {
            buf.clear();
            buf.extend_from_slice(m.as_slice());
            let r = rank_in_place(self.field, &mut buf, self.rows, self.cols);
            if r > best.0 {
                best = (r, m.clone());
            }
            best.0 == ceiling
        })?;
        Ok(best)
    }

    /// Whether some element has rank at least `target`.
    pub fn reaches_rank(&self, target: usize, cap: u64) -> Result<bool> {
        if target == 0 {
            return Ok(true);
        }
        let mut buf = Vec::with_capacity(self.rows * self.cols);
        Ok(self
            .find_normalized(cap, |m| {
                buf.clear();
                buf.extend_from_slice(m.as_slice());
                rank_in_place(self.field, &mut buf, self.rows, self.cols) >= target
            })?
            .is_some())
    }

    pub fn rank_profile(&self, cap: u64) -> Result<RankProfile> {
        let mut counts = vec![0u64; self.rows.min(self.cols) + 1];
        counts[0] = 1;
        let scale = self.field.p() as u64 - 1;
        let mut buf = Vec::with_capacity(self.rows * self.cols);
        self.find_normalized(cap, |m| {
            buf.clear();
            buf.extend_from_slice(m.as_slice());
            counts[rank_in_place(self.field, &mut buf, self.rows, self.cols)] += scale;
            false
        })?;
        Ok(RankProfile { counts })
    }

    /// `P * S * Q`.
    pub fn transform_equivalent(&self, p: &Matrix, q: &Matrix) -> Result<Self> {
        if p.shape() != (self.rows, self.rows) {
            return Err(MswError::ShapeMismatch {
                expected: (self.rows, self.rows),
                found: p.shape(),
            });
        }
        if q.shape() != (self.cols, self.cols) {
            return Err(MswError::ShapeMismatch {
                expected: (self.cols, self.cols),
                found: q.shape(),
            });
        }
        if !p.is_invertible() || !q.is_invertible() {
            return Err(MswError::Singular);
        }
        Ok(self.map_basis(self.rows, self.cols, |b| p.mul(b).mul(q)))
    }

    /// `P * S * P^{-1}`.
    pub fn transform_similar(&self, p: &Matrix) -> Result<Self> {
        let n = self.require_square()?;
        if p.shape() != (n, n) {
            return Err(MswError::ShapeMismatch {
                expected: (n, n),
                found: p.shape(),
            });
        }
        let pinv = p.inverse()?;
        Ok(self.map_basis(n, n, |b| p.mul(b).mul(&pinv)))
    }

    /// `span{B Q_W}` where the columns of `Q_W` are the canonical basis of `W`.
    pub fn restrict_columns(&self, w: &VectorSubspace) -> Self {
        assert_eq!(w.ambient(), self.cols, "column subspace ambient mismatch");
        let q = w.column_matrix();
        self.map_basis(self.rows, w.dim(), |b| b.mul(&q))
    }

    /// `span{P_U B}` where the rows of `P_U` are the canonical basis of `U`.
    pub fn compress_rows(&self, u: &VectorSubspace) -> Self {
        assert_eq!(u.ambient(), self.rows, "row functional ambient mismatch");
        let p = u.basis_matrix();
        self.map_basis(u.dim(), self.cols, |b| p.mul(b))
    }

    /// `{x : B x = 0 for every B}`.
    pub fn common_kernel(&self) -> VectorSubspace {
        if self.basis.is_empty() {
            return VectorSubspace::full(self.field, self.cols);
        }
        Matrix::vstack(self.field, self.cols, &self.basis).kernel()
    }

    /// `{y : y^T B = 0 for every B}`.
    pub fn common_left_kernel(&self) -> VectorSubspace {
        self.transpose().common_kernel()
    }

    /// `S X = {B X : B in S}`.
    pub fn image_of_vector(&self, x: &[u32]) -> VectorSubspace {
        let images = self.basis.iter().map(|b| b.apply(x)).collect();
        VectorSubspace::span(self.field, self.rows, images)
    }

    /// The space as a subspace of `K^{rows * cols}` under row-major vectorization.
    pub fn vectorized(&self) -> VectorSubspace {
        let basis = self.basis.iter().map(|b| b.as_slice().to_vec()).collect();
        VectorSubspace::from_canonical(self.field, self.rows * self.cols, basis)
    }

    /// Sum of the column spaces of all elements.
    pub fn column_span(&self) -> VectorSubspace {
        let mut vs = Vec::new();
        for b in &self.basis {
            vs.extend(b.transpose().to_rows());
        }
        VectorSubspace::span(self.field, self.rows, vs)
    }
}

/// Iterator returned by [`MatrixSpace::elements`].
pub struct Elements<'a> {
    space: &'a MatrixSpace,
    digits: Vec<u32>,
    current: Matrix,
    started: bool,
}

impl Iterator for Elements<'_> {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let p = self.space.field.p();
        let mut k = self.digits.len();
        while k > 0 {
            k -= 1;
            self.current.add_scaled_assign(1, &self.space.basis[k]);
            self.digits[k] += 1;
            if self.digits[k] < p {
                return Some(self.current.clone());
            }
            self.digits[k] = 0;
        }
        None
    }
}

impl std::fmt::Debug for MatrixSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixSpace")
            .field("field", &self.field)
            .field("shape", &(self.rows, self.cols))
            .field("basis", &self.basis)
            .finish()
    }
}

impl Serialize for MatrixSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MatrixSpace", 5)?;
        st.serialize_field("p", &self.field.p())?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}
