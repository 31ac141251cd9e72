//! Subspaces of GF(p)^n held in canonical reduced row-echelon form.

use serde::{Deserialize, Serialize};

use crate::field::FieldSpec;
use crate::matrix::{eliminate, Matrix};

/// A subspace of GF(p)^n. The basis is the nonzero rows of an RREF, so two
/// subspaces are equal exactly when their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorSubspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<Vec<u32>>,
}

impl VectorSubspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Self {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        Self {
            field,
            ambient,
            basis,
        }
    }

    /// Span of arbitrary vectors (entries already reduced mod p).
    pub fn span(field: FieldSpec, ambient: usize, vectors: Vec<Vec<u32>>) -> Self {
        let rows = vectors.len();
        let mut buf = Vec::with_capacity(rows * ambient);
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
            buf.extend_from_slice(v);
        }
        let pivots = eliminate(field, &mut buf, rows, ambient, ambient);
        let basis = (0..pivots.len())
            .map(|i| buf[i * ambient..(i + 1) * ambient].to_vec())
            .collect();
        Self {
            field,
            ambient,
            basis,
        }
    }

    /// Trusts that `basis` already is a canonical RREF basis.
    pub(crate) fn from_canonical(field: FieldSpec, ambient: usize, basis: Vec<Vec<u32>>) -> Self {
        Self {
            field,
            ambient,
            basis,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|v| v.iter().position(|&x| x != 0).expect("nonzero basis row"))
            .collect()
    }

    /// `dim x n` matrix whose rows are the basis.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_row_vectors(self.field, self.ambient, &self.basis)
    }

    /// `n x dim` matrix whose columns are the basis.
    pub fn column_matrix(&self) -> Matrix {
        Matrix::from_column_vectors(self.field, self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = v.to_vec();
        for (b, piv) in self.basis.iter().zip(self.pivots()) {
            let c = r[piv];
            if c != 0 {
                let neg = f.neg(c);
                for (x, &y) in r.iter_mut().zip(b) {
                    *x = f.mul_add(*x, neg, y);
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.field, self.ambient, vs)
    }

    /// `{y : y . x = 0 for all x in self}`.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.field, self.ambient);
        }
        self.basis_matrix().kernel()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Extend the basis with the lowest-index standard vectors to a basis of the
    /// whole space; the returned vectors are only the added ones.
    pub fn standard_complement(&self) -> Vec<Vec<u32>> {
        let mut current = self.clone();
        let mut added = Vec::new();
        for i in 0..self.ambient {
            if current.is_full() {
                break;
            }
            let e = unit_vector(self.ambient, i);
            if !current.contains(&e) {
                current = current.sum(&Self::span(self.field, self.ambient, vec![e.clone()]));
                added.push(e);
            }
        }
        added
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Nonzero vectors whose first nonzero coordinate is 1, in lexicographic order.
/// One representative per line of GF(p)^n.
pub fn projective_points(field: FieldSpec, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let p = field.p();
    (0..n).rev().flat_map(move |lead| {
        let tail = n - lead - 1;
        let count = field.power_count(tail) as u64;
        (0..count).map(move |mut k| {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            for j in (lead + 1..n).rev() {
                v[j] = (k % p as u64) as u32;
                k /= p as u64;
            }
            v
        })
    })
}

/// All vectors of GF(p)^n in lexicographic order.
pub fn all_vectors(field: FieldSpec, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let p = field.p() as u64;
    let count = field.power_count(n) as u64;
    (0..count).map(move |mut k| {
        let mut v = vec![0u32; n];
        for j in (0..n).rev() {
            v[j] = (k % p) as u32;
            k /= p;
        }
        v
    })
}
