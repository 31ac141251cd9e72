//! From a square space `V` to the space of bilinear forms `(N, Y) -> Y^T N X`,
//! plus the block calculus used to split `V` along a coordinate flag.
//!
//! Blocks of an `n x n` matrix at split `d` are named
//! `N = [[A, C], [B, D]]` with `A` of size `d x d` and `D` of size
//! `(n-d) x (n-d)`; `R1 = [A C]` and `R2 = [B D]`.

use serde::Serialize;

use crate::constructions::binomial2;
use crate::error::{MswError, Result};
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::spectral::{is_invariant, is_trivial_spectrum, Decision, EigenWitness};
use crate::subspace::{projective_points, VectorSubspace};

/// The space of matrices `M(X)` whose `i`-th row is `X^T B_i^T P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSpace {
    #[serde(skip)]
    pub source: MatrixSpace,
    pub basis_change: Matrix,
    /// `M(e_k)` for each standard basis vector; `M` is linear in `X`.
    pub generators: Vec<Matrix>,
    pub space: MatrixSpace,
}

impl DualSpace {
    pub fn m(&self) -> usize {
        self.source.dim()
    }

    pub fn n(&self) -> usize {
        self.source.cols()
    }

    pub fn matrix_at(&self, x: &[u32]) -> Matrix {
        assert_eq!(x.len(), self.n());
        let mut acc = Matrix::zeros(self.source.field(), self.m(), self.n());
        for (&c, g) in x.iter().zip(&self.generators) {
            acc.add_scaled_assign(c, g);
        }
        acc
    }
}

pub fn dual_space(v: &MatrixSpace, p: Option<&Matrix>) -> Result<DualSpace> {
    let n = v.require_square()?;
    if v.dim() == 0 {
        return Err(MswError::PreconditionViolated(
            "dual space needs a nonzero source space".into(),
        ));
    }
    let f = v.field();
    let basis_change = match p {
        Some(p) => {
            if p.shape() != (n, n) {
                return Err(MswError::ShapeMismatch {
                    expected: (n, n),
                    found: p.shape(),
                });
            }
            if !p.is_invertible() {
                return Err(MswError::Singular);
            }
            p.clone()
        }
        None => Matrix::identity(f, n),
    };
    let generators: Vec<Matrix> = (0..n)
        .map(|k| {
            let rows: Vec<Vec<u32>> = v
                .basis()
                .iter()
                .map(|b| {
                    // X^T B^T P = (B X)^T P with X = e_k, i.e. column k of B, times P
                    let bx = Matrix::from_row_vectors(f, n, &[b.col(k)]);
                    bx.mul(&basis_change).row(0).to_vec()
                })
                .collect();
            Matrix::from_row_vectors(f, n, &rows)
        })
        .collect();
    let space = MatrixSpace::span_unchecked(f, v.dim(), n, generators.iter());
    Ok(DualSpace {
        source: v.clone(),
        basis_change,
        generators,
        space,
    })
}

/// The four blocks of one matrix at a split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocks {
    pub a: Matrix,
    pub c: Matrix,
    pub b: Matrix,
    pub d: Matrix,
}

impl Blocks {
    pub fn of(m: &Matrix, d: usize) -> Self {
        let n = m.rows();
        Self {
            a: m.block(0, 0, d, d),
            c: m.block(0, d, d, n - d),
            b: m.block(d, 0, n - d, d),
            d: m.block(d, d, n - d, n - d),
        }
    }

    pub fn reassemble(&self) -> Matrix {
        Matrix::from_blocks(&self.a, &self.c, &self.b, &self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub split: usize,
    /// Blocks of each canonical basis element.
    pub blocks: Vec<Blocks>,
    pub a_space: MatrixSpace,
    pub c_space: MatrixSpace,
    pub b_space: MatrixSpace,
    pub d_space: MatrixSpace,
}

fn check_split(v: &MatrixSpace, d: usize) -> Result<usize> {
    let n = v.require_square()?;
    if d == 0 || d >= n {
        return Err(MswError::BadSplit { d, n });
    }
    Ok(n)
}

pub fn decompose(v: &MatrixSpace, d: usize) -> Result<BlockDecomposition> {
    let n = check_split(v, d)?;
    let blocks: Vec<Blocks> = v.basis().iter().map(|b| Blocks::of(b, d)).collect();
    let f = v.field();
    let gather = |pick: fn(&Blocks) -> &Matrix, r, c| {
        MatrixSpace::span_unchecked(f, r, c, blocks.iter().map(pick))
    };
    Ok(BlockDecomposition {
        split: d,
        a_space: gather(|b| &b.a, d, d),
        c_space: gather(|b| &b.c, d, n - d),
        b_space: gather(|b| &b.b, n - d, d),
        d_space: gather(|b| &b.d, n - d, n - d),
        blocks,
    })
}

/// `{N in V : the first d rows of N vanish}`.
pub fn kernel_of_first_rows(v: &MatrixSpace, d: usize) -> Result<MatrixSpace> {
    let n = check_split(v, d)?;
    let f = v.field();
    let m = v.dim();
    if m == 0 {
        return Ok(v.clone());
    }
    // columns are vec(R1(B_i)); its kernel holds the coefficient vectors
    let cols: Vec<Vec<u32>> = v
        .basis()
        .iter()
        .map(|b| b.block(0, 0, d, n).as_slice().to_vec())
        .collect();
    let coeff_map = Matrix::from_column_vectors(f, d * n, &cols);
    let kernel = coeff_map.kernel();
    let members: Vec<Matrix> = kernel.basis().iter().map(|c| v.combination(c)).collect();
    Ok(MatrixSpace::span_unchecked(f, n, n, members.iter()))
}

/// `P = [[I_d, 0], [R, I_{n-d}]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShearTransform {
    pub split: usize,
    pub r: Matrix,
}

impl ShearTransform {
    pub fn new(split: usize, r: Matrix) -> Self {
        Self { split, r }
    }

    pub fn size(&self) -> usize {
        self.split + self.r.rows()
    }

    pub fn matrix(&self) -> Matrix {
        let f = self.r.field();
        let (d, k) = (self.split, self.r.rows());
        Matrix::from_blocks(
            &Matrix::identity(f, d),
            &Matrix::zeros(f, d, k),
            &self.r,
            &Matrix::identity(f, k),
        )
    }

    pub fn inverse_matrix(&self) -> Matrix {
        Self::new(self.split, self.r.neg()).matrix()
    }

    /// `P N P^{-1}` by the closed block formula
    /// `[[A - C R, C], [B + R A - R C R - D R, D + R C]]`.
    pub fn conjugate(&self, n: &Matrix) -> Matrix {
        let blk = Blocks::of(n, self.split);
        let r = &self.r;
        let cr = blk.c.mul(r);
        let ra = r.mul(&blk.a);
        let rc = r.mul(&blk.c);
        Blocks {
            a: blk.a.sub(&cr),
            c: blk.c.clone(),
            b: blk.b.add(&ra).sub(&r.mul(&cr)).sub(&blk.d.mul(r)),
            d: blk.d.add(&rc),
        }
        .reassemble()
    }
}

pub fn shear_conjugate(v: &MatrixSpace, t: &ShearTransform) -> Result<MatrixSpace> {
    let n = check_split(v, t.split)?;
    if t.r.shape() != (n - t.split, t.split) {
        return Err(MswError::ShapeMismatch {
            expected: (n - t.split, t.split),
            found: t.r.shape(),
        });
    }
    Ok(v.map_basis(n, n, |b| t.conjugate(b)))
}

/// A shear `R` together with the vector it was built from: `R C(N0) x = x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShearWitness {
    pub transform: ShearTransform,
    pub x: Vec<u32>,
    /// `C(N0) x`, nonzero.
    pub cx: Vec<u32>,
}

/// Build `R = x u^T / (u^T C(N0) x)` for the first line `x` with `C(N0) x != 0`
/// and `u` the first coordinate functional not vanishing on `C(N0) x`.
pub fn build_shear_witness(v: &MatrixSpace, d: usize, n0: &Matrix) -> Result<Option<ShearWitness>> {
    let n = check_split(v, d)?;
    if !v.contains(n0) {
        return Err(MswError::NotMember);
    }
    let f = v.field();
    let c = Blocks::of(n0, d).c;
    if c.is_zero() {
        return Ok(None);
    }
    let (x, cx) = projective_points(f, n - d)
        .map(|x| {
            let cx = c.apply(&x);
            (x, cx)
        })
        .find(|(_, cx)| cx.iter().any(|&e| e != 0))
        .expect("nonzero block has a non-kernel vector");
    let k = cx.iter().position(|&e| e != 0).expect("nonzero");
    let scale = f.inv(cx[k]).expect("nonzero");
    let r = Matrix::from_fn(f, n - d, d, |i, j| {
        if j == k {
            f.mul(x[i], scale) as i64
        } else {
            0
        }
    });
    Ok(Some(ShearWitness {
        transform: ShearTransform::new(d, r),
        x,
        cx,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSplit {
    /// Columns: basis of `W` first, then standard complement vectors.
    pub basis_change: Matrix,
    pub conjugated: MatrixSpace,
    pub split: usize,
    pub a_space: MatrixSpace,
    pub b_space: MatrixSpace,
}

/// Conjugate into a basis adapted to the invariant subspace `W`, so that every
/// element becomes `[[A, *], [0, B]]`.
pub fn split_along_invariant(v: &MatrixSpace, w: &VectorSubspace) -> Result<InvariantSplit> {
    let n = v.require_square()?;
    if w.ambient() != n || w.is_zero() || w.is_full() || !is_invariant(v, w) {
        return Err(MswError::NotInvariant);
    }
    let f = v.field();
    let mut cols = w.basis().to_vec();
    cols.extend(w.standard_complement());
    let g = Matrix::from_column_vectors(f, n, &cols);
    let ginv = g.inverse()?;
    let conjugated = v.map_basis(n, n, |b| ginv.mul(b).mul(&g));
    let p = w.dim();
    debug_assert!(conjugated
        .basis()
        .iter()
        .all(|b| b.block(p, 0, n - p, p).is_zero()));
    let a_space = conjugated.map_basis(p, p, |b| b.block(0, 0, p, p));
    let b_space = conjugated.map_basis(n - p, n - p, |b| b.block(p, p, n - p, n - p));
    Ok(InvariantSplit {
        basis_change: g,
        conjugated,
        split: p,
        a_space,
        b_space,
    })
}

/// The shear step of the extremal analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShearStep {
    pub witness: ShearWitness,
    /// `R C(N0)`; it fixes `x`, so it has eigenvalue 1.
    pub rc: Matrix,
    pub rc_fixes_x: bool,
    /// `D(N0) + R C(N0)` lies in the D-compression of the sheared space.
    pub shifted_block_in_sheared: bool,
    /// `R C(N0)` lies in `D(V)`.
    pub rc_in_d_space: bool,
    /// The sheared space's `Ker R1` is still `Ker R1` of `V`.
    pub kernel_preserved: bool,
}

/// Bookkeeping of the equality case at a coordinate split `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalSplit {
    pub split: usize,
    pub kernel_dim: usize,
    pub d_kernel_dim: usize,
    /// `dim D(Ker R1) = C(n-d, 2)`.
    pub point_a: bool,
    /// Every matrix supported on the lower-left block lies in `V`.
    pub point_b: bool,
    pub d_kernel_equals_d_space: bool,
    pub d_space_trivial_spectrum: Decision<EigenWitness>,
    /// Failure witness: an element with `C(N0) != 0`.
    pub c_block_vanishes: Decision<Matrix>,
    /// When `C` vanishes on `V`: the invariant subspace `{0} x K^{n-d}`.
    pub invariant_tail: Option<VectorSubspace>,
    pub shear: Option<ShearStep>,
}

pub fn extremal_split_analysis(v: &MatrixSpace, d: usize, cap: u64) -> Result<ExtremalSplit> {
    let n = check_split(v, d)?;
    let f = v.field();
    let kernel = kernel_of_first_rows(v, d)?;
    let d_kernel = decompose(&kernel, d)?.d_space;
    let d_space = decompose(v, d)?.d_space;
    let point_b = (d..n).all(|i| (0..d).all(|j| v.contains(&Matrix::unit(f, n, n, i, j))));
    let n0 = v.basis().iter().find(|b| !Blocks::of(b, d).c.is_zero()).cloned();
    let c_block_vanishes = Decision::from_counterexample(n0.clone());
    let invariant_tail = n0.is_none().then(|| {
        VectorSubspace::span(f, n, (d..n).map(|i| crate::subspace::unit_vector(n, i)).collect())
    });
    let shear = match n0 {
        Some(n0) => {
            let witness = build_shear_witness(v, d, &n0)?.expect("C(N0) is nonzero");
            let blk = Blocks::of(&n0, d);
            let rc = witness.transform.r.mul(&blk.c);
            let sheared = shear_conjugate(v, &witness.transform)?;
            let sheared_d = decompose(&sheared, d)?.d_space;
            Some(ShearStep {
                rc_fixes_x: rc.apply(&witness.x) == witness.x,
                shifted_block_in_sheared: sheared_d.contains(&blk.d.add(&rc)),
                rc_in_d_space: d_space.contains(&rc),
                kernel_preserved: kernel_of_first_rows(&sheared, d)? == kernel,
                rc,
                witness,
            })
        }
        None => None,
    };
    Ok(ExtremalSplit {
        split: d,
        kernel_dim: kernel.dim(),
        d_kernel_dim: d_kernel.dim(),
        point_a: d_kernel.dim() == binomial2(n - d),
        point_b,
        d_kernel_equals_d_space: d_kernel == d_space,
        d_space_trivial_spectrum: is_trivial_spectrum(&d_space, cap)?,
        c_block_vanishes,
        invariant_tail,
        shear,
    })
}
