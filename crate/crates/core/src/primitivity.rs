//! Non-degeneracy conditions (i)-(iv) on matrix spaces, the reduced /
//! semi-primitive / primitive predicates, and the minimal degenerate
//! column compression.
//!
//! Conditions (iii) and (iv) quantify over hyperplanes of the column space and
//! of the row-functional space: a space is equivalent to one whose first
//! `n - 1` columns have smaller upper rank exactly when its restriction to
//! some hyperplane does.

use serde::Serialize;

use crate::error::{MswError, Result};
use crate::grassmann::Grassmannian;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::spectral::Decision;
use crate::subspace::VectorSubspace;

pub const CONVENTION_III_SINGLE_COLUMN: &str =
    "condition (iii) taken as vacuously true for a single column (n = 1)";
pub const CONVENTION_IV_SINGLE_ROW: &str =
    "condition (iv) taken as vacuously true for a single row (m = 1)";
pub const NOTE_MAT_1_2: &str = "space is Mat_{1,2} = S(phi_2), the m = 1, n = 2 extremal case";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitivityReport {
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    pub urk: usize,
    /// Failure witness: a nonzero common kernel vector.
    pub condition_i: Decision<Vec<u32>>,
    /// Failure witness: a nonzero common left-kernel vector.
    pub condition_ii: Decision<Vec<u32>>,
    /// Failure witness: a column hyperplane on which the upper rank drops.
    pub condition_iii: Decision<VectorSubspace>,
    /// Failure witness: a row-functional hyperplane on which the upper rank drops.
    pub condition_iv: Decision<VectorSubspace>,
    pub reduced: bool,
    pub semi_primitive: bool,
    pub primitive: bool,
    pub conventions: Vec<&'static str>,
    pub notes: Vec<&'static str>,
}

pub fn condition_i(space: &MatrixSpace) -> Decision<Vec<u32>> {
    let k = space.common_kernel();
    Decision::from_counterexample(k.basis().first().cloned())
}

pub fn condition_ii(space: &MatrixSpace) -> Decision<Vec<u32>> {
    let k = space.common_left_kernel();
    Decision::from_counterexample(k.basis().first().cloned())
}

fn hyperplane_scan(
    space: &MatrixSpace,
    ambient: usize,
    cap: u64,
    squeeze: impl Fn(&VectorSubspace) -> MatrixSpace,
) -> Result<Decision<VectorSubspace>> {
    let (urk, _) = space.upper_rank(cap)?;
    for w in Grassmannian::new(space.field(), ambient, ambient - 1)?.iter() {
        if !squeeze(&w).reaches_rank(urk, cap)? {
            return Ok(Decision::no(w));
        }
    }
    Ok(Decision::yes())
}

/// Upper rank survives restriction to every column hyperplane.
pub fn condition_iii(space: &MatrixSpace, cap: u64) -> Result<Decision<VectorSubspace>> {
    if space.cols() <= 1 {
        return Ok(Decision::yes());
    }
    hyperplane_scan(space, space.cols(), cap, |w| space.restrict_columns(w))
}

/// Upper rank survives compression to every row-functional hyperplane.
pub fn condition_iv(space: &MatrixSpace, cap: u64) -> Result<Decision<VectorSubspace>> {
    if space.rows() <= 1 {
        return Ok(Decision::yes());
    }
    hyperplane_scan(space, space.rows(), cap, |u| space.compress_rows(u))
}

pub fn classify(space: &MatrixSpace, cap: u64) -> Result<PrimitivityReport> {
    let (urk, _) = space.upper_rank(cap)?;
    let condition_i = condition_i(space);
    let condition_ii = condition_ii(space);
    let condition_iii = condition_iii(space, cap)?;
    let condition_iv = condition_iv(space, cap)?;
    let reduced = condition_i.holds && condition_ii.holds;
    let semi_primitive = reduced && condition_iii.holds;
    let primitive = semi_primitive && condition_iv.holds;
    let mut conventions = Vec::new();
    if space.cols() == 1 {
        conventions.push(CONVENTION_III_SINGLE_COLUMN);
    }
    if space.rows() == 1 {
        conventions.push(CONVENTION_IV_SINGLE_ROW);
    }
    let mut notes = Vec::new();
    if space.shape() == (1, 2) && *space == MatrixSpace::full(space.field(), 1, 2) {
        notes.push(NOTE_MAT_1_2);
    }
    Ok(PrimitivityReport {
        rows: space.rows(),
        cols: space.cols(),
        dim: space.dim(),
        urk,
        condition_i,
        condition_ii,
        condition_iii,
        condition_iv,
        reduced,
        semi_primitive,
        primitive,
        conventions,
        notes,
    })
}

/// Result of compressing onto a minimal degenerate column subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionReport {
    /// Least `d` admitting a `d`-dimensional column subspace with restricted upper rank `< d`.
    pub d: usize,
    /// First such subspace in enumeration order.
    pub w: VectorSubspace,
    pub restricted: MatrixSpace,
    pub restricted_urk: usize,
    /// Dimension of the sum of the column spaces of the restriction.
    pub c: usize,
    /// `m - c`: dimension of the common left kernel of the restriction.
    pub left_kernel_dim: usize,
    /// `T` with `T H(M) = [K(M); 0]` for every restricted element `H(M)`.
    pub row_basis_change: Matrix,
    /// The `c x d` compressed space `K`.
    pub k_space: MatrixSpace,
}

/// Search `d = 1, ..., n-1` for a column subspace of dimension `d` on which the
/// upper rank drops below `d`, then compress its rows.
pub fn minimal_degenerate_compression(
    space: &MatrixSpace,
    cap: u64,
) -> Result<Option<CompressionReport>> {
    if !condition_i(space).holds {
        return Err(MswError::PreconditionViolated("condition (i) fails".into()));
    }
    if !condition_ii(space).holds {
        return Err(MswError::PreconditionViolated("condition (ii) fails".into()));
    }
    space.check_cap(cap)?;
    let n = space.cols();
    for d in 1..n {
        for w in Grassmannian::new(space.field(), n, d)?.iter() {
            let restricted = space.restrict_columns(&w);
            if !restricted.reaches_rank(d, cap)? {
                return Ok(Some(compress(space, d, w, restricted, cap)?));
            }
        }
    }
    Ok(None)
}

fn compress(
    space: &MatrixSpace,
    d: usize,
    w: VectorSubspace,
    restricted: MatrixSpace,
    cap: u64,
) -> Result<CompressionReport> {
    let f = space.field();
    let m = space.rows();
    let cspan = restricted.column_span();
    let c = cspan.dim();
    let mut cols = cspan.basis().to_vec();
    cols.extend(cspan.standard_complement());
    let g = Matrix::from_column_vectors(f, m, &cols);
    let t = g.inverse()?;
    let k_space = restricted.map_basis(c, d, |h| t.mul(h).block(0, 0, c, d));
    let (restricted_urk, _) = restricted.upper_rank(cap)?;
    Ok(CompressionReport {
        d,
        w,
        restricted,
        restricted_urk,
        c,
        left_kernel_dim: m - c,
        row_basis_change: t,
        k_space,
    })
}
