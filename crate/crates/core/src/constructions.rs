//! Named spaces and seeded random objects.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::subspace::projective_points;

/// Index pairs `(i, j)` with `i < j`, lexicographic. Shared by the wedge and
/// alternating bases.
pub fn lex_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `e_i e_j^T - e_j e_i^T` for `i < j` in lexicographic order.
pub fn alternating_basis(field: FieldSpec, n: usize) -> Vec<Matrix> {
    lex_pairs(n)
        .into_iter()
        .map(|(i, j)| Matrix::unit(field, n, n, i, j).sub(&Matrix::unit(field, n, n, j, i)))
        .collect()
}

/// Skew-symmetric with zero diagonal.
pub fn is_alternating(m: &Matrix) -> bool {
    m.is_square() && m.add(&m.transpose()).is_zero() && (0..m.rows()).all(|i| m.get(i, i) == 0)
}

pub fn alternating_space(field: FieldSpec, n: usize) -> MatrixSpace {
    MatrixSpace::span_unchecked(field, n, n, alternating_basis(field, n).iter())
}

pub fn strict_upper_triangular_space(field: FieldSpec, n: usize) -> MatrixSpace {
    let units: Vec<Matrix> = lex_pairs(n)
        .into_iter()
        .map(|(i, j)| Matrix::unit(field, n, n, i, j))
        .collect();
    MatrixSpace::span_unchecked(field, n, n, units.iter())
}

/// Stack of `X^T A_k` over the lexicographic alternating basis, for one `X`.
pub fn wedge_generator(field: FieldSpec, n: usize, x: &[u32]) -> Matrix {
    stacked_generator(field, n, &alternating_basis(field, n), None, x)
}

fn stacked_generator(
    field: FieldSpec,
    n: usize,
    alt: &[Matrix],
    right: Option<&Matrix>,
    x: &[u32],
) -> Matrix {
    let xt = Matrix::from_row_vectors(field, n, &[x.to_vec()]);
    let rows: Vec<Vec<u32>> = alt
        .iter()
        .map(|a| {
            let r = xt.mul(a);
            match right {
                Some(p) => r.mul(p).row(0).to_vec(),
                None => r.row(0).to_vec(),
            }
        })
        .collect();
    Matrix::from_row_vectors(field, n, &rows)
}

/// The space of matrices of `x ∧ -` in the lexicographic wedge basis, inside
/// `Mat_{C(n,2), n}`.
pub fn wedge_space(field: FieldSpec, n: usize) -> Result<MatrixSpace> {
    if n < 2 {
        return Err(MswError::InvalidArgument("wedge space needs n >= 2".into()));
    }
    let gens: Vec<Matrix> = (0..n)
        .map(|k| wedge_generator(field, n, &crate::subspace::unit_vector(n, k)))
        .collect();
    Ok(MatrixSpace::span_unchecked(field, binomial2(n), n, gens.iter()))
}

/// Span over `X` of the stacks `X^T B_i P` for a basis `(B_i)` of the alternating space.
pub fn transformed_wedge_space(
    field: FieldSpec,
    n: usize,
    alt_basis: &[Matrix],
    p: &Matrix,
) -> Result<MatrixSpace> {
    if n < 2 {
        return Err(MswError::InvalidArgument("wedge space needs n >= 2".into()));
    }
    if alt_basis.len() != binomial2(n)
        || alt_basis.iter().any(|b| b.shape() != (n, n) || !is_alternating(b))
        || MatrixSpace::span_unchecked(field, n, n, alt_basis.iter()).dim() != binomial2(n)
    {
        return Err(MswError::NotABasis);
    }
    if p.shape() != (n, n) || !p.is_invertible() {
        return Err(MswError::Singular);
    }
    let gens: Vec<Matrix> = (0..n)
        .map(|k| stacked_generator(field, n, alt_basis, Some(p), &crate::subspace::unit_vector(n, k)))
        .collect();
    Ok(MatrixSpace::span_unchecked(field, binomial2(n), n, gens.iter()))
}

/// `P * Alt_n`.
pub fn scaled_alternating_space(p: &Matrix) -> Result<MatrixSpace> {
    if !p.is_square() {
        return Err(MswError::NotSquare(p.rows(), p.cols()));
    }
    if !p.is_invertible() {
        return Err(MswError::Singular);
    }
    let n = p.rows();
    Ok(alternating_space(p.field(), n).map_basis(n, n, |a| p.mul(a)))
}

/// The quadratic form `X -> X^T P X` for an invertible `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticFormSpec {
    matrix: Matrix,
}

impl QuadraticFormSpec {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(MswError::NotSquare(matrix.rows(), matrix.cols()));
        }
        if !matrix.is_invertible() {
            return Err(MswError::Singular);
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn value(&self, x: &[u32]) -> u32 {
        let px = self.matrix.apply(x);
        let f = self.matrix.field();
        x.iter().zip(&px).fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b))
    }

    /// First nonzero vector (one per line, lexicographic) with `X^T P X = 0`.
    pub fn isotropic_vector(&self) -> Option<Vec<u32>> {
        projective_points(self.matrix.field(), self.matrix.rows()).find(|x| self.value(x) == 0)
    }

    pub fn is_isotropic(&self) -> bool {
        self.isotropic_vector().is_some()
    }
}

/// Spaces that can be built from a name, a size and a seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedSpace {
    /// `Alt_n`.
    Altn,
    /// Strictly upper-triangular `n x n` matrices.
    StrictUt,
    /// `S(phi_n)` in `Mat_{C(n,2), n}`.
    Wedge,
    /// `P * Alt_n` for a seeded random invertible `P`.
    PAlt,
    /// `Q * strict-UT_n * Q^{-1}` for a seeded random invertible `Q`.
    ConjStrictUt,
    /// The wedge space in a seeded random alternating basis, times a seeded random `P`.
    TransformedWedge,
}

impl NamedSpace {
    pub const ALL: [NamedSpace; 6] = [
        NamedSpace::Altn,
        NamedSpace::StrictUt,
        NamedSpace::Wedge,
        NamedSpace::PAlt,
        NamedSpace::ConjStrictUt,
        NamedSpace::TransformedWedge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedSpace::Altn => "altn",
            NamedSpace::StrictUt => "strict-ut",
            NamedSpace::Wedge => "wedge",
            NamedSpace::PAlt => "p-alt",
            NamedSpace::ConjStrictUt => "conj-strict-ut",
            NamedSpace::TransformedWedge => "transformed-wedge",
        }
    }

    /// Unseeded names ignore `seed`.
    pub fn build(self, field: FieldSpec, n: usize, seed: u64) -> Result<MatrixSpace> {
        if n == 0 {
            return Err(MswError::InvalidArgument("n must be positive".into()));
        }
        let mut rng = seeded_rng(seed);
        match self {
            NamedSpace::Altn => Ok(alternating_space(field, n)),
            NamedSpace::StrictUt => Ok(strict_upper_triangular_space(field, n)),
            NamedSpace::Wedge => wedge_space(field, n),
            NamedSpace::PAlt => scaled_alternating_space(&random_invertible(field, n, &mut rng)),
            NamedSpace::ConjStrictUt => {
                strict_upper_triangular_space(field, n).transform_similar(&random_invertible(field, n, &mut rng))
            }
            NamedSpace::TransformedWedge => {
                let basis = random_alt_basis(field, n, &mut rng);
                let p = random_invertible(field, n, &mut rng);
                transformed_wedge_space(field, n, &basis, &p)
            }
        }
    }
}

impl std::str::FromStr for NamedSpace {
    type Err = MswError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MswError::InvalidArgument(format!("unknown space name {s:?}")))
    }
}

/// The deterministic generator behind every seeded probe.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let p = field.p();
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    Matrix::from_vec(field, rows, cols, data).expect("entries in range")
}

/// Uniform element of `GL_n`, by rejection.
pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random `dim`-dimensional subspace of `Mat_{rows,cols}`.
pub fn random_space<R: Rng + ?Sized>(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    dim: usize,
    rng: &mut R,
) -> Result<MatrixSpace> {
    random_subspace(&MatrixSpace::full(field, rows, cols), dim, rng)
}

/// Random `dim`-dimensional subspace of `space`.
pub fn random_subspace<R: Rng + ?Sized>(space: &MatrixSpace, dim: usize, rng: &mut R) -> Result<MatrixSpace> {
    if dim > space.dim() {
        return Err(MswError::InvalidArgument(format!(
            "cannot pick a {dim}-dimensional subspace of a {}-dimensional space",
            space.dim()
        )));
    }
    let p = space.field().p();
    let mut picked: Vec<Matrix> = Vec::with_capacity(dim);
    let mut current = MatrixSpace::zero(space.field(), space.rows(), space.cols());
    while current.dim() < dim {
        let coeffs: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..p)).collect();
        let m = space.combination(&coeffs);
        if !current.contains(&m) {
            picked.push(m);
            current = MatrixSpace::span_unchecked(space.field(), space.rows(), space.cols(), picked.iter());
        }
    }
    Ok(current)
}

/// A random basis of `Alt_n`: the canonical basis mixed by a random invertible matrix.
pub fn random_alt_basis<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<Matrix> {
    let canonical = alternating_basis(field, n);
    let k = canonical.len();
    if k == 0 {
        return canonical;
    }
    let g = random_invertible(field, k, rng);
    (0..k)
        .map(|i| {
            let mut acc = Matrix::zeros(field, n, n);
            for (j, a) in canonical.iter().enumerate() {
                acc.add_scaled_assign(g.get(i, j), a);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DEFAULT_CAP;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn alternating_dimensions() {
        let f = gf(3);
        assert_eq!(alternating_space(f, 1).dim(), 0);
        assert_eq!(alternating_space(f, 2).dim(), 1);
        assert_eq!(alternating_space(f, 4).dim(), 6);
        for n in 1..6 {
            assert_eq!(alternating_space(f, n).dim(), strict_upper_triangular_space(f, n).dim());
        }
        for e in alternating_space(gf(2), 3).elements(DEFAULT_CAP).unwrap() {
            assert!(is_alternating(&e));
        }
    }

    #[test]
    fn strict_upper_triangular_is_nilpotent() {
        let f = gf(2);
        let su2 = strict_upper_triangular_space(f, 2);
        assert_eq!(su2.basis(), &[Matrix::unit(f, 2, 2, 0, 1)]);
        let els: Vec<_> = strict_upper_triangular_space(f, 3).elements(DEFAULT_CAP).unwrap().collect();
        assert_eq!(els.len(), 8);
        assert!(els.iter().all(|e| e.is_nilpotent().unwrap()));
    }

    #[test]
    fn wedge_examples() {
        let f3 = gf(3);
        assert_eq!(wedge_space(f3, 2).unwrap(), MatrixSpace::full(f3, 1, 2));
        let g = wedge_generator(f3, 3, &[1, 0, 0]);
        assert_eq!(g, Matrix::from_rows(f3, &[[0, 1, 0], [0, 0, 1], [0, 0, 0]]).unwrap());
        let w3 = wedge_space(f3, 3).unwrap();
        assert_eq!(w3.shape(), (3, 3));
        assert_eq!(w3.dim(), 3);
        assert_eq!(w3.upper_rank(DEFAULT_CAP).unwrap().0, 2);
        assert!(wedge_space(f3, 1).is_err());
    }

    #[test]
    fn transformed_wedge_identity_and_errors() {
        let f = gf(5);
        let id = Matrix::identity(f, 3);
        assert_eq!(
            transformed_wedge_space(f, 3, &alternating_basis(f, 3), &id).unwrap(),
            wedge_space(f, 3).unwrap()
        );
        let mut bad = alternating_basis(f, 3);
        bad[2] = bad[1].clone();
        assert_eq!(transformed_wedge_space(f, 3, &bad, &id), Err(MswError::NotABasis));
        assert_eq!(
            transformed_wedge_space(f, 3, &alternating_basis(f, 3), &Matrix::zeros(f, 3, 3)),
            Err(MswError::Singular)
        );
        let mut rng = seeded_rng(3);
        for _ in 0..5 {
            let b = random_alt_basis(f, 2, &mut rng);
            let p = random_invertible(f, 2, &mut rng);
            assert_eq!(
                transformed_wedge_space(f, 2, &b, &p).unwrap(),
                MatrixSpace::full(f, 1, 2)
            );
        }
    }

    #[test]
    fn scaled_alternating() {
        let f = gf(5);
        assert_eq!(
            scaled_alternating_space(&Matrix::identity(f, 4)).unwrap(),
            alternating_space(f, 4)
        );
        let mut rng = seeded_rng(11);
        let p = random_invertible(f, 4, &mut rng);
        assert_eq!(scaled_alternating_space(&p).unwrap().dim(), 6);
        assert_eq!(
            scaled_alternating_space(&Matrix::zeros(f, 2, 2)),
            Err(MswError::Singular)
        );
    }

    #[test]
    fn isotropy_examples() {
        let f3 = gf(3);
        assert!(!QuadraticFormSpec::new(Matrix::identity(f3, 2)).unwrap().is_isotropic());
        assert_eq!(
            QuadraticFormSpec::new(Matrix::identity(f3, 3)).unwrap().isotropic_vector(),
            Some(vec![1, 1, 1])
        );
        let f2 = gf(2);
        assert_eq!(
            QuadraticFormSpec::new(Matrix::identity(f2, 2)).unwrap().isotropic_vector(),
            Some(vec![1, 1])
        );
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let f = gf(7);
        let a = random_space(f, 3, 3, 4, &mut seeded_rng(99)).unwrap();
        let b = random_space(f, 3, 3, 4, &mut seeded_rng(99)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 4);
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            assert!(random_invertible(f, 3, &mut rng).is_invertible());
        }
    }
}
