//! Space-level spectral predicates: trivial spectrum, nilpotency,
//! irreducibility and total intransitivity.

use serde::Serialize;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::subspace::{projective_points, VectorSubspace};

/// Outcome of a predicate; `witness` certifies a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision<W> {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<W>,
}

impl<W> Decision<W> {
    pub fn yes() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    pub fn no(witness: W) -> Self {
        Self {
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_counterexample(c: Option<W>) -> Self {
        match c {
            Some(w) => Self::no(w),
            None => Self::yes(),
        }
    }
}

/// An element together with one of its nonzero eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenWitness {
    pub matrix: Matrix,
    pub eigenvalue: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub trivial_spectrum: Decision<EigenWitness>,
    pub nilpotent_space: Decision<Matrix>,
    pub irreducible: Decision<VectorSubspace>,
    /// Failure witness is a vector `X` with `V X` the whole space.
    pub totally_intransitive: Decision<Vec<u32>>,
}

/// No element has a nonzero eigenvalue in the field.
pub fn is_trivial_spectrum(space: &MatrixSpace, cap: u64) -> Result<Decision<EigenWitness>> {
    space.require_square()?;
    let mut eigenvalue = 0;
    let hit = space.find_normalized(cap, |m| match m.first_nonzero_eigenvalue() {
        Some(l) => {
            eigenvalue = l;
            true
        }
        None => false,
    })?;
    Ok(Decision::from_counterexample(
        hit.map(|matrix| EigenWitness { matrix, eigenvalue }),
    ))
}

pub fn is_nilpotent_space(space: &MatrixSpace, cap: u64) -> Result<Decision<Matrix>> {
    let n = space.require_square()?;
    let hit = space.find_normalized(cap, |m| !m.pow(n as u32).expect("square").is_zero())?;
    Ok(Decision::from_counterexample(hit))
}

pub fn image_of_vector(space: &MatrixSpace, x: &[u32]) -> VectorSubspace {
    space.image_of_vector(x)
}

/// Every nonzero `X` has `V X` a proper subspace.
pub fn is_totally_intransitive(space: &MatrixSpace) -> Result<Decision<Vec<u32>>> {
    let n = space.require_square()?;
    let hit = projective_points(space.field(), n).find(|x| space.image_of_vector(x).dim() == n);
    Ok(Decision::from_counterexample(hit))
}

/// Smallest subspace containing `x` and stable under every element.
pub fn invariant_closure(space: &MatrixSpace, x: &[u32]) -> VectorSubspace {
    let f = space.field();
    let n = space.cols();
    let mut current = VectorSubspace::span(f, n, vec![x.to_vec()]);
    loop {
        let mut vs = current.basis().to_vec();
        for b in space.basis() {
            for w in current.basis() {
                vs.push(b.apply(w));
            }
        }
        let next = VectorSubspace::span(f, n, vs);
        if next.dim() == current.dim() {
            return current;
        }
        current = next;
    }
}

pub fn is_invariant(space: &MatrixSpace, w: &VectorSubspace) -> bool {
    space
        .basis()
        .iter()
        .all(|b| w.basis().iter().all(|v| w.contains(&b.apply(v))))
}

/// Irreducibility by orbit closure of every line. The failure witness is a
/// proper invariant subspace of least dimension (first in line order).
pub fn is_irreducible(space: &MatrixSpace) -> Result<Decision<VectorSubspace>> {
    let n = space.require_square()?;
    let mut best: Option<VectorSubspace> = None;
    for x in projective_points(space.field(), n) {
        let closure = invariant_closure(space, &x);
        if closure.dim() < n && best.as_ref().is_none_or(|b| closure.dim() < b.dim()) {
            let minimal = closure.dim() == 1;
            best = Some(closure);
            if minimal {
                break;
            }
        }
    }
    Ok(Decision::from_counterexample(best))
}

/// Affine check on `I + V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineTranslationCheck {
    /// Every `I + N` is invertible; otherwise the first singular `I + N`'s `N`.
    pub all_invertible: Decision<Matrix>,
    pub trivial_spectrum: Decision<EigenWitness>,
    /// all-invertible implies trivial spectrum.
    pub implication_holds: bool,
}

pub fn affine_translation_is_trivial_spectrum(
    space: &MatrixSpace,
    cap: u64,
) -> Result<AffineTranslationCheck> {
    let n = space.require_square()?;
    let id = Matrix::identity(space.field(), n);
    let singular = space.elements(cap)?.find(|m| !id.add(m).is_invertible());
    let all_invertible = Decision::from_counterexample(singular);
    let trivial_spectrum = is_trivial_spectrum(space, cap)?;
    let implication_holds = !all_invertible.holds || trivial_spectrum.holds;
    Ok(AffineTranslationCheck {
        all_invertible,
        trivial_spectrum,
        implication_holds,
    })
}

pub fn spectral_report(space: &MatrixSpace, cap: u64) -> Result<SpectralReport> {
    Ok(SpectralReport {
        trivial_spectrum: is_trivial_spectrum(space, cap)?,
        nilpotent_space: is_nilpotent_space(space, cap)?,
        irreducible: is_irreducible(space)?,
        totally_intransitive: is_totally_intransitive(space)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alternating_space, random_invertible, seeded_rng, strict_upper_triangular_space};
    use crate::field::FieldSpec;
    use crate::space::DEFAULT_CAP;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn trivial_spectrum_examples() {
        assert!(is_trivial_spectrum(&strict_upper_triangular_space(gf(2), 3), DEFAULT_CAP).unwrap().holds);
        assert!(is_trivial_spectrum(&alternating_space(gf(3), 2), DEFAULT_CAP).unwrap().holds);
        let d = is_trivial_spectrum(&alternating_space(gf(3), 3), DEFAULT_CAP).unwrap();
        assert!(!d.holds);
        let w = d.witness.unwrap();
        assert!(w.eigenvalue != 0);
        assert!(w.matrix.has_eigenvalue(w.eigenvalue));
        // all nonzero 3x3 alternating matrices over GF(3) have lambda^2 = -(a^2+b^2+c^2);
        // the first normalized one with a root gives the witness
        assert!(w.matrix.eigenvalues_in_field().unwrap().contains(&1) || w.eigenvalue == 2);
    }

    #[test]
    fn nilpotent_examples() {
        assert!(is_nilpotent_space(&strict_upper_triangular_space(gf(5), 4), DEFAULT_CAP).unwrap().holds);
        let f3 = gf(3);
        let d = is_nilpotent_space(&alternating_space(f3, 2), DEFAULT_CAP).unwrap();
        assert!(!d.holds);
        let n = d.witness.unwrap();
        assert_eq!(n.mul(&n), Matrix::scalar(f3, 2, 2));
        assert!(is_nilpotent_space(&MatrixSpace::zero(f3, 3, 3), DEFAULT_CAP).unwrap().holds);
    }

    #[test]
    fn images() {
        let f = gf(3);
        let su3 = strict_upper_triangular_space(f, 3);
        assert_eq!(image_of_vector(&su3, &[0, 0, 0]).dim(), 0);
        assert_eq!(
            image_of_vector(&su3, &[0, 0, 1]),
            VectorSubspace::span(f, 3, vec![vec![1, 0, 0], vec![0, 1, 0]])
        );
        assert!(image_of_vector(&MatrixSpace::full(f, 3, 3), &[0, 2, 1]).is_full());
    }

    #[test]
    fn intransitivity() {
        let f = gf(3);
        let full = is_totally_intransitive(&MatrixSpace::full(f, 3, 3)).unwrap();
        assert!(!full.holds);
        assert!(is_totally_intransitive(&strict_upper_triangular_space(f, 3)).unwrap().holds);
        assert!(is_totally_intransitive(&alternating_space(f, 2)).unwrap().holds);
    }

    #[test]
    fn irreducibility() {
        let f = gf(3);
        let d = is_irreducible(&strict_upper_triangular_space(f, 3)).unwrap();
        assert!(!d.holds);
        assert_eq!(d.witness.unwrap(), VectorSubspace::span(f, 3, vec![vec![1, 0, 0]]));
        assert!(is_irreducible(&MatrixSpace::full(f, 2, 2)).unwrap().holds);
        assert!(is_irreducible(&alternating_space(f, 2)).unwrap().holds);
    }

    #[test]
    fn affine_translation() {
        let f = gf(3);
        let su = affine_translation_is_trivial_spectrum(&strict_upper_triangular_space(f, 3), DEFAULT_CAP).unwrap();
        assert!(su.all_invertible.holds && su.trivial_spectrum.holds && su.implication_holds);
        let scalars = MatrixSpace::span(f, 2, 2, &[Matrix::identity(f, 2)]).unwrap();
        let sc = affine_translation_is_trivial_spectrum(&scalars, DEFAULT_CAP).unwrap();
        assert!(!sc.all_invertible.holds);
        assert_eq!(sc.all_invertible.witness, Some(Matrix::scalar(f, 2, 2)));
        assert!(!sc.trivial_spectrum.holds);
        let q = random_invertible(f, 3, &mut seeded_rng(5));
        let conj = strict_upper_triangular_space(f, 3).transform_similar(&q).unwrap();
        let c = affine_translation_is_trivial_spectrum(&conj, DEFAULT_CAP).unwrap();
        assert!(c.all_invertible.holds && c.trivial_spectrum.holds);
    }
}
