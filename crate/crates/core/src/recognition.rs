//! Recognition of the extremal spaces: `P * Alt_n`, conjugates of the strictly
//! upper-triangular space, and equivalence to a given space.

use rand::Rng;
use serde::Serialize;

use crate::constructions::{binomial2, scaled_alternating_space, seeded_rng, strict_upper_triangular_space};
use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::space::MatrixSpace;
use crate::subspace::{all_vectors, VectorSubspace};

/// Solution spaces up to this many elements are enumerated in full.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;
/// Random draws from a larger solution space before giving up.
pub const RANDOM_ATTEMPTS: u64 = 4096;

/// Result of a search that may be cut short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "witness", rename_all = "snake_case")]
pub enum Search<W> {
    Found(W),
    /// Definitive: the whole candidate set was examined.
    Absent,
    Inconclusive,
}

impl<W> Search<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            Search::Found(w) => Some(w),
            _ => None,
        }
    }
}

struct InvertibleSearch {
    found: Option<Matrix>,
    examined: u64,
    exhausted: bool,
}

/// Look for an invertible `n x n` matrix in a subspace of `K^{n*n}`.
fn find_invertible<R: Rng>(f: FieldSpec, n: usize, sols: &VectorSubspace, budget: u64, rng: &mut R) -> InvertibleSearch {
    let k = sols.dim();
    let to_matrix = |coeffs: &[u32]| {
        let mut data = vec![0u32; n * n];
        for (&c, b) in coeffs.iter().zip(sols.basis()) {
            if c != 0 {
                for (d, &e) in data.iter_mut().zip(b) {
                    *d = f.mul_add(*d, c, e);
                }
            }
        }
        Matrix::from_vec(f, n, n, data).expect("reduced entries")
    };
    let count = f.power_count(k);
    let mut examined = 0;
    if count <= EXHAUSTIVE_LIMIT.min(budget as u128) {
        for coeffs in all_vectors(f, k).skip(1) {
            examined += 1;
            let m = to_matrix(&coeffs);
            if m.is_invertible() {
                return InvertibleSearch {
                    found: Some(m),
                    examined,
                    exhausted: false,
                };
            }
        }
        return InvertibleSearch {
            found: None,
            examined,
            exhausted: true,
        };
    }
    let p = f.p();
    for _ in 0..RANDOM_ATTEMPTS.min(budget) {
        examined += 1;
        let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let m = to_matrix(&coeffs);
        if m.is_invertible() {
            return InvertibleSearch {
                found: Some(m),
                examined,
                exhausted: false,
            };
        }
    }
    InvertibleSearch {
        found: None,
        examined,
        exhausted: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceSolution {
    /// Dimension of `{S : S B alternating for all B in V}`.
    pub solution_space_dim: usize,
    pub candidates_examined: u64,
    /// `P` with `P * Alt_n = V`.
    pub result: Search<Matrix>,
}

/// Find `P` with `V = P * Alt_n` by solving for `S = P^{-1}` linearly.
pub fn solve_alternating_congruence(v: &MatrixSpace) -> Result<CongruenceSolution> {
    let n = v.require_square()?;
    let f = v.field();
    if v.dim() != binomial2(n) {
        return Ok(CongruenceSolution {
            solution_space_dim: 0,
            candidates_examined: 0,
            result: Search::Absent,
        });
    }
    // unknown S_{ab} sits at index a*n + b; (S B)_{ij} = sum_b S_{ib} B_{bj}
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for b in v.basis() {
        for i in 0..n {
            for j in i..n {
                let mut row = vec![0u32; n * n];
                for t in 0..n {
                    row[i * n + t] = f.add(row[i * n + t], b.get(t, j));
                    if i != j {
                        row[j * n + t] = f.add(row[j * n + t], b.get(t, i));
                    }
                }
                rows.push(row);
            }
        }
    }
    let sols = if rows.is_empty() {
        VectorSubspace::full(f, n * n)
    } else {
        Matrix::from_row_vectors(f, n * n, &rows).kernel()
    };
    let mut rng = seeded_rng(0);
    let search = find_invertible(f, n, &sols, u64::MAX, &mut rng);
    let result = match search.found {
        Some(s) => {
            let p = s.inverse()?;
            if scaled_alternating_space(&p)? == *v {
                Search::Found(p)
            } else {
                Search::Absent
            }
        }
        None if search.exhausted => Search::Absent,
        None => Search::Inconclusive,
    };
    Ok(CongruenceSolution {
        solution_space_dim: sols.dim(),
        candidates_examined: search.examined,
        result,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangularization {
    /// `K_0 = 0`, `K_{j+1} = {x : B x in K_j for all B}`, up to `K^n`.
    pub chain: Vec<VectorSubspace>,
    /// Complete flag refining the chain; `flag[k]` has dimension `k`.
    pub flag: Vec<VectorSubspace>,
    /// Columns form a basis adapted to the flag; `P^{-1} V P` is strictly upper triangular.
    pub p: Matrix,
    /// `P^{-1} V P` is the whole strictly upper-triangular space.
    pub full: bool,
}

/// `{x : B x in K for every basis element B}`.
fn preimage(v: &MatrixSpace, k: &VectorSubspace) -> VectorSubspace {
    let n = v.cols();
    let f = v.field();
    let ann = k.annihilator();
    if ann.dim() == 0 || v.dim() == 0 {
        return VectorSubspace::full(f, n);
    }
    let a = ann.basis_matrix();
    let parts: Vec<Matrix> = v.basis().iter().map(|b| a.mul(b)).collect();
    Matrix::vstack(f, n, &parts).kernel()
}

pub fn strict_triangularization(v: &MatrixSpace) -> Result<Option<Triangularization>> {
    let n = v.require_square()?;
    let f = v.field();
    let mut chain = vec![VectorSubspace::zero(f, n)];
    while !chain.last().expect("nonempty").is_full() {
        let next = preimage(v, chain.last().expect("nonempty"));
        if next.dim() == chain.last().expect("nonempty").dim() {
            return Ok(None);
        }
        chain.push(next);
    }
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut flag = vec![VectorSubspace::zero(f, n)];
    for level in &chain[1..] {
        for b in level.basis() {
            let current = flag.last().expect("nonempty");
            if !current.contains(b) {
                columns.push(b.clone());
                flag.push(VectorSubspace::span(f, n, columns.clone()));
            }
        }
    }
    let p = Matrix::from_column_vectors(f, n, &columns);
    let conj = v.map_basis(n, n, |b| p.inverse().expect("adapted basis").mul(b).mul(&p));
    let target = strict_upper_triangular_space(f, n);
    if !conj.is_subspace_of(&target) {
        return Ok(None);
    }
    Ok(Some(Triangularization {
        chain,
        flag,
        p,
        full: conj == target,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    /// `S1 = P * S2 * Q`, re-verified.
    Equivalent { p: Matrix, q: Matrix, pairs_examined: u64 },
    Distinct { reason: String, pairs_examined: u64 },
    Inconclusive { pairs_examined: u64 },
}

/// All invertible `n x n` matrices when there are few enough, else `None`.
fn small_general_linear(f: FieldSpec, n: usize) -> Option<Vec<Matrix>> {
    if f.power_count(n * n) > EXHAUSTIVE_LIMIT {
        return None;
    }
    Some(
        all_vectors(f, n * n)
            .map(|v| Matrix::from_vec(f, n, n, v).expect("reduced entries"))
            .filter(Matrix::is_invertible)
            .collect(),
    )
}

/// Search for `(P, Q)` with `S1 = P S2 Q`. For each candidate `Q` the admissible
/// `P` form a linear space, which is then searched for an invertible element.
/// `budget` bounds the number of `(P, Q)` candidates examined.
pub fn equivalence_probe(s1: &MatrixSpace, s2: &MatrixSpace, budget: u64, seed: u64, cap: u64) -> Result<EquivalenceVerdict> {
    if s1.field() != s2.field() {
        return Err(MswError::FieldMismatch {
            left: s1.field().p(),
            right: s2.field().p(),
        });
    }
    if s1.shape() != s2.shape() {
        return Err(MswError::ShapeMismatch {
            expected: s1.shape(),
            found: s2.shape(),
        });
    }
    let distinct = |reason: &str| EquivalenceVerdict::Distinct {
        reason: reason.into(),
        pairs_examined: 0,
    };
    if s1.dim() != s2.dim() {
        return Ok(distinct("dim"));
    }
    if s1.upper_rank(cap)?.0 != s2.upper_rank(cap)?.0 {
        return Ok(distinct("upper_rank"));
    }
    if s1.rank_profile(cap)? != s2.rank_profile(cap)? {
        return Ok(distinct("rank_profile"));
    }
    let f = s1.field();
    let (m, n) = s1.shape();
    let ann = s1.vectorized().annihilator();
    let mut rng = seeded_rng(seed);
    let q_candidates = small_general_linear(f, n);
    let definitive_q = q_candidates.is_some();
    let mut q_iter: Box<dyn Iterator<Item = Matrix>> = match q_candidates {
        Some(all) => Box::new(all.into_iter()),
        None => Box::new(std::iter::from_fn({
            let mut q_rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
            move || Some(crate::constructions::random_invertible(f, n, &mut q_rng))
        })),
    };
    let mut examined: u64 = 0;
    let mut all_exhausted = true;
    while examined < budget {
        let Some(q) = q_iter.next() else {
            break;
        };
        // P_{ik} at index i*m + k; the functional a applied to P (B Q)
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for b in s2.basis() {
            let bq = b.mul(&q);
            for a in ann.basis() {
                let mut row = vec![0u32; m * m];
                for i in 0..m {
                    for k in 0..m {
                        let mut acc = 0;
                        for j in 0..n {
                            acc = f.mul_add(acc, a[i * n + j], bq.get(k, j));
                        }
                        row[i * m + k] = acc;
                    }
                }
                rows.push(row);
            }
        }
        let sols = if rows.is_empty() {
            VectorSubspace::full(f, m * m)
        } else {
            Matrix::from_row_vectors(f, m * m, &rows).kernel()
        };
        let search = find_invertible(f, m, &sols, budget - examined, &mut rng);
        examined += search.examined.max(1);
        all_exhausted &= search.exhausted;
        if let Some(p) = search.found {
            if s2.transform_equivalent(&p, &q)? == *s1 {
                return Ok(EquivalenceVerdict::Equivalent {
                    p,
                    q,
                    pairs_examined: examined,
                });
            }
        }
    }
    let q_done = definitive_q && q_iter.next().is_none();
    if q_done && all_exhausted {
        Ok(EquivalenceVerdict::Distinct {
            reason: "exhaustive_search".into(),
            pairs_examined: examined,
        })
    } else {
        Ok(EquivalenceVerdict::Inconclusive {
            pairs_examined: examined,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alternating_space, random_invertible, transformed_wedge_space, random_alt_basis, wedge_space};
    use crate::space::DEFAULT_CAP;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn congruence_on_alt() {
        for p in [2u64, 3, 5] {
            let f = gf(p);
            for n in 1..5 {
                let sol = solve_alternating_congruence(&alternating_space(f, n)).unwrap();
                let pm = sol.result.found().expect("Alt_n is P Alt_n");
                assert_eq!(scaled_alternating_space(pm).unwrap(), alternating_space(f, n));
            }
        }
    }

    #[test]
    fn congruence_rejects_strict_ut2() {
        let f = gf(3);
        let sol = solve_alternating_congruence(&strict_upper_triangular_space(f, 2)).unwrap();
        assert_eq!(sol.result, Search::Absent);
        let sol = solve_alternating_congruence(&strict_upper_triangular_space(f, 3)).unwrap();
        assert_eq!(sol.result, Search::Absent);
    }

    #[test]
    fn congruence_round_trip() {
        let mut rng = seeded_rng(5);
        for p in [3u64, 5] {
            let f = gf(p);
            for n in [2, 3, 4] {
                for _ in 0..10 {
                    let q = random_invertible(f, n, &mut rng);
                    let v = scaled_alternating_space(&q).unwrap();
                    let sol = solve_alternating_congruence(&v).unwrap();
                    assert_eq!(scaled_alternating_space(sol.result.found().unwrap()).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn triangularize_strict_ut3() {
        let f = gf(5);
        let t = strict_triangularization(&strict_upper_triangular_space(f, 3)).unwrap().unwrap();
        assert_eq!(t.p, Matrix::identity(f, 3));
        assert!(t.full);
        assert_eq!(t.flag[1].basis(), &[vec![1, 0, 0]]);
        assert_eq!(t.flag[2].basis(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(t.flag.len(), 4);
    }

    #[test]
    fn triangularize_conjugates() {
        let mut rng = seeded_rng(10);
        for p in [2u64, 3, 5] {
            let f = gf(p);
            for n in 1..5 {
                let su = strict_upper_triangular_space(f, n);
                for _ in 0..10 {
                    let q = random_invertible(f, n, &mut rng);
                    let v = su.transform_similar(&q).unwrap();
                    let t = strict_triangularization(&v).unwrap().unwrap();
                    let back = v.map_basis(n, n, |b| t.p.inverse().unwrap().mul(b).mul(&t.p));
                    assert_eq!(back, su);
                    assert!(t.full);
                    for (k, fk) in t.flag.iter().enumerate() {
                        assert_eq!(fk.dim(), k);
                    }
                }
            }
        }
    }

    #[test]
    fn triangularize_rejects_alt2() {
        assert_eq!(strict_triangularization(&alternating_space(gf(3), 2)).unwrap(), None);
        // a nilpotent space whose kernel chain jumps by two
        let f = gf(3);
        let v = MatrixSpace::span(f, 3, 3, &[Matrix::unit(f, 3, 3, 0, 2)]).unwrap();
        let t = strict_triangularization(&v).unwrap().unwrap();
        assert_eq!(t.chain.len(), 3);
        assert!(!t.full);
    }

    #[test]
    fn equivalence_of_mat12_with_itself() {
        let f = gf(3);
        let s = MatrixSpace::full(f, 1, 2);
        let w = wedge_space(f, 2).unwrap();
        assert_eq!(w, s);
        match equivalence_probe(&s, &w, 1000, 0, DEFAULT_CAP).unwrap() {
            EquivalenceVerdict::Equivalent { p, q, .. } => {
                assert_eq!(w.transform_equivalent(&p, &q).unwrap(), s);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equivalence_of_transformed_wedge() {
        let f = gf(2);
        let mut rng = seeded_rng(3);
        let w = wedge_space(f, 3).unwrap();
        for _ in 0..5 {
            let basis = random_alt_basis(f, 3, &mut rng);
            let pm = random_invertible(f, 3, &mut rng);
            let t = transformed_wedge_space(f, 3, &basis, &pm).unwrap();
            match equivalence_probe(&w, &t, 28_224, 1, DEFAULT_CAP).unwrap() {
                EquivalenceVerdict::Equivalent { p, q, .. } => {
                    assert_eq!(t.transform_equivalent(&p, &q).unwrap(), w)
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn distinct_by_invariants_and_search() {
        let f = gf(2);
        let w = wedge_space(f, 3).unwrap();
        let su = strict_upper_triangular_space(f, 3);
        assert!(matches!(
            equivalence_probe(&w, &su, 1000, 0, DEFAULT_CAP).unwrap(),
            EquivalenceVerdict::Distinct { .. }
        ));
        // same rank profile, yet a common row is not a common column
        let rows = MatrixSpace::span(f, 2, 2, &[Matrix::unit(f, 2, 2, 0, 0), Matrix::unit(f, 2, 2, 0, 1)]).unwrap();
        let cols = MatrixSpace::span(f, 2, 2, &[Matrix::unit(f, 2, 2, 0, 0), Matrix::unit(f, 2, 2, 1, 0)]).unwrap();
        assert_eq!(rows.rank_profile(DEFAULT_CAP).unwrap(), cols.rank_profile(DEFAULT_CAP).unwrap());
        assert!(matches!(
            equivalence_probe(&rows, &cols, 1 << 20, 0, DEFAULT_CAP).unwrap(),
            EquivalenceVerdict::Distinct { ref reason, .. } if reason == "exhaustive_search"
        ));
        assert!(matches!(
            equivalence_probe(&rows, &cols, 1, 0, DEFAULT_CAP).unwrap(),
            EquivalenceVerdict::Inconclusive { .. }
        ));
    }
}
