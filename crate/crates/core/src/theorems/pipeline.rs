//! The dimension bound for trivial-spectrum spaces, run as a recursive
//! decision tree: split reducible spaces along an invariant subspace; for
//! irreducible ones pass to the dual space and either apply the semi-primitive
//! bound directly or compress onto a degenerate column subspace and recurse.

use rand::Rng;
use serde::Serialize;

use super::{Draft, TheoremReport, Verdict};
use crate::constructions::{
    binomial2, random_invertible, random_subspace, scaled_alternating_space, strict_upper_triangular_space,
};
use crate::duality::{
    decompose, dual_space, extremal_split_analysis, kernel_of_first_rows, split_along_invariant, ExtremalSplit,
};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::primitivity::{classify, condition_i, condition_ii, minimal_degenerate_compression};
use crate::recognition::{solve_alternating_congruence, CongruenceSolution, Search};
use crate::space::MatrixSpace;
use crate::spectral::{is_irreducible, is_trivial_spectrum};
use crate::subspace::{all_vectors, VectorSubspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineNode {
    pub n: usize,
    pub m: usize,
    pub depth: usize,
    /// `n(n-1)/2`.
    pub bound: usize,
    pub within_bound: bool,
    #[serde(flatten)]
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Branch {
    /// The zero space.
    Base,
    Reducible(Box<ReducibleStep>),
    SemiPrimitive(Box<SemiPrimitiveStep>),
    Compressed(Box<CompressedStep>),
    /// The dual space failed a structural check, so the tree cannot continue.
    Stalled { dual: DualChecks, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibleStep {
    pub invariant: VectorSubspace,
    pub basis_change: Matrix,
    pub split: usize,
    /// Dimension of the projection onto the two diagonal blocks.
    pub diagonal_dim: usize,
    /// `m - diagonal_dim`, at most `split * (n - split)`.
    pub off_diagonal_dim: usize,
    /// `m <= dim A + dim B + p(n-p)` with both children within their bounds.
    pub chain_holds: bool,
    pub upper: PipelineNode,
    pub lower: PipelineNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualChecks {
    pub dim: usize,
    pub urk: usize,
    pub urk_below_n: bool,
    pub condition_i: bool,
    pub condition_ii: bool,
    /// `rank M(X) = dim V X` for every `X`.
    pub ranks_match: bool,
}

impl DualChecks {
    fn hold(&self) -> bool {
        self.urk_below_n && self.condition_i && self.condition_ii && self.ranks_match
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiPrimitiveStep {
    pub dual: DualChecks,
    pub primitive: bool,
    /// `r(r+1)/2` for the dual's upper rank `r`.
    pub atkinson_bound: usize,
    pub atkinson_holds: bool,
    pub equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<CongruenceSolution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressedStep {
    pub dual: DualChecks,
    pub d: usize,
    pub c: usize,
    pub w: VectorSubspace,
    pub k_semi_primitive: bool,
    /// `c <= d(d-1)/2`.
    pub c_bound_holds: bool,
    /// First `d` rows span `W`; conjugating by it moves `W` to the first coordinates.
    pub basis_change: Matrix,
    /// Dimension of the elements of the conjugated space with zero first `d` rows.
    pub kernel_dim: usize,
    /// `kernel_dim <= (n-d)d + (n-d)(n-d-1)/2`.
    pub kernel_bound_holds: bool,
    /// `m = c + kernel_dim`.
    pub sum_holds: bool,
    pub tail: PipelineNode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremal: Option<ExtremalSplit>,
}

impl PipelineNode {
    /// The checks recorded at this node, ignoring its children.
    pub fn local_holds(&self) -> bool {
        self.within_bound
            && match &self.branch {
                Branch::Base => true,
                Branch::Reducible(s) => s.chain_holds,
                Branch::SemiPrimitive(s) => {
                    s.dual.hold()
                        && s.atkinson_holds
                        && s.congruence
                            .as_ref()
                            .is_none_or(|c| !matches!(c.result, Search::Absent))
                }
                Branch::Compressed(s) => {
                    s.dual.hold()
                        && s.k_semi_primitive
                        && s.c_bound_holds
                        && s.kernel_bound_holds
                        && s.sum_holds
                        && s.extremal.is_none()
                }
                Branch::Stalled { .. } => false,
            }
    }

    /// Every check in this subtree held.
    pub fn holds(&self) -> bool {
        self.local_holds() && self.children().iter().all(|c| c.holds())
    }

    /// First node in pre-order whose own checks fail.
    pub fn first_failure(&self) -> Option<&PipelineNode> {
        if !self.local_holds() {
            return Some(self);
        }
        self.children().into_iter().find_map(|c| c.first_failure())
    }

    pub fn nodes(&self) -> u64 {
        1 + self.children().iter().map(|c| c.nodes()).sum::<u64>()
    }

    pub fn max_depth(&self) -> usize {
        self.children().iter().map(|c| c.max_depth()).max().unwrap_or(self.depth)
    }

    /// Every node of the tree, parents before children.
    pub fn all_nodes(&self) -> Vec<&PipelineNode> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.all_nodes());
        }
        out
    }

    fn children(&self) -> Vec<&PipelineNode> {
        match &self.branch {
            Branch::Reducible(s) => vec![&s.upper, &s.lower],
            Branch::Compressed(s) => vec![&s.tail],
            _ => vec![],
        }
    }

    fn count_branches(&self, acc: &mut [u64; 5]) {
        let i = match self.branch {
            Branch::Base => 0,
            Branch::Reducible(_) => 1,
            Branch::SemiPrimitive(_) => 2,
            Branch::Compressed(_) => 3,
            Branch::Stalled { .. } => 4,
        };
        acc[i] += 1;
        for c in self.children() {
            c.count_branches(acc);
        }
    }
}

fn dual_checks(v: &MatrixSpace, cap: u64) -> Result<(crate::duality::DualSpace, DualChecks)> {
    let n = v.cols();
    let dual = dual_space(v, None)?;
    let (urk, _) = dual.space.upper_rank(cap)?;
    let ranks_match = all_vectors(v.field(), n).all(|x| dual.matrix_at(&x).rank() == v.image_of_vector(&x).dim());
    let checks = DualChecks {
        dim: dual.space.dim(),
        urk,
        urk_below_n: urk < n,
        condition_i: condition_i(&dual.space).holds,
        condition_ii: condition_ii(&dual.space).holds,
        ranks_match,
    };
    Ok((dual, checks))
}

fn run_node(v: &MatrixSpace, depth: usize, cap: u64) -> Result<PipelineNode> {
    let n = v.rows();
    let m = v.dim();
    let bound = binomial2(n);
    let node = |branch| PipelineNode {
        n,
        m,
        depth,
        bound,
        within_bound: m <= bound,
        branch,
    };
    if m == 0 {
        return Ok(node(Branch::Base));
    }
    let f = v.field();
    if let Some(w) = is_irreducible(v)?.witness {
        let split = split_along_invariant(v, &w)?;
        let p = split.split;
        let upper = run_node(&split.a_space, depth + 1, cap)?;
        let lower = run_node(&split.b_space, depth + 1, cap)?;
        let diagonal = split.conjugated.map_basis(n, n, |b| {
            Matrix::from_blocks(
                &b.block(0, 0, p, p),
                &Matrix::zeros(f, p, n - p),
                &Matrix::zeros(f, n - p, p),
                &b.block(p, p, n - p, n - p),
            )
        });
        let off_diagonal_dim = m - diagonal.dim();
        let chain_holds = off_diagonal_dim <= p * (n - p)
            && diagonal.dim() <= upper.m + lower.m
            && upper.within_bound
            && lower.within_bound
            && binomial2(p) + binomial2(n - p) + p * (n - p) == bound;
        return Ok(node(Branch::Reducible(Box::new(ReducibleStep {
            invariant: w,
            basis_change: split.basis_change,
            split: p,
            diagonal_dim: diagonal.dim(),
            off_diagonal_dim,
            chain_holds,
            upper,
            lower,
        }))));
    }
    let (dual, checks) = dual_checks(v, cap)?;
    if !checks.condition_i || !checks.condition_ii {
        return Ok(node(Branch::Stalled {
            dual: checks,
            reason: "dual space is not reduced".into(),
        }));
    }
    let report = classify(&dual.space, cap)?;
    if report.semi_primitive {
        let r = report.urk;
        let atkinson_bound = r * (r + 1) / 2;
        let equality = m == bound;
        let congruence = if equality {
            Some(solve_alternating_congruence(v)?)
        } else {
            None
        };
        return Ok(node(Branch::SemiPrimitive(Box::new(SemiPrimitiveStep {
            dual: checks,
            primitive: report.primitive,
            atkinson_bound,
            atkinson_holds: m <= atkinson_bound,
            equality,
            congruence,
        }))));
    }
    let Some(comp) = minimal_degenerate_compression(&dual.space, cap)? else {
        return Ok(node(Branch::Stalled {
            dual: checks,
            reason: "no degenerate column subspace".into(),
        }));
    };
    let d = comp.d;
    let k_semi_primitive = classify(&comp.k_space, cap)?.semi_primitive;
    let mut rows = comp.w.basis().to_vec();
    rows.extend(comp.w.standard_complement());
    let g = Matrix::from_row_vectors(f, n, &rows);
    let conjugated = v.transform_similar(&g)?;
    let kernel = kernel_of_first_rows(&conjugated, d)?;
    let tail_space = decompose(&kernel, d)?.d_space;
    let tail = run_node(&tail_space, depth + 1, cap)?;
    let equality = m == bound;
    let extremal = if equality {
        Some(extremal_split_analysis(&conjugated, d, cap)?)
    } else {
        None
    };
    Ok(node(Branch::Compressed(Box::new(CompressedStep {
        dual: checks,
        d,
        c: comp.c,
        w: comp.w,
        k_semi_primitive,
        c_bound_holds: comp.c <= binomial2(d),
        basis_change: g,
        kernel_dim: kernel.dim(),
        kernel_bound_holds: kernel.dim() <= (n - d) * d + tail.m && tail.within_bound,
        sum_holds: m == comp.c + kernel.dim() && comp.left_kernel_dim == kernel.dim(),
        tail,
        extremal,
    }))))
}

/// Run the decision tree on a trivial-spectrum space and check every
/// inequality along the way.
pub fn run_generalized_pipeline(v: &MatrixSpace, cap: u64) -> Result<TheoremReport<Option<PipelineNode>>> {
    let n = v.require_square()?;
    let f = v.field();
    let mut draft = Draft::new("generalized_pipeline", f);
    draft.param("n", n).param("dim", v.dim());
    let ts = is_trivial_spectrum(v, cap)?;
    if !draft.flag("trivial_spectrum", ts.holds, "space does not have a trivial spectrum") {
        draft.witness("eigenvalue", &ts.witness);
        return Ok(draft.finish(Verdict::NotApplicable, None));
    }
    let applicable = draft.flag(
        "field_at_least_n",
        f.p() as usize >= n,
        "field has fewer than n elements; the proof route assumes at least n",
    );
    let root = run_node(v, 0, cap)?;
    let mut branches = [0u64; 5];
    root.count_branches(&mut branches);
    draft
        .count("nodes", root.nodes())
        .count("max_depth", root.max_depth() as u64)
        .count("base", branches[0])
        .count("reducible", branches[1])
        .count("semi_primitive", branches[2])
        .count("compressed", branches[3])
        .count("stalled", branches[4]);
    let ok = root.holds();
    if let Some(bad) = root.first_failure() {
        draft.witness("space", v).witness("failed_step", bad);
    }
    Ok(draft.finish(Verdict::settle(ok, applicable), Some(root)))
}

/// A random trivial-spectrum space: a subspace of a conjugate of the strictly
/// upper-triangular space, or a trivial-spectrum subspace of some `P * Alt_n`.
pub fn sample_trivial_spectrum_instance<R: Rng>(f: FieldSpec, n: usize, rng: &mut R, cap: u64) -> Result<MatrixSpace> {
    loop {
        let q = random_invertible(f, n, rng);
        let ambient = if rng.gen_bool(0.5) {
            strict_upper_triangular_space(f, n).transform_similar(&q)?
        } else {
            scaled_alternating_space(&q)?
        };
        let dim = rng.gen_range(0..=ambient.dim());
        let v = random_subspace(&ambient, dim, rng)?;
        if is_trivial_spectrum(&v, cap)?.holds {
            return Ok(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::seeded_rng;
    use crate::space::DEFAULT_CAP;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn non_isotropic_alt2() {
        let f = gf(3);
        let v = scaled_alternating_space(&Matrix::identity(f, 2)).unwrap();
        let r = run_generalized_pipeline(&v, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let root = r.details.unwrap();
        let Branch::SemiPrimitive(step) = &root.branch else {
            panic!("{root:?}");
        };
        assert!(step.equality);
        assert_eq!(step.dual.dim, 2);
        assert_eq!(step.dual.urk, 1);
        let p = step.congruence.as_ref().unwrap().result.found().unwrap();
        assert_eq!(scaled_alternating_space(p).unwrap(), v);
    }

    #[test]
    fn strict_ut3_reduces() {
        let v = strict_upper_triangular_space(gf(5), 3);
        let r = run_generalized_pipeline(&v, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.counters["max_depth"], 2);
        let root = r.details.unwrap();
        assert!(matches!(root.branch, Branch::Reducible(_)));
        assert_eq!(root.m, root.bound);
    }

    #[test]
    fn random_small_instances() {
        let mut rng = seeded_rng(11);
        let f = gf(5);
        for _ in 0..20 {
            let v = loop {
                let v = sample_trivial_spectrum_instance(f, 3, &mut rng, DEFAULT_CAP).unwrap();
                if v.dim() == 2 {
                    break v;
                }
            };
            let r = run_generalized_pipeline(&v, DEFAULT_CAP).unwrap();
            assert_eq!(r.verdict, Verdict::Verified);
            assert!(r.details.unwrap().m < 3);
        }
    }

    #[test]
    fn small_field_is_flagged() {
        let v = strict_upper_triangular_space(gf(2), 3);
        let r = run_generalized_pipeline(&v, DEFAULT_CAP).unwrap();
        assert!(!r.applicability["field_at_least_n"]);
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn not_trivial_spectrum() {
        let r = run_generalized_pipeline(&MatrixSpace::full(gf(3), 2, 2), DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }
}
