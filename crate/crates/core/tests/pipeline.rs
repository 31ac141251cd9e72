//! The decision tree on every small trivial-spectrum space of `Mat_3(GF(2))`.

use msw_core::recognition::Search;
use msw_core::spectral::is_trivial_spectrum;
use msw_core::theorems::{run_generalized_pipeline, Branch, PipelineNode, Verdict};
use msw_core::{FieldSpec, MatrixGrassmannian, MatrixSpace, DEFAULT_CAP};

fn trivial_spectrum_spaces(dim: usize) -> Vec<MatrixSpace> {
    let f = FieldSpec::new(2).unwrap();
    MatrixGrassmannian::new(f, 3, 3, dim)
        .unwrap()
        .iter()
        .filter(|s| is_trivial_spectrum(s, DEFAULT_CAP).unwrap().holds)
        .collect()
}

fn compressed_nodes(node: &PipelineNode) -> Vec<&PipelineNode> {
    node.all_nodes().into_iter().filter(|n| matches!(n.branch, Branch::Compressed(_))).collect()
}

#[test]
fn planes_verify_and_reach_compression() {
    let spaces = trivial_spectrum_spaces(2);
    assert!(!spaces.is_empty());
    let mut compressed = 0;
    for s in &spaces {
        let r = run_generalized_pipeline(s, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{s:?}");
        let root = r.details.unwrap();
        for node in compressed_nodes(&root) {
            let Branch::Compressed(step) = &node.branch else { unreachable!() };
            assert!(step.sum_holds && step.c_bound_holds && step.kernel_bound_holds);
            compressed += 1;
        }
    }
    assert!(compressed > 0);
}

#[test]
fn equality_over_a_small_field_is_not_applicable() {
    let spaces = trivial_spectrum_spaces(3);
    let mut outside = 0;
    for s in &spaces {
        let r = run_generalized_pipeline(s, DEFAULT_CAP).unwrap();
        assert!(!r.applicability["field_at_least_n"]);
        match r.verdict {
            Verdict::Verified => {}
            Verdict::NotApplicable => {
                outside += 1;
                let Branch::SemiPrimitive(step) = &r.details.unwrap().branch else {
                    panic!("unexpected failing branch for {s:?}")
                };
                assert!(step.equality);
                assert_eq!(step.congruence.as_ref().unwrap().result, Search::Absent);
            }
            v => panic!("{v:?} for {s:?}"),
        }
    }
    // the classification of the equality case needs |K| >= n
    assert!(outside > 0);
}
