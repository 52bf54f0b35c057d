use bratteli::catalog;
use bratteli::invariants::{
    reduction_pipeline, return_window_at, window_members, CylinderFamily, InvariantError,
    PipelineParams, Verdict,
};
use bratteli::matrix::IncidenceMatrix;
use bratteli::ordering::{OrderRule, OrderedBratteliDiagram};
use bratteli::rotation::qtree::BinaryPath;
use bratteli::rotation::returns::syndetic_gap;
use proptest::prelude::*;

fn primitive(rows: &[Vec<u64>]) -> OrderedBratteliDiagram {
    let m = IncidenceMatrix::from_rows(rows).unwrap();
    OrderedBratteliDiagram::with_rule(
        catalog::stationary(&m, 3).unwrap(),
        OrderRule::SourceThenIndex,
    )
}

fn branch(bits: &[bool]) -> BinaryPath {
    BinaryPath(bits.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the window based at b + 1 is the window based at b shifted by one
    #[test]
    fn windows_are_shift_equivariant(a in 1u64..3, b in 1u64..3, c in 1u64..3, d in 1u64..3, base in -5i64..5) {
        let od = primitive(&[vec![a, b], vec![c, d]]);
        let fam = CylinderFamily::all_of_depth(&od, 2).unwrap();
        for cyl in &fam.paths {
            let w = return_window_at(&od, cyl, 20, base).unwrap();
            let w1 = return_window_at(&od, cyl, 20, base + 1).unwrap();
            prop_assert_eq!(&w[1..], &w1[..40]);
        }
    }

    // every depth-2 cylinder is visited with gaps bounded by its fiber size
    #[test]
    fn returns_are_syndetic(a in 1u64..3, b in 1u64..3, c in 1u64..3, d in 1u64..3) {
        let od = primitive(&[vec![a, b], vec![c, d]]);
        let fam = CylinderFamily::all_of_depth(&od, 2).unwrap();
        let widest = od.base().path_counts(4).unwrap().into_iter().max().unwrap();
        for cyl in &fam.paths {
            let w = return_window_at(&od, cyl, 60, 0).unwrap();
            let gap = syndetic_gap(&window_members(&w), 60).unwrap();
            prop_assert!(!gap.window_bounded);
            prop_assert!(gap.max_gap <= 2 * widest, "{} > 2 * {}", gap.max_gap, widest);
        }
    }

    #[test]
    fn equal_inputs_are_never_distinguished(bits in prop::collection::vec(any::<bool>(), 3..7)) {
        let mut gamma = bits.clone();
        gamma.push(true);
        let p = branch(&bits);
        let report = reduction_pipeline(std::slice::from_ref(&p), std::slice::from_ref(&p), &PipelineParams::new(branch(&gamma))).unwrap();
        prop_assert_eq!(report.verdict, Verdict::IndistinguishableAtDepth);
        prop_assert_eq!(report.algebras_equal, Some(true));
    }
}

#[test]
fn distinct_branches_are_distinguished() {
    let params = PipelineParams::new(branch(&[true, true, true]));
    let r = reduction_pipeline(
        &[branch(&[false, true])],
        &[branch(&[true, false])],
        &params,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Distinguished);
    assert!(r.witness.is_some());
}

#[test]
fn gamma_may_not_be_a_generator() {
    let g = branch(&[true]);
    let err = reduction_pipeline(
        std::slice::from_ref(&g),
        &[branch(&[false])],
        &PipelineParams::new(g.clone()),
    );
    assert!(matches!(err, Err(InvariantError::GammaCollision(_))));
}
