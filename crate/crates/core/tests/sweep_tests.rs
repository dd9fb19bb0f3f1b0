mod common;

use common::*;
use polar3::sweep::{ClusterKind, MIN_GRID};
use polar3::{classify, sweep_oracle, Error, FrameVector, StructureData};
use proptest::prelude::*;

fn assert_agrees(s: &StructureData, n: usize) {
    let classes = classify(s).unwrap();
    let sweep = sweep_oracle(s, n).unwrap();
    assert_eq!(sweep.class_count(), classes.multiplicity, "{s:?}");
    let mut seen = Vec::new();
    for rep in &classes.representatives {
        let k = sweep
            .cluster_of(&rep.normal())
            .unwrap_or_else(|| panic!("{:?} not found for {s:?}", rep.label));
        seen.push(sweep.clusters[k].class);
    }
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), classes.multiplicity, "{s:?}");
    for c in &sweep.clusters {
        for p in &c.points {
            let r = closure_oracle(s, &orthogonal_pair(p).0, &orthogonal_pair(p).1);
            assert!(r.abs() <= 1e-9 * s.scale().max(1.0), "{s:?}: residual {r}");
        }
    }
}

/// Any orthonormal basis of `n⊥`.
fn orthogonal_pair(n: &FrameVector) -> (FrameVector, FrameVector) {
    let seed = if n[0].abs() < 0.6 {
        FrameVector::E1
    } else {
        FrameVector::E2
    };
    let a = cross(n, &seed).normalized().unwrap();
    (a, cross(n, &a))
}

#[test]
fn e2_has_one_fixed_normal() {
    let sweep = sweep_oracle(&uni(2.0, 1.0, 0.0), 5000).unwrap();
    assert_eq!(sweep.clusters.len(), 1);
    assert_eq!(sweep.clusters[0].kind, ClusterKind::Fixed);
    assert!(line_angle(&sweep.clusters[0].representative, &FrameVector::E3) < 1e-8);
}

#[test]
fn sol3_has_two_classes() {
    let s = uni(1.0, 0.0, -1.0);
    let sweep = sweep_oracle(&s, 5000).unwrap();
    assert_eq!(sweep.class_count(), 2);
    // the two signs of the non-abelian plane are separate curves, merged by automorphism
    let r = 0.5f64.sqrt();
    let plus = sweep.cluster_of(&FrameVector::new(r, 0.0, -r)).unwrap();
    let minus = sweep.cluster_of(&FrameVector::new(r, 0.0, r)).unwrap();
    assert_ne!(plus, minus);
    assert_eq!(sweep.clusters[plus].class, sweep.clusters[minus].class);
    assert_eq!(sweep.clusters[plus].kind, ClusterKind::Curve);
    let ideal = sweep.cluster_of(&FrameVector::E2).unwrap();
    assert_eq!(sweep.clusters[ideal].kind, ClusterKind::Fixed);
}

#[test]
fn semidirect_examples() {
    // det L > 1: only the abelian ideal
    let sweep = sweep_oracle(&non(0.5, 2.0), 5000).unwrap();
    assert_eq!(sweep.class_count(), 1);
    assert!(line_angle(&sweep.clusters[0].representative, &FrameVector::E3) < 1e-8);
    assert_agrees(&non(2.0, 1.0), 5000);
    assert_agrees(&non(2.0, 0.0), 5000);
    assert_agrees(&non(0.5, 0.0), 5000);
}

#[test]
fn small_grids_are_rejected() {
    assert_eq!(
        sweep_oracle(&uni(1.0, 0.0, -1.0), MIN_GRID - 1),
        Err(Error::InvalidGrid {
            n: MIN_GRID - 1,
            min: MIN_GRID
        })
    );
}

#[test]
fn su2_has_no_planes() {
    // ⟨[A, B], A × B⟩ = νᵀLν is positive definite when every λ is positive
    let sweep = sweep_oracle(&uni(3.0, 2.0, 1.0), 5000).unwrap();
    assert!(sweep.clusters.is_empty());
    assert_eq!(sweep.class_count(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sweep_agrees_with_classification(s in classifiable()) {
        assert_agrees(&s, 5000);
    }

    #[test]
    fn grid_size_does_not_change_the_count(s in classifiable()) {
        let a = sweep_oracle(&s, 4000).unwrap().class_count();
        let b = sweep_oracle(&s, 8000).unwrap().class_count();
        prop_assert_eq!(a, b);
    }
}
