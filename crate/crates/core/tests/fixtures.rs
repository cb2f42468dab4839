//! Pinned instances: examples where a converse fails, degenerate
//! criteria, and a deletion satisfying the sufficient condition.

use std::f64::consts::PI;

use qgap_core::discrete::check_discrete_pendant;
use qgap_core::fem::oracle_eigenvalues;
use qgap_core::verify::{interval_criterion, verify_delete, verify_pendant, Hypothesis, Verdict};
use qgap_core::{DiscreteGraph, EdgeId, MetricGraph, VertexId};

#[test]
fn pendant_at_a_zero_still_lowers_the_gap() {
    // every gap eigenfunction of the 3-star vanishes at the centre, yet a
    // long pendant there pulls the gap far down
    let star = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
    let r = verify_pendant(&star, VertexId(0), 10.0).unwrap();
    assert!((r.lambda1_before - PI * PI / 4.0).abs() < 1e-8);
    assert!(r.lambda1_after < 0.1);
    assert_eq!(r.equality_diagnostic, Some(true));
    assert!(!r.equality_observed);
    assert_eq!(r.diagnostic_consistent, Some(false));
    assert_eq!(r.verdict, Verdict::InequalityHolds);

    let fem = oracle_eigenvalues(&star.add_pendant(VertexId(0), 10.0).unwrap(), 0.01, 2).unwrap();
    assert!((fem[1] - r.lambda1_after).abs() < 1e-4 * r.lambda1_after);
}

#[test]
fn discrete_pendant_at_a_zero_still_lowers_the_gap() {
    let g = DiscreteGraph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
    let r = check_discrete_pendant(&g, 2).unwrap();
    assert!((r.lambda1_before - 2.0).abs() < 1e-9);
    // any graph with a leaf has algebraic connectivity at most 1
    assert!((r.lambda1_after - 1.0).abs() < 1e-9);
    assert_eq!(r.equality_diagnostic, Some(true));
    assert_eq!(r.diagnostic_consistent, Some(false));
    assert_eq!(r.verdict, Verdict::InequalityHolds);
}

#[test]
fn symmetric_interval_removal_makes_no_claim() {
    let g = MetricGraph::from_edges(&[(0, 1, 2.0), (0, 1, 0.5), (0, 2, 0.3), (1, 3, 0.3)]).unwrap();
    let r = interval_criterion(&g, EdgeId(0), 1.0, 0.01).unwrap();
    assert_eq!(r.multiplicity_before, 1);
    assert!(r.quantities["max_ratio"] < 1e-6);
    assert_eq!(r.hypothesis, Hypothesis::NotSatisfied);
    assert_eq!(r.verdict, Verdict::NoClaim);
}

#[test]
fn frozen_deletion_satisfies_the_criterion() {
    // found by a seeded search over random graphs, lengths rounded
    let g =
        MetricGraph::from_edges(&[(0, 1, 1.27), (1, 2, 1.02), (1, 3, 1.7), (3, 0, 2.54)]).unwrap();
    let r = verify_delete(&g, EdgeId(0)).unwrap();
    assert_eq!(r.hypothesis, Hypothesis::Satisfied);
    assert!((r.quantities["lhs"] - 3.5571).abs() < 1e-3);
    assert!((r.quantities["rhs"] - 1.0 / (6.53 - 1.27)).abs() < 1e-12);
    assert!((r.lambda1_before - 0.85044002).abs() < 1e-7);
    assert!((r.lambda1_after - 0.35672066).abs() < 1e-7);
    assert_eq!(r.verdict, Verdict::InequalityHolds);
}
