//! The compact TOBL solve against the literal 16,384-column joint system.

use boxlab::classify::{tobl_membership, tobl_membership_direct, tobl_problems};
use boxlab::constructors::{ghz_box, p_eps_alpha, EpsParams, MeasurementAssignment};
use boxlab::lp::{verify_certificate, Verdict};

#[test]
fn compact_and_direct_agree_on_separated_boxes() {
    let boxes = [
        ghz_box(&MeasurementAssignment::default()),
        ghz_box(&MeasurementAssignment::default().swapped_23()),
        p_eps_alpha(&EpsParams::new(0.9).unwrap(), 0.5).unwrap(),
    ];
    for b in &boxes {
        let compact = tobl_membership(b, 1e-9).unwrap();
        let direct = tobl_membership_direct(b, 1e-9).unwrap();
        assert_eq!(compact.verdict, Verdict::Out);
        assert_eq!(direct.verdict, Verdict::Out);
        // each witness separates in the other's problem too
        let problems = tobl_problems(b, 1e-9).unwrap();
        verify_certificate(&problems, &compact).unwrap();
        verify_certificate(&problems, &direct).unwrap();
    }
}

#[test]
fn lifted_weights_solve_both_triple_systems() {
    let b = p_eps_alpha(&EpsParams::new(0.2).unwrap(), 0.5).unwrap();
    let r = tobl_membership(&b, 1e-9).unwrap();
    assert!(r.is_in());
    let w = r.weights.as_ref().unwrap();
    assert_eq!(w.len(), 16_384);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    verify_certificate(&tobl_problems(&b, 1e-9).unwrap(), &r).unwrap();
}
