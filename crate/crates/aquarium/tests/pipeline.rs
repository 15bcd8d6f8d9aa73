//! Cross-module pipeline: billiard → rotation estimate → Diophantine
//! profile → conjugacy, on the domains with known closed forms.

use aquarium::arithmetic::{continued_fraction, diophantine_profile, golden_mean};
use aquarium::billiard::{lift_orbit, ChessBilliard};
use aquarium::conjugacy::{birkhoff_conjugacy, kam_refine};
use aquarium::geometry::BoundaryCurve;
use aquarium::rotation::{
    disk_rotation_closed_form, rotation_number, square_lambda_for_rotation,
    square_rotation_closed_form,
};

#[test]
fn disk_pipeline_golden_target() {
    // pick λ so the disk rotation number is the golden conjugate, then
    // recover it from the orbit and classify it
    let lam = aquarium::rotation::disk_lambda_for_rotation(golden_mean());
    let cb = ChessBilliard::new(BoundaryCurve::disk(), lam).unwrap();
    let est = rotation_number(&cb, 0.3, 200_000).unwrap();
    assert!(est.contains(golden_mean()));
    let prof = diophantine_profile(est.value, 1000, 1e-9);
    assert!(prof.resonant.is_none());
    assert!(prof.beta < 0.2, "estimated golden should look bounded-type");
    // continued fraction of the estimate starts with the golden pattern
    let cf = continued_fraction(est.value, 12);
    assert_eq!(&cf.quotients[..6], &[0, 1, 1, 1, 1, 1]);
}

#[test]
fn square_conjugacy_at_golden_rotation() {
    // the square billiard at the golden rotation number conjugates to the
    // rigid rotation; record the achieved residual (the conjugacy has
    // corners, so expect interpolation-limited accuracy, not 1e-12)
    let lam = square_lambda_for_rotation(golden_mean());
    assert!((square_rotation_closed_form(lam) - golden_mean()).abs() < 1e-14);
    let cb = ChessBilliard::new(BoundaryCurve::unit_square(), lam).unwrap();
    let seed = birkhoff_conjugacy(&cb, golden_mean(), 30_000, 1024).unwrap();
    let r0 = seed.residual_history[0];
    assert!(r0 < 5e-3, "birkhoff residual {r0}");
    println!("square golden-rotation birkhoff residual: {r0:.3e}");
    // a KAM step either improves or stalls at the kink floor, never worsens
    // the accepted state
    let refined = kam_refine(&cb, &seed, 2).unwrap();
    let r1 = *refined.residual_history.last().unwrap();
    assert!(r1 <= r0 * (1.0 + 1e-12), "KAM accepted a worse state: {r0} -> {r1}");
    println!("after KAM refinement: {r1:.3e}");
}

#[test]
fn orbit_average_matches_closed_forms_on_fine_pairs() {
    for (lam, expect) in [
        (0.35f64, square_rotation_closed_form(0.35)),
        (0.62, square_rotation_closed_form(0.62)),
    ] {
        let cb = ChessBilliard::new(BoundaryCurve::unit_square(), lam).unwrap();
        let est = rotation_number(&cb, 0.11, 50_000).unwrap();
        assert!(est.contains(expect), "lambda={lam}");
    }
    for lam in [0.3f64, 0.77] {
        let cb = ChessBilliard::new(BoundaryCurve::disk(), lam).unwrap();
        let est = rotation_number(&cb, 0.9, 50_000).unwrap();
        assert!(est.contains(disk_rotation_closed_form(lam)));
    }
}

#[test]
fn lift_additivity_across_full_turns() {
    // B(θ+1) = B(θ)+1 through the orbit machinery
    let cb = ChessBilliard::new(BoundaryCurve::unit_square(), 0.543).unwrap();
    let a = lift_orbit(&cb, 0.21, 50).unwrap();
    let b = lift_orbit(&cb, 1.21, 50).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((y - x - 1.0).abs() < 1e-9);
    }
}
