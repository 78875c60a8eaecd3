use poncelet_core::centers::{center, metrics, polar_polygon, CenterId, Triangle};
use poncelet_core::conic::Point2;
use poncelet_core::families::*;
use poncelet_core::invariants::*;
use poncelet_core::loci::{locus, LocusShape};
use poncelet_core::poncelet::sample_family;
use proptest::prelude::*;

fn all_triangle_families() -> Vec<FamilySpec> {
    let seed = Triangle::new(
        Point2::new(0.0, 0.0),
        Point2::new(3.0, 0.0),
        Point2::new(0.8, 1.7),
    );
    vec![
        focal_x1(2.0, 1.0).unwrap(),
        iso_x2(2.0, 1.0).unwrap(),
        focal_x4(2.0, 1.0).unwrap(),
        iso_x7(2.0, 1.0).unwrap(),
        macbeath(1.0, 0.5).unwrap(),
        dual(2.0, 1.0).unwrap(),
        chapple(2.0, 0.9).unwrap(),
        brocard(&seed).unwrap(),
        affine_macbeath(2.0, 1.0, Point2::new(0.3, 0.2)).unwrap(),
    ]
}

#[test]
fn every_prediction_holds_over_64_samples() {
    for spec in all_triangle_families() {
        let reports = verify(&spec, 64, DEFAULT_TOL).unwrap();
        for r in &reports {
            assert!(r.passed(), "{:?}: {} failed: {r:?}", spec.kind(), r.id);
        }
    }
}

#[test]
fn brocard_polar_x7_holds_only_in_the_acute_phase() {
    let seed = Triangle::new(
        Point2::new(0.0, 0.0),
        Point2::new(4.0, 0.0),
        Point2::new(0.0, 3.0),
    );
    let spec = brocard(&seed).unwrap();
    let x6 = center(&seed, CenterId::X6).unwrap();
    let outer = spec.pair.outer_matrix();
    let (mut acute, mut obtuse) = (0, 0);
    for s in sample_family(&spec.pair, 3, 64).unwrap() {
        let t = s.triangle().unwrap();
        let m = metrics(&t).unwrap();
        let polar = Triangle::from_slice(&polar_polygon(&s.vertices, &outer).unwrap()).unwrap();
        let d = center(&polar, CenterId::X7).unwrap().dist(x6);
        if m.theta1.max(m.theta2).max(m.theta3) < std::f64::consts::FRAC_PI_2 {
            acute += 1;
            assert!(d < 1e-9);
        } else {
            obtuse += 1;
            assert!(d > 1e-3);
        }
    }
    assert!(acute > 0 && obtuse > 0);
}

#[test]
fn chapple_suite_includes_cosine_sum() {
    let reports = verify(&chapple(2.0, 0.9).unwrap(), 64, DEFAULT_TOL).unwrap();
    let cos = reports
        .iter()
        .find(|r| r.id == InvariantId::CosSum && r.image == Image::Family)
        .unwrap();
    assert!((cos.mean - 1.45).abs() < 1e-12);
}

#[test]
fn verification_is_bit_deterministic() {
    let spec = focal_x4(2.0, 1.0).unwrap();
    let a = verify(&spec, 64, DEFAULT_TOL).unwrap();
    let b = verify(&spec, 64, DEFAULT_TOL).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn perturbed_families_are_rejected() {
    for spec in all_triangle_families() {
        let bad = spec.perturbed(1e-3).unwrap();
        assert!(verify(&bad, 64, DEFAULT_TOL).is_err(), "{:?}", spec.kind());
    }
}

#[test]
fn reflected_config_reflects_the_locus() {
    let up = affine_macbeath(2.0, 1.0, Point2::new(0.3, 0.2)).unwrap();
    let down = affine_macbeath(2.0, 1.0, Point2::new(0.3, -0.2)).unwrap();
    let a = locus(&up, CenterId::X3, 64).unwrap();
    let b = locus(&down, CenterId::X3, 64).unwrap();
    assert_eq!(a.shape, LocusShape::Ellipse);
    let (ea, eb) = (a.fitted.unwrap(), b.fitted.unwrap());
    assert!((ea.center.x - eb.center.x).abs() < 1e-9);
    assert!((ea.center.y + eb.center.y).abs() < 1e-9);
    assert!((ea.semi_major - eb.semi_major).abs() < 1e-9);
    assert!((ea.semi_minor - eb.semi_minor).abs() < 1e-9);
    let mirrored = (std::f64::consts::PI - eb.rotation).rem_euclid(std::f64::consts::PI);
    let d = (ea.rotation - mirrored).rem_euclid(std::f64::consts::PI);
    assert!(d.min(std::f64::consts::PI - d) < 1e-7);
}

#[test]
fn stationary_center_gives_point_locus() {
    let l = locus(&iso_x2(2.0, 1.0).unwrap(), CenterId::X2, 32).unwrap();
    assert_eq!(l.shape, LocusShape::DegeneratePoint);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn named_radii_match_general_formula(a in 1.2..4.0f64, ratio in 0.2..0.8f64) {
        let b = a * ratio;
        let c = (a * a - b * b).sqrt();
        let r1 = focal_x1(a, b).unwrap().pair.caustic_shape.semi_major;
        prop_assert!((r1 - caustic_radius_general(a, b, c, 0.0).unwrap()).abs() < 1e-12 * a);
        let r2 = iso_x2(a, b).unwrap().pair.caustic_shape.semi_major;
        let g = caustic_radius_general(a, b, 0.0, c * b / (2.0 * a)).unwrap();
        prop_assert!((r2 - g).abs() < 1e-12 * a);
    }

    #[test]
    fn denser_nested_grids_never_shrink_spread(k in 8usize..24, m in 2usize..4) {
        let spec = chapple(2.0, 0.9).unwrap();
        let coarse = measure_on(&spec, InvariantId::TanHalfSum, Image::PolarImage, k).unwrap();
        let fine = measure_on(&spec, InvariantId::TanHalfSum, Image::PolarImage, m * k).unwrap();
        // shared grid points can differ by roundoff in t
        prop_assert!(fine.spread >= coarse.spread - 1e-12);
        prop_assert!(fine.max_abs_deviation >= 0.5 * coarse.spread);
    }
}
