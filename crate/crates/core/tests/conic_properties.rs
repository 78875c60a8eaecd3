use nalgebra::Matrix2;
use poncelet_core::conic::*;
use proptest::prelude::*;

fn ellipse() -> impl Strategy<Value = GeneralEllipse> {
    (
        -2.0..2.0f64,
        -2.0..2.0f64,
        0.5..3.0f64,
        0.2..1.0f64,
        0.0..3.1f64,
    )
        .prop_map(|(x, y, major, ratio, rot)| {
            GeneralEllipse::new(Point2::new(x, y), major, major * ratio, rot).unwrap()
        })
}

fn exterior_point(e: &GeneralEllipse) -> impl Strategy<Value = Point2> {
    let e = *e;
    (0.0..std::f64::consts::TAU, 1.2..4.0f64).prop_map(move |(t, k)| {
        let p = e.point_at(t);
        e.center + (p - e.center) * k
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tangents_satisfy_dual_conic((e, p) in ellipse().prop_flat_map(|e| (Just(e), exterior_point(&e)))) {
        let c = e.to_conic();
        let (l1, l2) = tangents_from(p, &c).unwrap();
        prop_assert!(c.tangency_residual(&l1) < 1e-10);
        prop_assert!(c.tangency_residual(&l2) < 1e-10);
        prop_assert!(l1.signed_distance(p).abs() < 1e-10 * e.semi_major);
        prop_assert!(l2.signed_distance(p).abs() < 1e-10 * e.semi_major);
    }

    #[test]
    fn pole_of_polar_is_identity(e in ellipse(), x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let c = e.to_conic();
        let p = Point2::new(x, y);
        prop_assume!(p.dist(e.center) > 1e-3);
        let q = pole(&polar_line(p, &c).unwrap(), &c).unwrap();
        prop_assert!(q.dist(p) < 1e-10 * p.norm().max(1.0));
    }

    #[test]
    fn predicates_invariant_under_rescaling(
        (e, p) in ellipse().prop_flat_map(|e| (Just(e), exterior_point(&e))),
        k in prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64],
    ) {
        let c = e.to_conic();
        let ck = ConicMatrix(c.0 * k);
        let (l1, _) = tangents_from(p, &c).unwrap();
        let scaled = HCoord(l1.0 * 7.5);
        prop_assert!(ck.tangency_residual(&scaled) < 1e-10);
        prop_assert!((c.incidence_residual(p) - ck.incidence_residual(p)).abs() < 1e-10);
        let g = classify(&ck).unwrap();
        prop_assert!(g.center.dist(e.center) < 1e-10);
        prop_assert!((g.semi_major - e.semi_major).abs() < 1e-10);
    }

    #[test]
    fn classify_inverts_matrix_of(
        x in -3.0..3.0f64, y in -3.0..3.0f64, a in 0.1..5.0f64, b in 0.1..5.0f64,
    ) {
        let e = AxisEllipse::new(Point2::new(x, y), a, b).unwrap();
        let g = classify(&matrix_of(&e)).unwrap();
        let scale = a.max(b);
        prop_assert!(g.center.dist(e.center) < 1e-12 * scale.max(e.center.norm()));
        prop_assert!((g.semi_major - a.max(b)).abs() < 1e-12 * scale);
        prop_assert!((g.semi_minor - a.min(b)).abs() < 1e-12 * scale);
    }

    #[test]
    fn affine_preserves_incidence_and_centers(
        e in ellipse(),
        m in (0.3..2.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.3..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
        t in 0.0..std::f64::consts::TAU,
    ) {
        let lin = Matrix2::new(m.0, m.1, m.2, m.3);
        prop_assume!(lin.determinant().abs() > 0.1);
        let map = AffineMap::new(lin, Point2::new(m.4, m.5)).unwrap();
        let c = e.to_conic();
        let mc = apply_affine(&map, &c);
        let p = e.point_at(t);
        prop_assert!(mc.incidence_residual(map.apply_point(p)) < 1e-10);
        let center = classify(&mc).unwrap().center;
        prop_assert!(center.dist(map.apply_point(e.center)) < 1e-9);
    }

    #[test]
    fn fit_recovers_sampled_ellipse(e in ellipse(), n in 5usize..40) {
        let pts: Vec<Point2> = (0..n)
            .map(|k| e.point_at(std::f64::consts::TAU * k as f64 / n as f64 + 0.1))
            .collect();
        let fit = fit_conic(&pts).unwrap();
        prop_assert!(fit.residual < 1e-8);
        let g = classify(&fit.conic).unwrap();
        prop_assert!(g.center.dist(e.center) < 1e-8);
        prop_assert!((g.semi_minor - e.semi_minor).abs() < 1e-8);
    }
}

#[test]
fn foci_are_not_affine_equivariant() {
    let e = GeneralEllipse::new(Point2::ORIGIN, 2.0, 1.0, 0.0).unwrap();
    let shear = AffineMap::new(Matrix2::new(1.0, 0.8, 0.0, 1.0), Point2::ORIGIN).unwrap();
    let image = classify(&apply_affine(&shear, &e.to_conic())).unwrap();
    let (f1, f2) = foci_of(&e);
    let (g1, g2) = foci_of(&image);
    let mapped = shear.apply_point(f1);
    assert!(mapped.dist(g1).min(mapped.dist(g2)) > 1e-3);
    let _ = f2;
}
