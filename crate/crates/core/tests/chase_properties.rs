use std::f64::consts::TAU;

use poncelet_core::conic::{AffineMap, Point2};
use poncelet_core::families;
use poncelet_core::poncelet::*;
use proptest::prelude::*;

fn family_pair(which: usize) -> (ConicPair, usize) {
    let spec = match which {
        0 => families::focal_x1(2.0, 1.0),
        1 => families::iso_x2(2.0, 1.0),
        2 => families::focal_x4(2.0, 1.0),
        3 => families::iso_x7(2.0, 1.0),
        4 => families::dual(2.0, 1.0),
        _ => families::macbeath_ngon(1.0, Point2::new(0.2, 0.0), 5),
    }
    .unwrap();
    (spec.pair, spec.n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn edges_tangent_and_vertices_incident(which in 0usize..6, t in 0.0..TAU) {
        let (pair, n) = family_pair(which);
        let s = chase(&pair, t, n).unwrap();
        let outer = pair.outer_matrix();
        for v in &s.vertices {
            prop_assert!(outer.incidence_residual(*v) < 1e-10 * pair.scale());
        }
        for (p, q) in s.edges() {
            let line = p.homogeneous().cross(&q.homogeneous());
            prop_assert!(pair.caustic.tangency_residual(&line) < 1e-10);
        }
    }

    #[test]
    fn reverse_chase_visits_same_vertices(which in 0usize..6, t in 0.0..TAU) {
        let (pair, n) = family_pair(which);
        let ccw = chase(&pair, t, n).unwrap();
        let cw = chase_oriented(&pair, t, n, Orientation::Clockwise).unwrap();
        for v in &cw.vertices {
            let nearest = ccw.vertices.iter().map(|w| w.dist(*v)).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-10 * pair.scale());
        }
    }

    #[test]
    fn chase_commutes_with_axis_scalings(
        which in 0usize..6, t in 0.0..TAU,
        sx in 0.5..2.0f64, sy in 0.5..2.0f64, dx in -1.0..1.0f64, dy in -1.0..1.0f64,
    ) {
        let (pair, n) = family_pair(which);
        let m = AffineMap::new(
            nalgebra::Matrix2::new(sx, 0.0, 0.0, sy),
            Point2::new(dx, dy),
        ).unwrap();
        let image = pair.mapped(&m).unwrap();
        let a = chase(&image, t, n).unwrap();
        let b = chase(&pair, t, n).unwrap();
        for (p, q) in a.vertices.iter().zip(&b.vertices) {
            prop_assert!(p.dist(m.apply_point(*q)) < 1e-9);
        }
    }
}

#[test]
fn families_close_over_64_starts() {
    for which in 0..6 {
        let (pair, n) = family_pair(which);
        let d = max_closure_defect(&pair, n, 64).unwrap();
        assert!(d < 1e-9 * pair.scale(), "family {which}: {d:e}");
    }
}

#[test]
fn perturbed_caustics_fail_the_gate() {
    for which in 0..6 {
        let (pair, n) = family_pair(which);
        let bad = pair.perturbed(1e-3).unwrap();
        assert!(matches!(
            certify(&bad, n),
            Err(PonceletError::NotAPorism { .. })
        ));
    }
}

#[test]
fn sampling_is_deterministic() {
    let (pair, n) = family_pair(2);
    let a = sample_family(&pair, n, 64).unwrap();
    let b = sample_family(&pair, n, 64).unwrap();
    assert_eq!(a, b);
    for (k, s) in a.iter().enumerate() {
        assert_eq!(s.t, TAU * k as f64 / 64.0);
    }
}
