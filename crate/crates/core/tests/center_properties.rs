use nalgebra::Matrix2;
use poncelet_core::centers::*;
use poncelet_core::conic::{AffineMap, Point2};
use poncelet_core::invariants::IdentityCheck;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn well_shaped(t: &Triangle) -> bool {
    let [a, b, c] = t.vertices();
    let longest = a.dist(b).max(b.dist(c)).max(c.dist(a));
    t.signed_area2().abs() > 0.1 * longest * longest
}

fn triangle() -> impl Strategy<Value = Triangle> {
    prop::array::uniform6(-5.0..5.0f64)
        .prop_map(|v| {
            Triangle::new(
                Point2::new(v[0], v[1]),
                Point2::new(v[2], v[3]),
                Point2::new(v[4], v[5]),
            )
        })
        .prop_filter("near-degenerate", well_shaped)
}

fn random_triangles(seed: u64, count: usize) -> Vec<Triangle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p = || Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let t = Triangle::new(p(), p(), p());
        if well_shaped(&t) {
            out.push(t);
        }
    }
    out
}

#[test]
fn identity_suite_on_random_triangles() {
    for t in random_triangles(7, 100) {
        for check in IdentityCheck::ALL {
            let r = check.residual(&t).unwrap();
            assert!(r.abs() < 1e-10, "{check:?} residual {r:e} on {t:?}");
        }
        let x20 = center(&t, CenterId::X20).unwrap();
        let expected = center(&t, CenterId::X3).unwrap() * 2.0 - center(&t, CenterId::X4).unwrap();
        let big_r = metrics(&t).unwrap().circumradius;
        assert!(x20.dist(expected) < 1e-10 * big_r);
    }
}

#[test]
fn triangle_centroid_aliases() {
    for t in random_triangles(11, 10) {
        let c = ngon_centroids(&t.vertices()).unwrap();
        let x2 = center(&t, CenterId::X2).unwrap();
        assert!(c.c0.dist(x2) < 1e-12);
        assert!(c.c2.dist(x2) < 1e-12);
        assert!(c.c1.dist(center(&t, CenterId::X10).unwrap()) < 1e-12);
    }
}

#[test]
fn circumcenter_and_orthocenter_are_conjugate() {
    for t in random_triangles(13, 10) {
        let x3 = center(&t, CenterId::X3).unwrap();
        let x4 = center(&t, CenterId::X4).unwrap();
        let big_r = metrics(&t).unwrap().circumradius;
        assert!(isogonal_conjugate(&t, x3).unwrap().dist(x4) < 1e-10 * big_r);
    }
}

fn rotation(angle: f64, shift: Point2) -> AffineMap {
    let (s, c) = angle.sin_cos();
    AffineMap::new(Matrix2::new(c, -s, s, c), shift).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn isogonal_conjugation_is_an_involution(t in triangle(), w in prop::array::uniform3(0.1..1.0f64)) {
        let p = barycentric_point(&t, BarycentricTriple(w[0], w[1], w[2])).unwrap();
        let q = isogonal_conjugate(&t, p).unwrap();
        let back = isogonal_conjugate(&t, q).unwrap();
        prop_assert!(back.dist(p) < 1e-8 * metrics(&t).unwrap().circumradius);
    }

    #[test]
    fn centers_follow_rigid_motions(
        t in triangle(), angle in 0.0..std::f64::consts::TAU,
        dx in -3.0..3.0f64, dy in -3.0..3.0f64,
    ) {
        let m = rotation(angle, Point2::new(dx, dy));
        let image = t.map(|p| m.apply_point(p));
        let scale = metrics(&t).unwrap().circumradius.max(1.0);
        for id in CenterId::TRIANGLE_CENTERS {
            let a = m.apply_point(center(&t, id).unwrap());
            let b = center(&image, id).unwrap();
            prop_assert!(a.dist(b) < 1e-9 * scale, "{id}");
        }
    }

    #[test]
    fn centroid_follows_affine_maps(
        t in triangle(),
        m in (0.3..2.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.3..2.0f64),
    ) {
        let lin = Matrix2::new(m.0, m.1, m.2, m.3);
        prop_assume!(lin.determinant().abs() > 0.1);
        let map = AffineMap::new(lin, Point2::new(0.5, -0.25)).unwrap();
        let image = t.map(|p| map.apply_point(p));
        let a = map.apply_point(center(&t, CenterId::X2).unwrap());
        prop_assert!(a.dist(center(&image, CenterId::X2).unwrap()) < 1e-10);
    }
}

#[test]
fn only_the_centroid_survives_a_shear() {
    let t = Triangle::new(
        Point2::new(0.0, 0.0),
        Point2::new(4.0, 0.0),
        Point2::new(1.0, 2.5),
    );
    let shear = AffineMap::new(Matrix2::new(1.0, 0.7, 0.0, 1.0), Point2::ORIGIN).unwrap();
    let image = t.map(|p| shear.apply_point(p));
    let moved = |id| {
        shear
            .apply_point(center(&t, id).unwrap())
            .dist(center(&image, id).unwrap())
    };
    assert!(moved(CenterId::X2) < 1e-12);
    for id in [CenterId::X1, CenterId::X3, CenterId::X4] {
        assert!(moved(id) > 1e-3, "{id} looked affine-equivariant");
    }
}
