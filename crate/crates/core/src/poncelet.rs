//! Poncelet polygon chasing between an outer ellipse and a caustic.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centers::{ngon_centroids, CenterError, PolygonCentroids, Triangle};
use crate::conic::{
    classify, line_quadratic, matrix_of, pole, tangents_from, AffineMap, AxisEllipse, ConicError,
    ConicMatrix, GeneralEllipse, HCoord, Point2,
};

/// Closure defect (relative to the outer scale) below which a pair counts as a porism.
pub const PORISM_TOL: f64 = 1e-9;
/// Starts used to certify a porism.
pub const CERTIFY_PROBES: usize = 16;
/// Angular tolerance for recognizing the incoming edge among the two tangents.
pub const EDGE_ANGLE_TOL: f64 = 1e-9;
const DEGENERATE_SHIFT: f64 = 1e-3;
const CONTAINMENT_SAMPLES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PonceletError {
    #[error("caustic is not strictly inside the outer ellipse")]
    CausticNotInterior,
    #[error("vertex lies on the caustic")]
    VertexOnCaustic,
    #[error("tangent line touches the outer conic at ({}, {})", .0.x, .0.y)]
    NoSecondIntersection(Point2),
    #[error("pair is not a porism for n = {n}: max closure defect {max_defect:e}")]
    NotAPorism { n: usize, max_defect: f64 },
    #[error("closure defect has no sign change over the parameter bracket")]
    NoSignChange,
    #[error("closure search did not converge in {0} iterations")]
    MaxIterations(usize),
    #[error("polygon order must be at least 3, got {0}")]
    InvalidOrder(usize),
    #[error("outer conic must be an axis-aligned ellipse")]
    NotAxisAligned,
    #[error("constraint center is not interior to the outer conic")]
    CenterOutside,
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Center(#[from] CenterError),
}

/// Direction in which the first tangent is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    CounterClockwise,
    Clockwise,
}

/// Outer ellipse plus caustic: a candidate Poncelet configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicPair {
    pub outer: AxisEllipse,
    pub caustic: ConicMatrix,
    /// Geometric parameters of the caustic (center, axes, rotation).
    pub caustic_shape: GeneralEllipse,
    pub known_foci: Option<(Point2, Point2)>,
}

impl ConicPair {
    pub fn new(
        outer: AxisEllipse,
        caustic: ConicMatrix,
        known_foci: Option<(Point2, Point2)>,
    ) -> Result<Self, PonceletError> {
        let caustic_shape = classify(&caustic)?;
        let inside = (0..CONTAINMENT_SAMPLES)
            .map(|k| caustic_shape.point_at(TAU * k as f64 / CONTAINMENT_SAMPLES as f64))
            .all(|p| outer.level(p) < 0.0);
        if !inside {
            return Err(PonceletError::CausticNotInterior);
        }
        Ok(Self {
            outer,
            caustic,
            caustic_shape,
            known_foci,
        })
    }

    pub fn from_ellipses(
        outer: AxisEllipse,
        caustic: GeneralEllipse,
    ) -> Result<Self, PonceletError> {
        Self::new(outer, caustic.to_conic(), None)
    }

    pub fn outer_matrix(&self) -> ConicMatrix {
        matrix_of(&self.outer)
    }

    pub fn caustic_center(&self) -> Point2 {
        self.caustic_shape.center
    }

    pub fn scale(&self) -> f64 {
        self.outer.scale()
    }

    /// Image of the pair under an axis-preserving affine map.
    pub fn mapped(&self, m: &AffineMap) -> Result<ConicPair, PonceletError> {
        if !m.is_axis_scaling() {
            return Err(PonceletError::NotAxisAligned);
        }
        let outer = AxisEllipse::new(
            m.apply_point(self.outer.center),
            self.outer.a * m.linear[(0, 0)].abs(),
            self.outer.b * m.linear[(1, 1)].abs(),
        )?;
        let foci = self
            .known_foci
            .map(|(f, g)| (m.apply_point(f), m.apply_point(g)));
        ConicPair::new(outer, m.apply_conic(&self.caustic), foci)
    }

    /// Caustic scaled about its center by `1 + eps`.
    pub fn perturbed(&self, eps: f64) -> Result<ConicPair, PonceletError> {
        let caustic = self
            .caustic
            .scaled_about(self.caustic_center(), 1.0 + eps)?;
        ConicPair::new(self.outer, caustic, None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonSample {
    pub vertices: Vec<Point2>,
    /// Outer-ellipse parameter of vertex 0.
    pub t: f64,
}

impl PolygonSample {
    pub fn triangle(&self) -> Option<Triangle> {
        Triangle::from_slice(&self.vertices)
    }

    pub fn centroids(&self) -> Result<PolygonCentroids, CenterError> {
        ngon_centroids(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

/// Second intersection of a line through `p` (a point on `outer`) with `outer`.
fn second_intersection(
    line: &HCoord,
    p: Point2,
    outer: &ConicMatrix,
    scale: f64,
) -> Result<Point2, PonceletError> {
    let l = line.normalized_line()?;
    let dir = Point2::new(-l.v(), l.u());
    let (qa, qb, qc) = line_quadratic(outer, p, dir);
    let disc = (qb * qb - qa * qc).max(0.0);
    let q = -(qb + qb.signum() * disc.sqrt());
    let s = if q == 0.0 { 0.0 } else { q / qa };
    if !(s.abs() > 1e-12 * scale) {
        return Err(PonceletError::NoSecondIntersection(p));
    }
    Ok(p + dir * s)
}

fn tangent_pair(p: Point2, pair: &ConicPair) -> Result<(HCoord, HCoord), PonceletError> {
    tangents_from(p, &pair.caustic).map_err(|e| match e {
        ConicError::PointOnConic | ConicError::PointInside => PonceletError::VertexOnCaustic,
        other => PonceletError::Conic(other),
    })
}

/// One Poncelet step from `p`.
///
/// With an incoming edge, the tangent farther (in line-space angle) from it
/// is taken. Without one, the tangent whose contact point lies
/// counterclockwise of `p` around the caustic center is taken.
pub fn next_vertex(
    p: Point2,
    pair: &ConicPair,
    incoming: Option<&HCoord>,
) -> Result<(Point2, HCoord), PonceletError> {
    next_vertex_oriented(p, pair, incoming, Orientation::CounterClockwise)
}

pub fn next_vertex_oriented(
    p: Point2,
    pair: &ConicPair,
    incoming: Option<&HCoord>,
    orientation: Orientation,
) -> Result<(Point2, HCoord), PonceletError> {
    let (l1, l2) = tangent_pair(p, pair)?;
    let line = match incoming {
        Some(prev) => {
            if l1.angle_to(prev) >= l2.angle_to(prev) {
                l1
            } else {
                l2
            }
        }
        None => {
            let c = pair.caustic_center();
            let turn = |l: &HCoord| -> Result<f64, PonceletError> {
                let touch = pole(l, &pair.caustic)?;
                Ok((p - c).cross(touch - c))
            };
            let ccw = if turn(&l1)? > 0.0 { l1 } else { l2 };
            let cw = if ccw == l1 { l2 } else { l1 };
            match orientation {
                Orientation::CounterClockwise => ccw,
                Orientation::Clockwise => cw,
            }
        }
    };
    let q = second_intersection(&line, p, &pair.outer_matrix(), pair.scale())?;
    Ok((q, line))
}

/// Visit `steps + 1` vertices starting at `start` (the last one is the return point).
fn walk(
    pair: &ConicPair,
    start: Point2,
    steps: usize,
    orientation: Orientation,
) -> Result<Vec<Point2>, PonceletError> {
    let mut pts = Vec::with_capacity(steps + 1);
    pts.push(start);
    let mut p = start;
    let mut edge: Option<HCoord> = None;
    for _ in 0..steps {
        let (q, l) = next_vertex_oriented(p, pair, edge.as_ref(), orientation)?;
        pts.push(q);
        p = q;
        edge = Some(l);
    }
    Ok(pts)
}

/// `n` consecutive vertices starting at `P(t)`; closure is not assumed.
pub fn chase(pair: &ConicPair, t: f64, n: usize) -> Result<PolygonSample, PonceletError> {
    chase_oriented(pair, t, n, Orientation::CounterClockwise)
}

pub fn chase_oriented(
    pair: &ConicPair,
    t: f64,
    n: usize,
    orientation: Orientation,
) -> Result<PolygonSample, PonceletError> {
    if n < 3 {
        return Err(PonceletError::InvalidOrder(n));
    }
    let mut vertices = walk(pair, pair.outer.point_at(t), n - 1, orientation)?;
    vertices.truncate(n);
    Ok(PolygonSample { vertices, t })
}

/// Distance between `P(t)` and the vertex reached after `n` steps.
pub fn closure_defect(pair: &ConicPair, t: f64, n: usize) -> Result<f64, PonceletError> {
    if n < 3 {
        return Err(PonceletError::InvalidOrder(n));
    }
    let pts = walk(
        pair,
        pair.outer.point_at(t),
        n,
        Orientation::CounterClockwise,
    )?;
    Ok(pts[n].dist(pts[0]))
}

/// Total outer-parameter advance over `n` counterclockwise steps, minus `2π`.
pub fn angular_defect(pair: &ConicPair, t: f64, n: usize) -> Result<f64, PonceletError> {
    let pts = walk(
        pair,
        pair.outer.point_at(t),
        n,
        Orientation::CounterClockwise,
    )?;
    let mut total = 0.0;
    for w in pts.windows(2) {
        let d = pair.outer.parameter_of(w[1]) - pair.outer.parameter_of(w[0]);
        total += d.rem_euclid(TAU);
    }
    Ok(total - TAU)
}

/// Max closure defect over `probes` evenly spaced starts (offset from 0 so
/// symmetric starts are avoided).
pub fn max_closure_defect(pair: &ConicPair, n: usize, probes: usize) -> Result<f64, PonceletError> {
    let mut worst = 0.0_f64;
    for k in 0..probes {
        let t = TAU * (k as f64 + 0.5) / probes as f64;
        worst = worst.max(defect_with_shift(pair, t, n)?);
    }
    Ok(worst)
}

fn defect_with_shift(pair: &ConicPair, t: f64, n: usize) -> Result<f64, PonceletError> {
    let mut t = t;
    for _ in 0..8 {
        match closure_defect(pair, t, n) {
            Err(PonceletError::VertexOnCaustic) => t += DEGENERATE_SHIFT,
            other => return other,
        }
    }
    closure_defect(pair, t, n)
}

/// Fails with `NotAPorism` unless the max defect over the certification
/// probes is below `PORISM_TOL · scale`.
pub fn certify(pair: &ConicPair, n: usize) -> Result<f64, PonceletError> {
    let max_defect = max_closure_defect(pair, n, CERTIFY_PROBES)?;
    if max_defect < PORISM_TOL * pair.scale() {
        Ok(max_defect)
    } else {
        Err(PonceletError::NotAPorism { n, max_defect })
    }
}

/// Uniform samples `t = 2πk/count` of a certified porism, ordered by `k`.
pub fn sample_family(
    pair: &ConicPair,
    n: usize,
    count: usize,
) -> Result<Vec<PolygonSample>, PonceletError> {
    certify(pair, n)?;
    sample_uncertified(pair, n, count)
}

/// Same grid as [`sample_family`] without the porism gate.
pub fn sample_uncertified(
    pair: &ConicPair,
    n: usize,
    count: usize,
) -> Result<Vec<PolygonSample>, PonceletError> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut t = TAU * k as f64 / count as f64;
            let mut attempt = 0;
            loop {
                match chase(pair, t, n) {
                    Err(PonceletError::VertexOnCaustic) if attempt < 8 => {
                        t += DEGENERATE_SHIFT;
                        attempt += 1;
                    }
                    other => return other,
                }
            }
        })
        .collect()
}

/// Constraint on the caustic sought by [`search_caustic_ngon`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausticConstraint {
    pub center: Point2,
    /// Pin one focus here; the semi-major axis is then the free parameter.
    pub focus_at: Option<Point2>,
    /// Minor/major ratio used when no focus is pinned (axis-aligned caustic,
    /// size as the free parameter).
    pub aspect: f64,
}

impl CausticConstraint {
    pub fn centered(center: Point2) -> Self {
        Self {
            center,
            focus_at: None,
            aspect: 1.0,
        }
    }

    pub fn with_focus(center: Point2, focus: Point2) -> Self {
        Self {
            center,
            focus_at: Some(focus),
            aspect: 1.0,
        }
    }

    fn candidate(&self, param: f64) -> Result<GeneralEllipse, ConicError> {
        match self.focus_at {
            Some(f) if f.dist(self.center) > 0.0 => {
                GeneralEllipse::from_foci(f, self.center * 2.0 - f, param)
            }
            _ => GeneralEllipse::new(self.center, param, param * self.aspect, 0.0),
        }
    }

    fn lower_bound(&self) -> f64 {
        match self.focus_at {
            Some(f) => f.dist(self.center),
            None => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureSearchResult {
    pub caustic: ConicMatrix,
    pub shape: GeneralEllipse,
    /// Free parameter found (semi-major axis of the caustic).
    pub parameter: f64,
    pub max_defect: f64,
    pub pair: ConicPair,
}

const SEARCH_PROBES: usize = 8;
const SEARCH_SCAN: usize = 64;
const SEARCH_VALIDATION: usize = 32;
const SEARCH_MAX_ITER: usize = 200;
const SEARCH_SEED: u64 = 0x5eed_c105;

/// Find a caustic satisfying `constraint` for which `n`-gons close.
///
/// The free parameter is scanned at 64 values for a sign change of the mean
/// angular defect over 8 probe starts, then bisected. The result is checked
/// at 32 further seeded random starts.
pub fn search_caustic_ngon(
    outer: &ConicMatrix,
    constraint: &CausticConstraint,
    n: usize,
    tol: f64,
) -> Result<ClosureSearchResult, PonceletError> {
    if n < 3 {
        return Err(PonceletError::InvalidOrder(n));
    }
    let shape = classify(outer)?;
    let axis_ok = shape.is_circle(1e-12) || shape.rotation.abs() < 1e-12;
    if !axis_ok {
        return Err(PonceletError::NotAxisAligned);
    }
    let outer = if shape.is_circle(1e-12) {
        let r = 0.5 * (shape.semi_major + shape.semi_minor);
        AxisEllipse::new(shape.center, r, r)?
    } else {
        AxisEllipse::new(shape.center, shape.semi_major, shape.semi_minor)?
    };
    if outer.level(constraint.center) >= 0.0 {
        return Err(PonceletError::CenterOutside);
    }
    let scale = outer.scale();

    let contained = |param: f64| -> bool {
        constraint
            .candidate(param)
            .ok()
            .and_then(|e| ConicPair::from_ellipses(outer, e).ok())
            .is_some()
    };
    let lo = constraint.lower_bound() + 1e-9 * scale;
    if !contained(lo) {
        return Err(PonceletError::CausticNotInterior);
    }
    let mut hi_out = 2.0 * scale + lo;
    let mut hi_in = lo;
    for _ in 0..80 {
        let mid = 0.5 * (hi_in + hi_out);
        if contained(mid) {
            hi_in = mid;
        } else {
            hi_out = mid;
        }
    }
    let hi = hi_in;

    let pair_for = |param: f64| -> Result<ConicPair, PonceletError> {
        ConicPair::from_ellipses(outer, constraint.candidate(param)?)
    };
    let probe_ts: Vec<f64> = (0..SEARCH_PROBES)
        .map(|k| TAU * (k as f64 + 0.25) / SEARCH_PROBES as f64)
        .collect();
    let mean_defect = |param: f64| -> Result<f64, PonceletError> {
        let pair = pair_for(param)?;
        let mut sum = 0.0;
        for &t in &probe_ts {
            sum += angular_defect(&pair, t, n)?;
        }
        Ok(sum / SEARCH_PROBES as f64)
    };

    let grid: Vec<f64> = (0..SEARCH_SCAN)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / SEARCH_SCAN as f64)
        .collect();
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for &g in &grid {
        let d = match mean_defect(g) {
            Ok(d) => d,
            Err(PonceletError::VertexOnCaustic) => continue,
            Err(e) => return Err(e),
        };
        if let Some((pg, pd)) = prev {
            if pd > 0.0 && d <= 0.0 && (pd - d) < PI {
                bracket = Some((pg, g, pd));
                break;
            }
        }
        prev = Some((g, d));
    }
    let (mut a, mut b, mut fa) = bracket.ok_or(PonceletError::NoSignChange)?;
    let mut converged = false;
    for _ in 0..SEARCH_MAX_ITER {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            converged = true;
            break;
        }
        let fm = mean_defect(mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            converged = true;
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if !converged {
        return Err(PonceletError::MaxIterations(SEARCH_MAX_ITER));
    }
    let param = if mean_defect(a)?.abs() <= mean_defect(b)?.abs() {
        a
    } else {
        b
    };
    let shape = constraint.candidate(param)?;
    let pair = ConicPair::new(
        outer,
        shape.to_conic(),
        constraint
            .focus_at
            .map(|f| (f, constraint.center * 2.0 - f)),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let mut max_defect = 0.0_f64;
    let starts = probe_ts
        .iter()
        .copied()
        .chain((0..SEARCH_VALIDATION).map(|_| rng.gen_range(0.0..TAU)));
    for t in starts {
        max_defect = max_defect.max(defect_with_shift(&pair, t, n)?);
    }
    if max_defect > tol * scale {
        return Err(PonceletError::NotAPorism { n, max_defect });
    }
    Ok(ClosureSearchResult {
        caustic: pair.caustic,
        shape,
        parameter: param,
        max_defect,
        pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concentric(outer_r: f64, inner_r: f64) -> ConicPair {
        ConicPair::new(
            AxisEllipse::centered(outer_r, outer_r).unwrap(),
            ConicMatrix::circle(Point2::ORIGIN, inner_r),
            None,
        )
        .unwrap()
    }

    #[test]
    fn equilateral_step() {
        let pair = concentric(2.0, 1.0);
        let (q, _) = next_vertex(Point2::new(2.0, 0.0), &pair, None).unwrap();
        assert!(q.dist(Point2::new(-1.0, 3f64.sqrt())) < 1e-14);
        let pts = walk(
            &pair,
            Point2::new(2.0, 0.0),
            3,
            Orientation::CounterClockwise,
        )
        .unwrap();
        assert!(pts[3].dist(pts[0]) < 1e-12);
        assert!(closure_defect(&pair, 0.0, 3).unwrap() < 1e-12);
    }

    #[test]
    fn caustic_must_be_interior() {
        let r = ConicPair::new(
            AxisEllipse::centered(2.0, 1.0).unwrap(),
            ConicMatrix::circle(Point2::ORIGIN, 1.2),
            None,
        );
        assert_eq!(r.unwrap_err(), PonceletError::CausticNotInterior);
    }

    #[test]
    fn order_below_three_rejected() {
        let pair = concentric(2.0, 1.0);
        assert_eq!(
            chase(&pair, 0.0, 2).unwrap_err(),
            PonceletError::InvalidOrder(2)
        );
    }

    #[test]
    fn non_porism_has_large_defect() {
        let pair = ConicPair::new(
            AxisEllipse::centered(2.0, 1.0).unwrap(),
            ConicMatrix::circle(Point2::ORIGIN, 0.3),
            None,
        )
        .unwrap();
        for t in [0.3, 1.7, 4.1] {
            assert!(closure_defect(&pair, t, 3).unwrap() > 1e-3);
        }
        assert!(matches!(
            sample_family(&pair, 3, 8),
            Err(PonceletError::NotAPorism { .. })
        ));
    }

    #[test]
    fn single_sample_starts_at_zero() {
        let pair = concentric(2.0, 1.0);
        let s = sample_family(&pair, 3, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].t, 0.0);
    }

    #[test]
    fn search_recovers_regular_square_caustic() {
        let outer = ConicMatrix::circle(Point2::ORIGIN, 1.0);
        let res = search_caustic_ngon(
            &outer,
            &CausticConstraint::with_focus(Point2::ORIGIN, Point2::ORIGIN),
            4,
            1e-9,
        )
        .unwrap();
        assert!((res.parameter - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn search_rejects_center_outside() {
        let outer = ConicMatrix::circle(Point2::ORIGIN, 1.0);
        let c = CausticConstraint::centered(Point2::new(1.5, 0.0));
        assert_eq!(
            search_caustic_ngon(&outer, &c, 3, 1e-9).unwrap_err(),
            PonceletError::CenterOutside
        );
    }
}
