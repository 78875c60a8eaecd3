//! Triangle metrics, Kimberling centers, derived triangles and the distance
//! identities used by the family checks.
//!
//! Centers are evaluated from barycentric triples written in terms of the
//! side lengths `l1 = |BC|`, `l2 = |CA|`, `l3 = |AB|`. X20 and X354 are
//! computed from their geometric definitions instead.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conic::{pole, ConicError, ConicMatrix, Point2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CenterError {
    #[error("triangle is degenerate (collinear vertices)")]
    DegenerateTriangle,
    #[error("unsupported center {0}")]
    UnsupportedCenter(String),
    #[error("barycentric weights sum to zero; point at infinity")]
    PointAtInfinity,
    #[error("point lies on a sideline")]
    OnSideline,
    #[error("a sideline passes through the conic center; its pole is at infinity")]
    PoleAtInfinity,
    #[error("Adams circle undefined for this triangle")]
    DegenerateAdams,
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error(transparent)]
    Conic(#[from] ConicError),
}

/// Kimberling index of a supported center, or one of the polygon centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CenterId {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
    X7,
    X8,
    X10,
    X20,
    X354,
    /// Vertex centroid.
    C0,
    /// Perimeter centroid.
    C1,
    /// Area centroid.
    C2,
}

impl CenterId {
    pub const TRIANGLE_CENTERS: [CenterId; 11] = [
        CenterId::X1,
        CenterId::X2,
        CenterId::X3,
        CenterId::X4,
        CenterId::X5,
        CenterId::X6,
        CenterId::X7,
        CenterId::X8,
        CenterId::X10,
        CenterId::X20,
        CenterId::X354,
    ];

    pub fn is_polygon_centroid(self) -> bool {
        matches!(self, CenterId::C0 | CenterId::C1 | CenterId::C2)
    }
}

impl fmt::Display for CenterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CenterId {
    type Err = CenterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase();
        let id = match t.trim_start_matches('X') {
            "1" => CenterId::X1,
            "2" => CenterId::X2,
            "3" => CenterId::X3,
            "4" => CenterId::X4,
            "5" => CenterId::X5,
            "6" => CenterId::X6,
            "7" => CenterId::X7,
            "8" => CenterId::X8,
            "10" => CenterId::X10,
            "20" => CenterId::X20,
            "354" => CenterId::X354,
            _ => match t.as_str() {
                "C0" => CenterId::C0,
                "C1" => CenterId::C1,
                "C2" => CenterId::C2,
                _ => return Err(CenterError::UnsupportedCenter(s.to_string())),
            },
        };
        Ok(id)
    }
}

/// Barycentric weights `[z1 : z2 : z3]`, defined up to scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarycentricTriple(pub f64, pub f64, pub f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
}

impl Triangle {
    pub fn new(a: Point2, b: Point2, c: Point2) -> Self {
        Self { a, b, c }
    }

    pub fn from_slice(v: &[Point2]) -> Option<Self> {
        match v {
            [a, b, c] => Some(Self::new(*a, *b, *c)),
            _ => None,
        }
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.a, self.b, self.c]
    }

    /// Twice the signed area.
    pub fn signed_area2(&self) -> f64 {
        (self.b - self.a).cross(self.c - self.a)
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Triangle {
        Triangle::new(f(self.a), f(self.b), f(self.c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleMetrics {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub s: f64,
    pub area: f64,
    pub circumradius: f64,
    pub inradius: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl TriangleMetrics {
    pub fn sides(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    pub fn sum_sq_sides(&self) -> f64 {
        self.l1 * self.l1 + self.l2 * self.l2 + self.l3 * self.l3
    }
}

pub fn metrics(t: &Triangle) -> Result<TriangleMetrics, CenterError> {
    let l1 = t.b.dist(t.c);
    let l2 = t.c.dist(t.a);
    let l3 = t.a.dist(t.b);
    let longest = l1.max(l2).max(l3);
    let area = t.signed_area2().abs() / 2.0;
    if !(area > 1e-14 * longest * longest) {
        return Err(CenterError::DegenerateTriangle);
    }
    let s = (l1 + l2 + l3) / 2.0;
    let inradius = area / s;
    // tan(θᵢ/2) = r / (s − lᵢ): side-length only, well conditioned at both ends
    let half = |l: f64| 2.0 * inradius.atan2(s - l);
    Ok(TriangleMetrics {
        l1,
        l2,
        l3,
        s,
        area,
        circumradius: l1 * l2 * l3 / (4.0 * area),
        inradius,
        theta1: half(l1),
        theta2: half(l2),
        theta3: half(l3),
    })
}

/// `(z1·A + z2·B + z3·C) / (z1 + z2 + z3)`.
pub fn barycentric_point(t: &Triangle, z: BarycentricTriple) -> Result<Point2, CenterError> {
    let BarycentricTriple(z1, z2, z3) = z;
    let sum = z1 + z2 + z3;
    let mag = z1.abs() + z2.abs() + z3.abs();
    if !(sum.abs() > 1e-14 * mag) {
        return Err(CenterError::PointAtInfinity);
    }
    Ok((t.a * z1 + t.b * z2 + t.c * z3) * (1.0 / sum))
}

/// Normalized barycentrics (signed area ratios) of a Cartesian point.
pub fn barycentrics_of(t: &Triangle, p: Point2) -> Result<BarycentricTriple, CenterError> {
    let total = t.signed_area2();
    let longest = t.a.dist(t.b).max(t.b.dist(t.c)).max(t.c.dist(t.a));
    if !(total.abs() > 1e-14 * longest * longest) {
        return Err(CenterError::DegenerateTriangle);
    }
    let z1 = (t.b - p).cross(t.c - p) / total;
    let z2 = (t.c - p).cross(t.a - p) / total;
    let z3 = (t.a - p).cross(t.b - p) / total;
    Ok(BarycentricTriple(z1, z2, z3))
}

/// Barycentric triple of a center with a closed-form side-length expression.
pub fn center_barycentrics(m: &TriangleMetrics, id: CenterId) -> Option<BarycentricTriple> {
    let (a, b, c) = (m.l1, m.l2, m.l3);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let s = m.s;
    let z = match id {
        CenterId::X1 => BarycentricTriple(a, b, c),
        CenterId::X2 | CenterId::C0 | CenterId::C2 => BarycentricTriple(1.0, 1.0, 1.0),
        CenterId::X3 => BarycentricTriple(
            a2 * (b2 + c2 - a2),
            b2 * (c2 + a2 - b2),
            c2 * (a2 + b2 - c2),
        ),
        CenterId::X4 => {
            let sa = (b2 + c2 - a2) / 2.0;
            let sb = (c2 + a2 - b2) / 2.0;
            let sc = (a2 + b2 - c2) / 2.0;
            BarycentricTriple(sb * sc, sc * sa, sa * sb)
        }
        CenterId::X5 => BarycentricTriple(
            a2 * (b2 + c2) - (b2 - c2).powi(2),
            b2 * (c2 + a2) - (c2 - a2).powi(2),
            c2 * (a2 + b2) - (a2 - b2).powi(2),
        ),
        CenterId::X6 => BarycentricTriple(a2, b2, c2),
        CenterId::X7 => BarycentricTriple((s - b) * (s - c), (s - c) * (s - a), (s - a) * (s - b)),
        CenterId::X8 => BarycentricTriple(s - a, s - b, s - c),
        CenterId::X10 | CenterId::C1 => BarycentricTriple(b + c, c + a, a + b),
        CenterId::X20 | CenterId::X354 => return None,
    };
    Some(z)
}

/// Cartesian position of a triangle center.
pub fn center(t: &Triangle, id: CenterId) -> Result<Point2, CenterError> {
    let m = metrics(t)?;
    match id {
        CenterId::X20 => {
            let x3 = center(t, CenterId::X3)?;
            let x4 = center(t, CenterId::X4)?;
            Ok(x3 * 2.0 - x4)
        }
        CenterId::X354 => center(&intouch_triangle(t)?, CenterId::X2),
        _ => {
            let z = center_barycentrics(&m, id)
                .ok_or_else(|| CenterError::UnsupportedCenter(id.to_string()))?;
            barycentric_point(t, z)
        }
    }
}

/// Isogonal conjugate `[l1²/z1 : l2²/z2 : l3²/z3]`.
pub fn isogonal_conjugate(t: &Triangle, p: Point2) -> Result<Point2, CenterError> {
    let m = metrics(t)?;
    let BarycentricTriple(z1, z2, z3) = barycentrics_of(t, p)?;
    let tol = 1e-12;
    if z1.abs() < tol || z2.abs() < tol || z3.abs() < tol {
        return Err(CenterError::OnSideline);
    }
    barycentric_point(
        t,
        BarycentricTriple(m.l1 * m.l1 / z1, m.l2 * m.l2 / z2, m.l3 * m.l3 / z3),
    )
}

/// Contact triangle: `D` on BC, `E` on CA, `F` on AB.
pub fn intouch_triangle(t: &Triangle) -> Result<Triangle, CenterError> {
    let m = metrics(t)?;
    let d = t.b + (t.c - t.b) * ((m.s - m.l2) / m.l1);
    let e = t.c + (t.a - t.c) * ((m.s - m.l3) / m.l2);
    let f = t.a + (t.b - t.a) * ((m.s - m.l1) / m.l3);
    Ok(Triangle::new(d, e, f))
}

/// Triangle of the poles of the sidelines; vertex `i` is the pole of the
/// side opposite vertex `i`.
pub fn polar_triangle(t: &Triangle, c: &ConicMatrix) -> Result<Triangle, CenterError> {
    let side_pole = |p: Point2, q: Point2| {
        let line = p.homogeneous().cross(&q.homogeneous());
        pole(&line, c).map_err(|e| match e {
            ConicError::PointAtInfinity => CenterError::PoleAtInfinity,
            other => CenterError::Conic(other),
        })
    };
    Ok(Triangle::new(
        side_pole(t.b, t.c)?,
        side_pole(t.c, t.a)?,
        side_pole(t.a, t.b)?,
    ))
}

/// Polygon whose vertices are the poles of consecutive edges; edge `i`
/// joins vertex `i` and `i + 1`.
pub fn polar_polygon(vertices: &[Point2], c: &ConicMatrix) -> Result<Vec<Point2>, CenterError> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let line = vertices[i]
                .homogeneous()
                .cross(&vertices[(i + 1) % n].homogeneous());
            pole(&line, c).map_err(|e| match e {
                ConicError::PointAtInfinity => CenterError::PoleAtInfinity,
                other => CenterError::Conic(other),
            })
        })
        .collect()
}

/// Signed squared radius of the polar circle, `4R² − Σl²/2`.
pub fn polar_circle_sq(m: &TriangleMetrics) -> f64 {
    4.0 * m.circumradius * m.circumradius - m.sum_sq_sides() / 2.0
}

/// Adams circle radius `r·√(ρ² − l1l2l3·s − ρs²) / (ρ − s²)`.
pub fn adams_radius(m: &TriangleMetrics) -> Result<f64, CenterError> {
    let (l1, l2, l3, s) = (m.l1, m.l2, m.l3, m.s);
    let rho = l1 * l2 + l2 * l3 + l3 * l1;
    let denom = rho - s * s;
    if denom.abs() <= 1e-14 * rho {
        return Err(CenterError::DegenerateAdams);
    }
    let mut radicand = rho * rho - l1 * l2 * l3 * s - rho * s * s;
    if radicand < 0.0 {
        if radicand >= -1e-12 * rho * rho {
            radicand = 0.0;
        } else {
            return Err(CenterError::DegenerateAdams);
        }
    }
    Ok(m.inradius * radicand.sqrt() / denom)
}

/// `|X1X2|²` from side lengths alone.
pub fn dist_sq_x1_x2(m: &TriangleMetrics) -> f64 {
    let (l1, l2, l3) = (m.l1, m.l2, m.l3);
    let cubes = l1.powi(3) + l2.powi(3) + l3.powi(3);
    let prod = l1 * l2 * l3;
    let mixed =
        l2 * l1 * l1 + l3 * l1 * l1 + l2 * l2 * l1 + l3 * l3 * l1 + l2 * l3 * l3 + l2 * l2 * l3;
    -(cubes + 9.0 * prod - 2.0 * mixed) / (9.0 * (l1 + l2 + l3))
}

/// `|X1X4|² = 2r² + 4R² − Σl²/2`.
pub fn dist_sq_x1_x4(m: &TriangleMetrics) -> f64 {
    2.0 * m.inradius * m.inradius + polar_circle_sq(m)
}

/// `|X1X7|² = r²·(1 − 3s²/(r + 4R)²)`.
pub fn dist_sq_x1_x7(m: &TriangleMetrics) -> f64 {
    let r = m.inradius;
    let k = r + 4.0 * m.circumradius;
    r * r * (1.0 - 3.0 * m.s * m.s / (k * k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSums {
    pub sin_half_sum: f64,
    pub tan_half_sum: f64,
    pub cos2_sum: f64,
    pub cos_prod: f64,
    pub cos_sum: f64,
}

pub fn angle_sums(m: &TriangleMetrics) -> AngleSums {
    let th = m.angles();
    let sides = m.sides();
    AngleSums {
        sin_half_sum: th.iter().map(|t| (t / 2.0).sin()).sum(),
        tan_half_sum: sides.iter().map(|l| m.inradius / (m.s - l)).sum(),
        cos2_sum: th.iter().map(|t| (2.0 * t).cos()).sum(),
        cos_prod: th.iter().map(|t| t.cos()).product(),
        cos_sum: th.iter().map(|t| t.cos()).sum(),
    }
}

/// Interior angles of a convex polygon given in either orientation.
pub fn polygon_angles(vertices: &[Point2]) -> Result<Vec<f64>, CenterError> {
    let n = vertices.len();
    if n < 3 {
        return Err(CenterError::TooFewVertices);
    }
    Ok((0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n] - vertices[i];
            let next = vertices[(i + 1) % n] - vertices[i];
            prev.cross(next).abs().atan2(prev.dot(next))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonCentroids {
    pub c0: Point2,
    pub c1: Point2,
    pub c2: Point2,
}

impl PolygonCentroids {
    pub fn get(&self, id: CenterId) -> Option<Point2> {
        match id {
            CenterId::C0 => Some(self.c0),
            CenterId::C1 => Some(self.c1),
            CenterId::C2 => Some(self.c2),
            _ => None,
        }
    }
}

fn segments_cross(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Vertex (C0), perimeter (C1) and area (C2) centroids of a simple polygon.
pub fn ngon_centroids(vertices: &[Point2]) -> Result<PolygonCentroids, CenterError> {
    let n = vertices.len();
    if n < 3 {
        return Err(CenterError::TooFewVertices);
    }
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(
                vertices[i],
                vertices[(i + 1) % n],
                vertices[j],
                vertices[(j + 1) % n],
            ) {
                return Err(CenterError::SelfIntersecting);
            }
        }
    }
    let inv_n = 1.0 / n as f64;
    let c0 = vertices.iter().fold(Point2::ORIGIN, |acc, p| acc + *p) * inv_n;

    let mut perim = 0.0;
    let mut c1 = Point2::ORIGIN;
    let mut area2 = 0.0;
    let mut moment = Point2::ORIGIN;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let len = p.dist(q);
        perim += len;
        c1 = c1 + p.midpoint(q) * len;
        // shoelace relative to c0 for conditioning
        let (pp, qq) = (p - c0, q - c0);
        let cr = pp.cross(qq);
        area2 += cr;
        moment = moment + (pp + qq) * cr;
    }
    let scale = perim * perim;
    if !(area2.abs() > 1e-14 * scale) {
        return Err(CenterError::DegenerateTriangle);
    }
    Ok(PolygonCentroids {
        c0,
        c1: c1 * (1.0 / perim),
        c2: c0 + moment * (1.0 / (3.0 * area2)),
    })
}

/// Sum of interior angles expected for a simple n-gon.
pub fn interior_angle_total(n: usize) -> f64 {
    (n as f64 - 2.0) * PI
}
