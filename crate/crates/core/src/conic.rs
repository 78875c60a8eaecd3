//! Projective conic algebra.
//!
//! Points, lines and conics live in homogeneous coordinates. A conic is the
//! full symmetric 3×3 matrix `M` with `pᵀ M p = 0` on the curve, so line
//! pairs produced by the tangent construction are ordinary values of the same
//! type.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Root tolerance used when collapsing numerically coincident solutions.
pub const ROOT_TOL: f64 = 1e-12;
/// Geometric residual tolerance (incidence, tangency).
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Squared half-chord (relative to scale²) below which a line counts as tangent.
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConicError {
    #[error("conic is not a real ellipse")]
    NotAnEllipse,
    #[error("point lies on the conic; tangent lines coincide")]
    PointOnConic,
    #[error("point lies inside the conic; no real tangents")]
    PointInside,
    #[error("line at infinity has no affine intersection")]
    LineAtInfinity,
    #[error("conic matrix is singular")]
    SingularConic,
    #[error("point is at infinity")]
    PointAtInfinity,
    #[error("conic fit is rank deficient ({null_dims} null directions)")]
    DegenerateFit { null_dims: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("affine map is singular")]
    SingularMap,
    #[error("degenerate conic does not split into two real lines")]
    NotALinePair,
    #[error("invalid ellipse parameters: {0}")]
    InvalidEllipse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        (self + o) * 0.5
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn homogeneous(self) -> HCoord {
        HCoord::new(self.x, self.y, 1.0)
    }

    /// Distance from this point to the infinite line through `p` and `q`.
    pub fn dist_to_line(self, p: Point2, q: Point2) -> f64 {
        let d = q - p;
        let len = d.norm();
        if len == 0.0 {
            return self.dist(p);
        }
        (d.cross(self - p) / len).abs()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Homogeneous coordinates of a point or a line, defined up to nonzero scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HCoord(pub Vector3<f64>);

impl HCoord {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        Self(Vector3::new(u, v, w))
    }

    pub fn u(&self) -> f64 {
        self.0[0]
    }

    pub fn v(&self) -> f64 {
        self.0[1]
    }

    pub fn w(&self) -> f64 {
        self.0[2]
    }

    /// Join of two points, or meet of two lines.
    pub fn cross(&self, o: &HCoord) -> HCoord {
        HCoord(self.0.cross(&o.0))
    }

    /// Dehomogenize a point. Fails when `w` is negligible against `(u, v)`.
    pub fn to_point(&self) -> Result<Point2, ConicError> {
        let w = self.w();
        let uv = self.u().hypot(self.v());
        if w == 0.0 || w.abs() <= 1e-14 * uv {
            return Err(ConicError::PointAtInfinity);
        }
        Ok(Point2::new(self.u() / w, self.v() / w))
    }

    /// Line scaled so its normal `(u, v)` has unit length.
    pub fn normalized_line(&self) -> Result<HCoord, ConicError> {
        let n = self.u().hypot(self.v());
        if n == 0.0 {
            return Err(ConicError::LineAtInfinity);
        }
        Ok(HCoord(self.0 / n))
    }

    /// Signed distance of a point to this line (line must have a finite normal).
    pub fn signed_distance(&self, p: Point2) -> f64 {
        let n = self.u().hypot(self.v());
        (self.u() * p.x + self.v() * p.y + self.w()) / n
    }

    /// Angle between two lines in line space, in `[0, π/2]`.
    pub fn angle_to(&self, o: &HCoord) -> f64 {
        let a = Point2::new(self.u(), self.v());
        let b = Point2::new(o.u(), o.v());
        let c = a.cross(b).abs();
        let d = a.dot(b).abs();
        c.atan2(d)
    }
}

/// Symmetric 3×3 matrix of a projective conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicMatrix(pub Matrix3<f64>);

impl ConicMatrix {
    /// Build from an arbitrary matrix; the symmetric part is kept.
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    /// Conic `A x² + B xy + C y² + D x + E y + F = 0`.
    pub fn from_coefficients(c: [f64; 6]) -> Self {
        let [a, b, cc, d, e, f] = c;
        Self(Matrix3::new(
            a,
            b / 2.0,
            d / 2.0,
            b / 2.0,
            cc,
            e / 2.0,
            d / 2.0,
            e / 2.0,
            f,
        ))
    }

    pub fn coefficients(&self) -> [f64; 6] {
        let m = &self.0;
        [
            m[(0, 0)],
            2.0 * m[(0, 1)],
            m[(1, 1)],
            2.0 * m[(0, 2)],
            2.0 * m[(1, 2)],
            m[(2, 2)],
        ]
    }

    /// Circle of the given radius.
    pub fn circle(center: Point2, radius: f64) -> Self {
        matrix_of(&AxisEllipse {
            center,
            a: radius,
            b: radius,
        })
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let h = p.homogeneous().0;
        h.dot(&(self.0 * h))
    }

    /// Frobenius-normalized copy, sign fixed so the leading block has
    /// nonnegative trace.
    pub fn normalized(&self) -> ConicMatrix {
        let n = self.0.norm();
        let mut m = self.0 / n;
        if m[(0, 0)] + m[(1, 1)] < 0.0 {
            m = -m;
        }
        ConicMatrix(m)
    }

    /// Adjugate matrix, i.e. the dual conic of tangent lines.
    pub fn dual(&self) -> Matrix3<f64> {
        adjugate(&self.0)
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Numerical rank with a relative singular-value threshold.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = self.0.singular_values();
        let max = sv.max();
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|s| **s > rel_tol * max).count()
    }

    /// Normalized residual of the tangency condition `lᵀ C* l = 0`.
    pub fn tangency_residual(&self, line: &HCoord) -> f64 {
        let l = match line.normalized_line() {
            Ok(l) => l.0,
            Err(_) => return f64::INFINITY,
        };
        let d = self.normalized().dual();
        let dn = d.norm();
        if dn == 0.0 {
            return f64::INFINITY;
        }
        (l.dot(&(d * l)) / dn).abs()
    }

    /// Normalized incidence residual of a point on this conic.
    pub fn incidence_residual(&self, p: Point2) -> f64 {
        let h = p.homogeneous().0;
        let n = self.normalized();
        (h.dot(&(n.0 * h)) / h.norm_squared()).abs()
    }

    /// Conic scaled about `center` by `factor`.
    pub fn scaled_about(&self, center: Point2, factor: f64) -> Result<ConicMatrix, ConicError> {
        let m = AffineMap::new(
            Matrix2::new(factor, 0.0, 0.0, factor),
            center - center * factor,
        )?;
        Ok(m.apply_conic(self))
    }

    /// Center of a central conic.
    pub fn center(&self) -> Result<Point2, ConicError> {
        let q = self.0.fixed_view::<2, 2>(0, 0).into_owned();
        let rhs = -Vector2::new(self.0[(0, 2)], self.0[(1, 2)]);
        let inv = q.try_inverse().ok_or(ConicError::SingularConic)?;
        let c = inv * rhs;
        Ok(Point2::new(c[0], c[1]))
    }
}

fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    // adj(M)[i][j] = cofactor(M)[j][i]
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// Ellipse with axes parallel to the coordinate axes: `a` along x, `b` along y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisEllipse {
    pub center: Point2,
    pub a: f64,
    pub b: f64,
}

impl AxisEllipse {
    pub fn new(center: Point2, a: f64, b: f64) -> Result<Self, ConicError> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || !center.is_finite() {
            return Err(ConicError::InvalidEllipse(format!("a={a}, b={b}")));
        }
        Ok(Self { center, a, b })
    }

    pub fn centered(a: f64, b: f64) -> Result<Self, ConicError> {
        Self::new(Point2::ORIGIN, a, b)
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.center + Point2::new(self.a * t.cos(), self.b * t.sin())
    }

    /// Eccentric-anomaly parameter of a point (exact for points on the ellipse).
    pub fn parameter_of(&self, p: Point2) -> f64 {
        let d = p - self.center;
        (d.y / self.b).atan2(d.x / self.a)
    }

    /// `(x/a)² + (y/b)² − 1` in local coordinates: negative inside.
    pub fn level(&self, p: Point2) -> f64 {
        let d = p - self.center;
        (d.x / self.a).powi(2) + (d.y / self.b).powi(2) - 1.0
    }

    pub fn scale(&self) -> f64 {
        self.a.max(self.b)
    }

    /// Half the focal distance, `√|a² − b²|`.
    pub fn focal_half_distance(&self) -> f64 {
        (self.a * self.a - self.b * self.b).abs().sqrt()
    }

    pub fn to_general(&self) -> GeneralEllipse {
        if self.a >= self.b {
            GeneralEllipse {
                center: self.center,
                semi_major: self.a,
                semi_minor: self.b,
                rotation: 0.0,
            }
        } else {
            GeneralEllipse {
                center: self.center,
                semi_major: self.b,
                semi_minor: self.a,
                rotation: PI / 2.0,
            }
        }
    }
}

/// Ellipse in general position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralEllipse {
    pub center: Point2,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the major axis, in `[0, π)`.
    pub rotation: f64,
}

impl GeneralEllipse {
    pub fn new(
        center: Point2,
        semi_major: f64,
        semi_minor: f64,
        rotation: f64,
    ) -> Result<Self, ConicError> {
        if !(semi_minor > 0.0 && semi_major >= semi_minor) {
            return Err(ConicError::InvalidEllipse(format!(
                "semi-axes ({semi_major}, {semi_minor})"
            )));
        }
        Ok(Self {
            center,
            semi_major,
            semi_minor,
            rotation: normalize_axis_angle(rotation),
        })
    }

    /// Ellipse with the given foci and semi-major axis.
    pub fn from_foci(f1: Point2, f2: Point2, semi_major: f64) -> Result<Self, ConicError> {
        let c = f1.dist(f2) / 2.0;
        if semi_major <= c {
            return Err(ConicError::InvalidEllipse(format!(
                "semi-major {semi_major} not larger than focal half-distance {c}"
            )));
        }
        let d = f2 - f1;
        let rotation = if c > 0.0 { d.y.atan2(d.x) } else { 0.0 };
        Self::new(
            f1.midpoint(f2),
            semi_major,
            (semi_major * semi_major - c * c).sqrt(),
            rotation,
        )
    }

    pub fn major_direction(&self) -> Point2 {
        Point2::from_polar(1.0, self.rotation)
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        let u = self.major_direction();
        let v = Point2::new(-u.y, u.x);
        self.center + u * (self.semi_major * t.cos()) + v * (self.semi_minor * t.sin())
    }

    pub fn focal_half_distance(&self) -> f64 {
        (self.semi_major * self.semi_major - self.semi_minor * self.semi_minor)
            .max(0.0)
            .sqrt()
    }

    pub fn to_conic(&self) -> ConicMatrix {
        let (s, c) = self.rotation.sin_cos();
        let ia = 1.0 / (self.semi_major * self.semi_major);
        let ib = 1.0 / (self.semi_minor * self.semi_minor);
        // Q = R diag(ia, ib) Rᵀ
        let q11 = c * c * ia + s * s * ib;
        let q12 = c * s * (ia - ib);
        let q22 = s * s * ia + c * c * ib;
        let (h, k) = (self.center.x, self.center.y);
        let l1 = -(q11 * h + q12 * k);
        let l2 = -(q12 * h + q22 * k);
        let f = q11 * h * h + 2.0 * q12 * h * k + q22 * k * k - 1.0;
        ConicMatrix(Matrix3::new(q11, q12, l1, q12, q22, l2, l1, l2, f))
    }

    pub fn is_circle(&self, rel_tol: f64) -> bool {
        self.semi_major - self.semi_minor <= rel_tol * self.semi_major
    }
}

fn normalize_axis_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if PI - r < 1e-15 {
        0.0
    } else {
        r
    }
}

/// Matrix of an axis-aligned ellipse, `(x−h)²/a² + (y−k)²/b² − 1 = 0`.
pub fn matrix_of(e: &AxisEllipse) -> ConicMatrix {
    let (h, k) = (e.center.x, e.center.y);
    let ia = 1.0 / (e.a * e.a);
    let ib = 1.0 / (e.b * e.b);
    ConicMatrix(Matrix3::new(
        ia,
        0.0,
        -h * ia,
        0.0,
        ib,
        -k * ib,
        -h * ia,
        -k * ib,
        h * h * ia + k * k * ib - 1.0,
    ))
}

/// Recover center, semi-axes and rotation of a real ellipse.
pub fn classify(c: &ConicMatrix) -> Result<GeneralEllipse, ConicError> {
    let m = &c.0;
    let q = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det_q = q.determinant();
    let scale = q.norm().max(f64::MIN_POSITIVE);
    if !(det_q > 1e-14 * scale * scale) {
        return Err(ConicError::NotAnEllipse);
    }
    let center = c.center()?;
    let f0 = m[(2, 2)] + m[(0, 2)] * center.x + m[(1, 2)] * center.y;
    // (p − c)ᵀ Q (p − c) = −f0 must have −f0 with the sign of Q's eigenvalues.
    if !(-f0 * q[(0, 0)] > 0.0) {
        return Err(ConicError::NotAnEllipse);
    }
    let n = q / -f0;
    let (p, qq, r) = (n[(0, 0)], n[(0, 1)], n[(1, 1)]);
    let mean = 0.5 * (p + r);
    let half = (0.5 * (p - r)).hypot(qq);
    let big = mean + half;
    let small = mean - half;
    if !(small > 0.0) {
        return Err(ConicError::NotAnEllipse);
    }
    let semi_major = 1.0 / small.sqrt();
    let semi_minor = 1.0 / big.sqrt();
    // eigenvector of the larger eigenvalue points along the minor axis
    let minor_dir = 0.5 * (2.0 * qq).atan2(p - r);
    let rotation = if half <= 1e-14 * mean {
        0.0
    } else {
        normalize_axis_angle(minor_dir + PI / 2.0)
    };
    Ok(GeneralEllipse {
        center,
        semi_major,
        semi_minor: semi_minor.min(semi_major),
        rotation,
    })
}

/// Foci of an ellipse; a circle returns its center twice.
pub fn foci_of(e: &GeneralEllipse) -> (Point2, Point2) {
    let d = e.major_direction() * e.focal_half_distance();
    (e.center + d, e.center - d)
}

/// Split a rank-2 degenerate conic into its two lines.
///
/// Uses the adjugate `B = adj(D)`; for a real line pair `B = −s sᵀ` with `s`
/// the intersection point. `D + [s]ₓ` is then rank one and its largest entry
/// picks out a row and a column, which are the two lines.
pub fn split_line_pair(d: &ConicMatrix) -> Result<(HCoord, HCoord), ConicError> {
    let dn = d.0.norm();
    if dn == 0.0 {
        return Err(ConicError::NotALinePair);
    }
    let dm = d.0 / dn;
    let b = adjugate(&dm);
    let (mut i, mut best) = (0, 0.0_f64);
    for k in 0..3 {
        if b[(k, k)].abs() > best {
            best = b[(k, k)].abs();
            i = k;
        }
    }
    if best <= ROOT_TOL * ROOT_TOL {
        // a double line: both components coincide
        return Err(ConicError::PointOnConic);
    }
    if b[(i, i)] > 0.0 {
        return Err(ConicError::PointInside);
    }
    let beta = (-b[(i, i)]).sqrt();
    let s = b.column(i) / beta;
    let sx = Matrix3::new(0.0, s[2], -s[1], -s[2], 0.0, s[0], s[1], -s[0], 0.0);
    let r1 = dm + sx;
    let (mut ri, mut cj, mut best) = (0, 0, 0.0_f64);
    for r in 0..3 {
        for c in 0..3 {
            if r1[(r, c)].abs() > best {
                best = r1[(r, c)].abs();
                ri = r;
                cj = c;
            }
        }
    }
    let g = HCoord(r1.row(ri).transpose());
    let h = HCoord(r1.column(cj).into_owned());
    Ok((g, h))
}

/// The two tangent lines from an exterior point to a proper conic.
pub fn tangents_from(p: Point2, c: &ConicMatrix) -> Result<(HCoord, HCoord), ConicError> {
    let cn = c.normalized();
    let ph = p.homogeneous().0;
    let val = ph.dot(&(cn.0 * ph)) / ph.norm_squared();
    if val.abs() < ROOT_TOL {
        return Err(ConicError::PointOnConic);
    }
    let cp = cn.0 * ph;
    let pcp = ph.dot(&cp);
    let d = ConicMatrix(cn.0 * pcp - cp * cp.transpose());
    let (l1, l2) = split_line_pair(&d)?;
    Ok((l1.normalized_line()?, l2.normalized_line()?))
}

/// Conic scale used for the double-root collapse: semi-major axis for
/// ellipses, 1 otherwise.
fn conic_scale(c: &ConicMatrix) -> f64 {
    classify(c).map(|e| e.semi_major).unwrap_or(1.0)
}

/// Real intersections of a line with a conic (0, 1 or 2 points).
pub fn intersect_line_conic(l: &HCoord, c: &ConicMatrix) -> Result<Vec<Point2>, ConicError> {
    let l = l.normalized_line()?;
    let n = Point2::new(l.u(), l.v());
    let dir = Point2::new(-n.y, n.x);
    let p0 = n * -l.w();
    let (qa, qb, qc) = line_quadratic(c, p0, dir);
    let scale = conic_scale(c);
    if qa.abs() <= ROOT_TOL * c.0.norm() {
        // line parallel to an asymptotic direction: at most one root
        if qb.abs() <= ROOT_TOL * c.0.norm() {
            return Ok(Vec::new());
        }
        return Ok(vec![p0 + dir * (-qc / (2.0 * qb))]);
    }
    let disc = qb * qb - qa * qc;
    let half_chord_sq = disc / (qa * qa);
    if half_chord_sq.abs() < DOUBLE_ROOT_TOL * scale * scale {
        return Ok(vec![p0 + dir * (-qb / qa)]);
    }
    if half_chord_sq < 0.0 {
        return Ok(Vec::new());
    }
    let (s1, s2) = stable_roots(qa, qb, disc);
    let mut pts = vec![p0 + dir * s1, p0 + dir * s2];
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(pts)
}

/// Coefficients of `A s² + 2 B s + C` for the conic restricted to `p0 + s·dir`.
pub(crate) fn line_quadratic(c: &ConicMatrix, p0: Point2, dir: Point2) -> (f64, f64, f64) {
    let ph = p0.homogeneous().0;
    let dh = Vector3::new(dir.x, dir.y, 0.0);
    let cd = c.0 * dh;
    (dh.dot(&cd), ph.dot(&cd), ph.dot(&(c.0 * ph)))
}

fn stable_roots(qa: f64, qb: f64, disc: f64) -> (f64, f64) {
    let sq = disc.max(0.0).sqrt();
    let q = -(qb + qb.signum() * sq);
    if q == 0.0 {
        return (0.0, 0.0);
    }
    let r1 = q / qa;
    let r2 = (qb * qb - disc) / (qa * q);
    (r1, r2)
}

/// Polar line of a point: `C·p` read as line coordinates.
pub fn polar_line(p: Point2, c: &ConicMatrix) -> Result<HCoord, ConicError> {
    if c.rank(1e-12) < 3 {
        return Err(ConicError::SingularConic);
    }
    Ok(HCoord(c.0 * p.homogeneous().0))
}

/// Pole of a line: `C⁻¹·l` read as a point.
pub fn pole(l: &HCoord, c: &ConicMatrix) -> Result<Point2, ConicError> {
    let inv = c.0.try_inverse().ok_or(ConicError::SingularConic)?;
    if c.rank(1e-12) < 3 {
        return Err(ConicError::SingularConic);
    }
    HCoord(inv * l.0).to_point()
}

/// Result of a least-squares conic fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit {
    pub conic: ConicMatrix,
    /// RMS algebraic residual in normalized coordinates with a unit
    /// coefficient vector.
    pub residual: f64,
}

/// Least-squares conic through a point set.
///
/// Points are shifted to zero mean and scaled to unit RMS radius before the
/// monomial design matrix `(x², xy, y², x, y, 1)` is built; the null vector
/// is the right singular vector of the smallest singular value.
pub fn fit_conic(points: &[Point2]) -> Result<ConicFit, ConicError> {
    if points.len() < 5 {
        return Err(ConicError::TooFewPoints {
            needed: 5,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Point2::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
    let rms = (points.iter().map(|p| (*p - mean).norm_sq()).sum::<f64>() / n).sqrt();
    if !(rms > 0.0) {
        return Err(ConicError::DegenerateFit { null_dims: 6 });
    }
    let rows = points.len().max(6);
    let mut a = DMatrix::<f64>::zeros(rows, 6);
    for (i, p) in points.iter().enumerate() {
        let q = (*p - mean) * (1.0 / rms);
        a[(i, 0)] = q.x * q.x;
        a[(i, 1)] = q.x * q.y;
        a[(i, 2)] = q.y * q.y;
        a[(i, 3)] = q.x;
        a[(i, 4)] = q.y;
        a[(i, 5)] = 1.0;
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(ConicError::DegenerateFit { null_dims: 6 })?;
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    let smax = sv[order[order.len() - 1]];
    let null_dims = sv.iter().filter(|s| **s <= 1e-9 * smax).count();
    if null_dims > 1 {
        return Err(ConicError::DegenerateFit { null_dims });
    }
    let k = order[0];
    let coef: Vec<f64> = (0..6).map(|j| v_t[(k, j)]).collect();
    let residual = sv[k] / n.sqrt();
    let local =
        ConicMatrix::from_coefficients([coef[0], coef[1], coef[2], coef[3], coef[4], coef[5]]);
    // q = T p with T = [[1/σ, 0, −μx/σ], [0, 1/σ, −μy/σ], [0, 0, 1]]
    let s = 1.0 / rms;
    let t = Matrix3::new(s, 0.0, -mean.x * s, 0.0, s, -mean.y * s, 0.0, 0.0, 1.0);
    let conic = ConicMatrix::from_matrix(t.transpose() * local.0 * t).normalized();
    Ok(ConicFit { conic, residual })
}

/// Invertible planar affine map `p ↦ L p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: Matrix2<f64>,
    pub translation: Point2,
}

impl AffineMap {
    pub fn new(linear: Matrix2<f64>, translation: Point2) -> Result<Self, ConicError> {
        if linear.determinant().abs() <= 1e-14 * linear.norm_squared().max(f64::MIN_POSITIVE) {
            return Err(ConicError::SingularMap);
        }
        Ok(Self {
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            linear: Matrix2::identity(),
            translation: Point2::ORIGIN,
        }
    }

    pub fn scaling(sx: f64, sy: f64) -> Result<Self, ConicError> {
        Self::new(Matrix2::new(sx, 0.0, 0.0, sy), Point2::ORIGIN)
    }

    pub fn homogeneous(&self) -> Matrix3<f64> {
        let l = &self.linear;
        Matrix3::new(
            l[(0, 0)],
            l[(0, 1)],
            self.translation.x,
            l[(1, 0)],
            l[(1, 1)],
            self.translation.y,
            0.0,
            0.0,
            1.0,
        )
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self
            .linear
            .try_inverse()
            .expect("affine map invariant: det != 0");
        let t = inv * Vector2::new(self.translation.x, self.translation.y);
        AffineMap {
            linear: inv,
            translation: Point2::new(-t[0], -t[1]),
        }
    }

    pub fn apply_point(&self, p: Point2) -> Point2 {
        let v = self.linear * Vector2::new(p.x, p.y);
        Point2::new(v[0] + self.translation.x, v[1] + self.translation.y)
    }

    /// Image conic by congruence with the inverse homogeneous matrix.
    pub fn apply_conic(&self, c: &ConicMatrix) -> ConicMatrix {
        let hinv = self.inverse().homogeneous();
        ConicMatrix::from_matrix(hinv.transpose() * c.0 * hinv)
    }

    /// Diagonal linear part with nonnegative entries (keeps axis-aligned
    /// ellipses axis-aligned).
    pub fn is_axis_scaling(&self) -> bool {
        let l = &self.linear;
        l[(0, 1)] == 0.0 && l[(1, 0)] == 0.0
    }
}

/// Anything an affine map acts on.
pub trait AffineImage: Sized {
    fn mapped_by(&self, m: &AffineMap) -> Self;
}

impl AffineImage for Point2 {
    fn mapped_by(&self, m: &AffineMap) -> Self {
        m.apply_point(*self)
    }
}

impl AffineImage for ConicMatrix {
    fn mapped_by(&self, m: &AffineMap) -> Self {
        m.apply_conic(self)
    }
}

pub fn apply_affine<T: AffineImage>(m: &AffineMap, x: &T) -> T {
    x.mapped_by(m)
}
