//! Constructors for the special Poncelet families.
//!
//! Each constructor returns the conic pair together with the closed-form
//! predictions (stationary centers, conserved values, locus shapes) that the
//! invariants harness checks against the chase.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centers::{center, isogonal_conjugate, CenterError, CenterId, Triangle};
use crate::conic::{
    classify, AffineMap, AxisEllipse, ConicError, ConicMatrix, GeneralEllipse, HCoord, Point2,
};
use crate::invariants::InvariantId;
use crate::poncelet::{
    certify, search_caustic_ngon, CausticConstraint, ConicPair, PonceletError, PORISM_TOL,
};

/// Default tolerance for conserved values (relative) and center drift (× scale).
pub const DEFAULT_TOL: f64 = 1e-8;
/// Tolerance for locus focus/size claims.
pub const LOCUS_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("outer conic is a circle; the focal construction needs a > b")]
    CircularOuter,
    #[error("no valid caustic for these parameters")]
    NoValidCaustic,
    #[error("Euler relation violated: R must be at least 2r")]
    EulerViolation,
    #[error("caustic center must lie inside the half-size ellipse")]
    OutsideHalfEllipse,
    #[error("inconic is not tangent to all three sidelines (residual {0:e})")]
    NotAnInconic(f64),
    #[error(transparent)]
    Poncelet(#[from] PonceletError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Center(#[from] CenterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    FocalX1,
    IsoX2,
    FocalX4,
    IsoX7,
    MacBeath,
    Dual,
    Chapple,
    Brocard,
    AffineMacBeath,
    MacBeathNgon,
}

/// Family kind plus its shape parameters; `build` produces the [`FamilySpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyConfig {
    FocalX1 {
        a: f64,
        b: f64,
    },
    IsoX2 {
        a: f64,
        b: f64,
    },
    FocalX4 {
        a: f64,
        b: f64,
    },
    IsoX7 {
        a: f64,
        b: f64,
    },
    /// `a`, `b` are the inconic semi-axes.
    MacBeath {
        a: f64,
        b: f64,
    },
    Dual {
        a: f64,
        b: f64,
    },
    Chapple {
        big_r: f64,
        r: f64,
    },
    Brocard {
        seed: Triangle,
    },
    AffineMacBeath {
        a: f64,
        b: f64,
        oc: Point2,
    },
    MacBeathNgon {
        radius: f64,
        center: Point2,
        n: usize,
    },
}

impl FamilyConfig {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyConfig::FocalX1 { .. } => FamilyKind::FocalX1,
            FamilyConfig::IsoX2 { .. } => FamilyKind::IsoX2,
            FamilyConfig::FocalX4 { .. } => FamilyKind::FocalX4,
            FamilyConfig::IsoX7 { .. } => FamilyKind::IsoX7,
            FamilyConfig::MacBeath { .. } => FamilyKind::MacBeath,
            FamilyConfig::Dual { .. } => FamilyKind::Dual,
            FamilyConfig::Chapple { .. } => FamilyKind::Chapple,
            FamilyConfig::Brocard { .. } => FamilyKind::Brocard,
            FamilyConfig::AffineMacBeath { .. } => FamilyKind::AffineMacBeath,
            FamilyConfig::MacBeathNgon { .. } => FamilyKind::MacBeathNgon,
        }
    }

    pub fn build(&self) -> Result<FamilySpec, FamilyError> {
        match *self {
            FamilyConfig::FocalX1 { a, b } => focal_x1(a, b),
            FamilyConfig::IsoX2 { a, b } => iso_x2(a, b),
            FamilyConfig::FocalX4 { a, b } => focal_x4(a, b),
            FamilyConfig::IsoX7 { a, b } => iso_x7(a, b),
            FamilyConfig::MacBeath { a, b } => macbeath(a, b),
            FamilyConfig::Dual { a, b } => dual(a, b),
            FamilyConfig::Chapple { big_r, r } => chapple(big_r, r),
            FamilyConfig::Brocard { seed } => brocard(&seed),
            FamilyConfig::AffineMacBeath { a, b, oc } => affine_macbeath(a, b, oc),
            FamilyConfig::MacBeathNgon { radius, center, n } => macbeath_ngon(radius, center, n),
        }
    }
}

/// Which polygon a center or quantity is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Image {
    /// The family polygon itself.
    #[default]
    Family,
    /// Polygon of poles of the family's sidelines with respect to the outer conic.
    PolarImage,
}

/// A closed-form statement about a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
pub enum Claim {
    /// Scalar conserved over the family, optionally at a known value.
    Conserved {
        quantity: InvariantId,
        image: Image,
        value: Option<f64>,
    },
    /// Center stationary, optionally at a known point.
    Stationary {
        center: CenterId,
        image: Image,
        at: Option<Point2>,
    },
    /// Center stationary on the line through two points.
    StationaryOnLine {
        center: CenterId,
        through: [Point2; 2],
    },
    /// Center stays at least `min_distance` away from a line.
    OffLine {
        center: CenterId,
        through: [Point2; 2],
        min_distance: f64,
    },
    /// Locus of a center is an ellipse with a focus at the given point.
    LocusFocus { center: CenterId, focus: Point2 },
    /// Locus semi-axes are `ratio` times those of another center's locus.
    LocusScaled {
        center: CenterId,
        reference: CenterId,
        ratio: f64,
    },
    /// Locus is homothetic to a reference ellipse with the given factor.
    LocusHomothetic {
        center: CenterId,
        reference: GeneralEllipse,
        factor: f64,
    },
    /// Locus is a conic (algebraic fit residual below tolerance).
    LocusIsConic { center: CenterId },
    /// Locus major axis equals the reference ellipse's (length and direction).
    LocusMajorAxis {
        center: CenterId,
        reference: GeneralEllipse,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub claim: Claim,
    pub tolerance: f64,
    /// Claims reported as findings rather than requirements.
    pub experimental: bool,
}

impl Prediction {
    fn new(claim: Claim, tolerance: f64) -> Self {
        Self {
            claim,
            tolerance,
            experimental: false,
        }
    }

    fn experimental(claim: Claim, tolerance: f64) -> Self {
        Self {
            claim,
            tolerance,
            experimental: true,
        }
    }

    fn conserved(quantity: InvariantId, value: f64) -> Self {
        Self::new(
            Claim::Conserved {
                quantity,
                image: Image::Family,
                value: Some(value),
            },
            DEFAULT_TOL,
        )
    }

    fn at(center: CenterId, p: Point2) -> Self {
        Self::new(
            Claim::Stationary {
                center,
                image: Image::Family,
                at: Some(p),
            },
            DEFAULT_TOL,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub config: FamilyConfig,
    pub pair: ConicPair,
    /// Polygon order.
    pub n: usize,
    pub predictions: Vec<Prediction>,
}

impl FamilySpec {
    pub fn kind(&self) -> FamilyKind {
        self.config.kind()
    }

    pub fn scale(&self) -> f64 {
        self.pair.scale()
    }

    /// Max closure defect over the certification probes; errors if not a porism.
    pub fn certify(&self) -> Result<f64, PonceletError> {
        certify(&self.pair, self.n)
    }

    /// Same predictions with the caustic scaled by `1 + eps` about its center.
    pub fn perturbed(&self, eps: f64) -> Result<FamilySpec, FamilyError> {
        Ok(FamilySpec {
            pair: self.pair.perturbed(eps)?,
            ..self.clone()
        })
    }
}

fn require_ellipse(a: f64, b: f64) -> Result<f64, FamilyError> {
    if !(a.is_finite() && b.is_finite() && b > 0.0) {
        return Err(FamilyError::InvalidShape(format!("a={a}, b={b}")));
    }
    if a == b {
        return Err(FamilyError::CircularOuter);
    }
    if a < b {
        return Err(FamilyError::InvalidShape(format!(
            "a > b > 0 required, got a={a}, b={b}"
        )));
    }
    Ok((a * a - b * b).sqrt())
}

fn circle_pair(outer: AxisEllipse, center: Point2, radius: f64) -> Result<ConicPair, FamilyError> {
    if !(radius > 0.0) {
        return Err(FamilyError::NoValidCaustic);
    }
    ConicPair::new(outer, ConicMatrix::circle(center, radius), None).map_err(|e| match e {
        PonceletError::CausticNotInterior => FamilyError::NoValidCaustic,
        other => other.into(),
    })
}

/// Radius of the circular triangle caustic centered at `(xc, yc)`:
/// `(b√(a⁴ − c²xc²) − a√(b⁴ + c²yc²)) / c²`.
pub fn caustic_radius_general(a: f64, b: f64, xc: f64, yc: f64) -> Result<f64, FamilyError> {
    let c = require_ellipse(a, b)?;
    let c2 = c * c;
    let rad1 = a.powi(4) - c2 * xc * xc;
    if rad1 < 0.0 {
        return Err(FamilyError::NoValidCaustic);
    }
    let r = (b * rad1.sqrt() - a * (b.powi(4) + c2 * yc * yc).sqrt()) / c2;
    if !(r > 0.0) {
        return Err(FamilyError::NoValidCaustic);
    }
    Ok(r)
}

/// Caustic centered on the focus `(c, 0)`.
pub fn focal_x1(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    let c = require_ellipse(a, b)?;
    let c2 = c * c;
    let r1 = b * b / c2 * ((a * a + c2).sqrt() - a);
    let outer = AxisEllipse::centered(a, b)?;
    let center = Point2::new(c, 0.0);
    let pair = circle_pair(outer, center, r1)?;
    let sin_half = (c2 - a * a + a * (a * a + c2).sqrt()) / c2;
    Ok(FamilySpec {
        config: FamilyConfig::FocalX1 { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Inradius, r1),
            Prediction::conserved(InvariantId::SinHalfSum, sin_half),
            Prediction::at(CenterId::X1, center),
        ],
    })
}

/// Circular caustic on the minor axis keeping the barycenter fixed.
pub fn iso_x2(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    let c = require_ellipse(a, b)?;
    let k = c * b / a;
    let outer = AxisEllipse::centered(a, b)?;
    let x1 = Point2::new(0.0, k / 2.0);
    let pair = circle_pair(outer, x1, b / 2.0)?;
    let minor_axis = [Point2::ORIGIN, Point2::new(0.0, 1.0)];
    Ok(FamilySpec {
        config: FamilyConfig::IsoX2 { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Inradius, b / 2.0),
            Prediction::at(CenterId::X1, x1),
            Prediction::at(CenterId::X2, Point2::new(0.0, k / 3.0)),
            Prediction::at(CenterId::X8, Point2::ORIGIN),
            Prediction::at(CenterId::X10, Point2::new(0.0, k / 4.0)),
            Prediction::new(
                Claim::StationaryOnLine {
                    center: CenterId::X10,
                    through: minor_axis,
                },
                DEFAULT_TOL,
            ),
            Prediction::conserved(InvariantId::DistSqX1X2, (k / 6.0).powi(2)),
        ],
    })
}

/// Circular caustic on the major axis keeping the orthocenter on a focus.
pub fn focal_x4(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    let c = require_ellipse(a, b)?;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let denom = 2.0 * a2 - c2;
    let cx = a2 * c / denom;
    let r4 = a * (a2 - c2) / denom;
    let outer = AxisEllipse::centered(a, b)?;
    let pair = circle_pair(outer, Point2::new(cx, 0.0), r4)?;
    Ok(FamilySpec {
        config: FamilyConfig::FocalX4 { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Inradius, r4),
            Prediction::at(CenterId::X4, Point2::new(c, 0.0)),
            Prediction::conserved(InvariantId::PolarCircleSq, -b2 * b2 / (a2 + b2)),
            Prediction::conserved(InvariantId::DistSqX1X4, (c * b2 / (a2 + b2)).powi(2)),
            // outer center and distal focus, standing in for X7952 and X18283
            Prediction::new(
                Claim::LocusFocus {
                    center: CenterId::X3,
                    focus: Point2::ORIGIN,
                },
                LOCUS_TOL,
            ),
            Prediction::new(
                Claim::LocusScaled {
                    center: CenterId::X20,
                    reference: CenterId::X3,
                    ratio: 2.0,
                },
                LOCUS_TOL,
            ),
            Prediction::new(
                Claim::LocusFocus {
                    center: CenterId::X20,
                    focus: Point2::new(-c, 0.0),
                },
                LOCUS_TOL,
            ),
        ],
    })
}

/// Circular caustic on the major axis keeping the Gergonne point fixed.
pub fn iso_x7(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    let c = require_ellipse(a, b)?;
    let (a2, b2) = (a * a, b * b);
    let k7 = (4.0 * a2 * a2 - 5.0 * a2 * b2 + b2 * b2).sqrt();
    let r7 = b2 / (2.0 * a);
    let outer = AxisEllipse::centered(a, b)?;
    let pair = circle_pair(outer, Point2::new(k7 / (2.0 * a), 0.0), r7)?;
    let q = 4.0 * a2 - b2;
    Ok(FamilySpec {
        config: FamilyConfig::IsoX7 { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Inradius, r7),
            Prediction::at(CenterId::X7, Point2::new(2.0 * a * k7 / q, 0.0)),
            Prediction::conserved(InvariantId::TanHalfSum, q.sqrt() / a),
            Prediction::conserved(InvariantId::DistSqX1X7, b2 * b2 * c * c / (4.0 * a2 * q)),
            Prediction::conserved(
                InvariantId::AdamsRadius,
                b2 / (2.0 * a) * ((5.0 * a2 - b2) / q).sqrt(),
            ),
        ],
    })
}

/// Circle-inscribed triangles about the MacBeath inconic with semi-axes
/// `(a, b)`, centered at the origin; the circumcenter sits on the left focus.
pub fn macbeath(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    if !(a.is_finite() && b > 0.0 && a >= b) {
        return Err(FamilyError::InvalidShape(format!(
            "a >= b > 0 required, got a={a}, b={b}"
        )));
    }
    let cp = (a * a - b * b).sqrt();
    let x3 = Point2::new(-cp, 0.0);
    let x4 = Point2::new(cp, 0.0);
    let big_r = 2.0 * a;
    let outer = AxisEllipse::new(x3, big_r, big_r)?;
    let inconic = AxisEllipse::centered(a, b)?;
    let pair = ConicPair::new(outer, crate::conic::matrix_of(&inconic), Some((x3, x4)))?;
    let axis = [Point2::ORIGIN, Point2::new(1.0, 0.0)];
    Ok(FamilySpec {
        config: FamilyConfig::MacBeath { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Circumradius, big_r),
            Prediction::conserved(InvariantId::SumSqSides, 32.0 * a * a + 4.0 * b * b),
            Prediction::conserved(
                InvariantId::Cos2Sum,
                (cp * cp - 3.0 * a * a) / (2.0 * a * a),
            ),
            Prediction::conserved(InvariantId::CosProd, b * b / (8.0 * a * a)),
            Prediction::conserved(InvariantId::PolarCircleSq, -2.0 * b * b),
            Prediction::at(CenterId::X3, x3),
            Prediction::at(CenterId::X4, x4),
            Prediction::at(CenterId::X5, Point2::ORIGIN),
            Prediction::at(CenterId::X2, x3 + (x4 - x3) * (1.0 / 3.0)),
            Prediction::new(
                Claim::StationaryOnLine {
                    center: CenterId::X2,
                    through: axis,
                },
                DEFAULT_TOL,
            ),
        ],
    })
}

/// Concentric pair: caustic is the 90°-rotated outer scaled by `ab/(a²+b²)`.
pub fn dual(a: f64, b: f64) -> Result<FamilySpec, FamilyError> {
    let c = require_ellipse(a, b)?;
    let s = a * a + b * b;
    let outer = AxisEllipse::centered(a, b)?;
    let caustic = AxisEllipse::centered(a * b * b / s, a * a * b / s)?;
    let pair = ConicPair::new(outer, crate::conic::matrix_of(&caustic), None)?;
    Ok(FamilySpec {
        config: FamilyConfig::Dual { a, b },
        pair,
        n: 3,
        predictions: vec![
            Prediction::at(CenterId::X4, Point2::ORIGIN),
            Prediction::conserved(InvariantId::PolarCircleSq, -a * a * b * b / s),
            Prediction::new(
                Claim::LocusHomothetic {
                    center: CenterId::X3,
                    reference: outer.to_general(),
                    factor: c * c / (2.0 * s),
                },
                LOCUS_TOL,
            ),
        ],
    })
}

/// Bicentric triangles: circumcircle `R` at the origin, incircle `r` at
/// distance `d = √(R(R − 2r))`.
pub fn chapple(big_r: f64, r: f64) -> Result<FamilySpec, FamilyError> {
    if !(r > 0.0 && big_r.is_finite()) {
        return Err(FamilyError::InvalidShape(format!("R={big_r}, r={r}")));
    }
    if big_r < 2.0 * r {
        return Err(FamilyError::EulerViolation);
    }
    let d = (big_r * (big_r - 2.0 * r)).sqrt();
    let outer = AxisEllipse::centered(big_r, big_r)?;
    let x1 = Point2::new(d, 0.0);
    let pair = circle_pair(outer, x1, r)?;
    Ok(FamilySpec {
        config: FamilyConfig::Chapple { big_r, r },
        pair,
        n: 3,
        predictions: vec![
            Prediction::conserved(InvariantId::Inradius, r),
            Prediction::conserved(InvariantId::Circumradius, big_r),
            Prediction::conserved(InvariantId::CosSum, 1.0 + r / big_r),
            Prediction::at(CenterId::X1, x1),
            Prediction::at(CenterId::X3, Point2::ORIGIN),
            Prediction::new(
                Claim::Stationary {
                    center: CenterId::X1,
                    image: Image::PolarImage,
                    at: Some(Point2::ORIGIN),
                },
                1e-9,
            ),
            Prediction::new(
                Claim::Conserved {
                    quantity: InvariantId::SinHalfSum,
                    image: Image::PolarImage,
                    value: None,
                },
                DEFAULT_TOL,
            ),
        ],
    })
}

/// First and second Brocard points of a triangle.
pub fn brocard_points(t: &Triangle) -> Result<(Point2, Point2), FamilyError> {
    let m = crate::centers::metrics(t)?;
    let (a2, b2, c2) = (m.l1 * m.l1, m.l2 * m.l2, m.l3 * m.l3);
    let first = crate::centers::barycentric_point(
        t,
        crate::centers::BarycentricTriple(c2 * a2, a2 * b2, b2 * c2),
    )?;
    let second = match isogonal_conjugate(t, first) {
        Ok(p) => p,
        Err(CenterError::OnSideline) => first,
        Err(e) => return Err(e.into()),
    };
    Ok((first, second))
}

fn reflect(p: Point2, l0: Point2, l1: Point2) -> Point2 {
    let d = l1 - l0;
    let u = d * (1.0 / d.norm());
    let v = p - l0;
    let foot = l0 + u * v.dot(u);
    foot * 2.0 - p
}

/// Circumcircle of the seed plus its Brocard inellipse.
///
/// The inellipse has foci at the two Brocard points; its major axis is half
/// the distance from one focus to the mirror image of the other in side AB.
pub fn brocard(seed: &Triangle) -> Result<FamilySpec, FamilyError> {
    let m = crate::centers::metrics(seed)?;
    let x3 = center(seed, CenterId::X3)?;
    let x6 = center(seed, CenterId::X6)?;
    let (f1, f2) = brocard_points(seed)?;
    let semi_major = f1.dist(reflect(f2, seed.a, seed.b)) / 2.0;
    let inellipse = GeneralEllipse::from_foci(f1, f2, semi_major)?;
    let caustic = inellipse.to_conic();
    let worst = [(seed.a, seed.b), (seed.b, seed.c), (seed.c, seed.a)]
        .iter()
        .map(|&(p, q)| caustic.tangency_residual(&p.homogeneous().cross(&q.homogeneous())))
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(FamilyError::NotAnInconic(worst));
    }
    let outer = AxisEllipse::new(x3, m.circumradius, m.circumradius)?;
    let pair = ConicPair::new(outer, caustic, Some((f1, f2)))?;
    Ok(FamilySpec {
        config: FamilyConfig::Brocard { seed: *seed },
        pair,
        n: 3,
        predictions: vec![
            Prediction::at(CenterId::X6, x6),
            Prediction::new(
                Claim::Stationary {
                    center: CenterId::X7,
                    image: Image::PolarImage,
                    at: Some(x6),
                },
                1e-7,
            ),
            Prediction::new(
                Claim::Conserved {
                    quantity: InvariantId::TanHalfSum,
                    image: Image::PolarImage,
                    value: None,
                },
                1e-7,
            ),
        ],
    })
}

/// Affine image of a MacBeath configuration inside the ellipse `(a, b)`,
/// with the caustic center at `oc`.
pub fn affine_macbeath(a: f64, b: f64, oc: Point2) -> Result<FamilySpec, FamilyError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(FamilyError::InvalidShape(format!("a={a}, b={b}")));
    }
    if (oc.x / (a / 2.0)).powi(2) + (oc.y / (b / 2.0)).powi(2) >= 1.0 {
        return Err(FamilyError::OutsideHalfEllipse);
    }
    // (x, y) ↦ (x·b/a, y) sends the outer ellipse to the circle of radius b
    let to_circle = AffineMap::scaling(b / a, 1.0)?;
    let oc_circle = to_circle.apply_point(oc);
    let mac = GeneralEllipse::from_foci(Point2::ORIGIN, oc_circle * 2.0, b / 2.0)?;
    let caustic = to_circle.inverse().apply_conic(&mac.to_conic());
    let outer = AxisEllipse::centered(a, b)?;
    let pair = ConicPair::new(outer, caustic, None)?;
    let x2 = oc * (2.0 / 3.0);
    let mut predictions = vec![Prediction::at(CenterId::X2, x2)];
    if oc.norm() > 0.0 {
        predictions.push(Prediction::new(
            Claim::StationaryOnLine {
                center: CenterId::X2,
                through: [Point2::ORIGIN, oc],
            },
            1e-9,
        ));
        let shape = classify(&caustic)?;
        if !shape.is_circle(1e-9) {
            let axis = [shape.center, shape.center + shape.major_direction()];
            if x2.dist_to_line(axis[0], axis[1]) > 1e-3 {
                predictions.push(Prediction::new(
                    Claim::OffLine {
                        center: CenterId::X2,
                        through: axis,
                        min_distance: 1e-3,
                    },
                    DEFAULT_TOL,
                ));
            }
        }
    }
    Ok(FamilySpec {
        config: FamilyConfig::AffineMacBeath { a, b, oc },
        pair,
        n: 3,
        predictions,
    })
}

/// Circle-inscribed n-gons whose caustic is centered at `center` with a
/// focus at the circle center.
pub fn macbeath_ngon(radius: f64, center: Point2, n: usize) -> Result<FamilySpec, FamilyError> {
    if n < 4 {
        return Err(FamilyError::InvalidShape(format!(
            "n >= 4 required, got {n}"
        )));
    }
    if !(radius > 0.0) || center.norm() >= radius {
        return Err(FamilyError::InvalidShape(format!(
            "center must be interior to the circle of radius {radius}"
        )));
    }
    let outer = ConicMatrix::circle(Point2::ORIGIN, radius);
    let found = search_caustic_ngon(
        &outer,
        &CausticConstraint::with_focus(center, Point2::ORIGIN),
        n,
        PORISM_TOL,
    )?;
    let shape = found.shape;
    let axis = [shape.center, shape.center + shape.major_direction()];
    let tol = 1e-6;
    let mut predictions = vec![
        Prediction::new(
            Claim::StationaryOnLine {
                center: CenterId::C0,
                through: axis,
            },
            tol,
        ),
        Prediction::new(
            Claim::StationaryOnLine {
                center: CenterId::C2,
                through: axis,
            },
            tol,
        ),
        Prediction::new(
            Claim::LocusIsConic {
                center: CenterId::C1,
            },
            tol,
        ),
        Prediction::experimental(
            Claim::LocusMajorAxis {
                center: CenterId::C1,
                reference: shape,
            },
            1e-5,
        ),
    ];
    if n == 4 {
        predictions.push(Prediction::new(
            Claim::Stationary {
                center: CenterId::C0,
                image: Image::Family,
                at: Some(shape.center),
            },
            tol,
        ));
    }
    Ok(FamilySpec {
        config: FamilyConfig::MacBeathNgon { radius, center, n },
        pair: found.pair,
        n,
        predictions,
    })
}

/// Major axis of an ellipse as a line, for reports.
pub fn major_axis_line(e: &GeneralEllipse) -> HCoord {
    let p = e.center;
    let q = e.center + e.major_direction();
    p.homogeneous().cross(&q.homogeneous())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_radius_matches_named_families() {
        let s3 = 3f64.sqrt();
        let r = caustic_radius_general(2.0, 1.0, s3, 0.0).unwrap();
        assert!((r - (7f64.sqrt() - 2.0) / 3.0).abs() < 1e-15);
        let r = caustic_radius_general(2.0, 1.0, 0.0, s3 / 4.0).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let r = caustic_radius_general(2.0, 1.0, 0.0, 0.0).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shape_preconditions() {
        assert_eq!(focal_x1(1.0, 1.0).unwrap_err(), FamilyError::CircularOuter);
        assert!(matches!(
            iso_x7(1.0, 2.0),
            Err(FamilyError::InvalidShape(_))
        ));
        assert_eq!(chapple(1.0, 0.6).unwrap_err(), FamilyError::EulerViolation);
        assert_eq!(
            affine_macbeath(2.0, 1.0, Point2::new(0.9, 0.3)).unwrap_err(),
            FamilyError::OutsideHalfEllipse
        );
        assert_eq!(
            caustic_radius_general(1.0, 1.0, 0.0, 0.0).unwrap_err(),
            FamilyError::CircularOuter
        );
        assert_eq!(
            caustic_radius_general(2.0, 1.0, 0.0, 1.2).unwrap_err(),
            FamilyError::NoValidCaustic
        );
    }

    #[test]
    fn focal_x4_constants() {
        let f = focal_x4(2.0, 1.0).unwrap();
        let c = f.pair.caustic_shape;
        assert!((c.center.x - 4.0 * 3f64.sqrt() / 5.0).abs() < 1e-15);
        assert!((c.semi_major - 0.4).abs() < 1e-14);
    }

    #[test]
    fn iso_x7_constants() {
        let f = iso_x7(2.0, 1.0).unwrap();
        let c = f.pair.caustic_shape;
        assert!((c.center.x - 1.6770509831248424).abs() < 1e-14);
        assert!((c.semi_major - 0.25).abs() < 1e-14);
    }

    #[test]
    fn dual_caustic_axes() {
        let f = dual(2.0, 1.0).unwrap();
        let c = f.pair.caustic_shape;
        assert!((c.semi_major - 0.8).abs() < 1e-14);
        assert!((c.semi_minor - 0.4).abs() < 1e-14);
        assert!((c.rotation - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn equilateral_brocard_is_incircle() {
        let h = 3f64.sqrt() / 2.0;
        let seed = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, h),
        );
        let f = brocard(&seed).unwrap();
        let c = f.pair.caustic_shape;
        assert!((c.semi_major - c.semi_minor).abs() < 1e-12);
        assert!((c.semi_major - h / 3.0).abs() < 1e-12);
    }
}
