//! Center trajectories over a family: sampling, conic fitting and the
//! focus / size / homothety comparisons.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centers::CenterId;
use crate::conic::{classify, fit_conic, foci_of, ConicError, ConicMatrix, GeneralEllipse, Point2};
use crate::families::{FamilySpec, Image};
use crate::invariants::{center_on_samples, InvariantError};
use crate::poncelet::sample_family;

/// Bounding-box diameter (× scale) below which a locus is a single point.
pub const POINT_LOCUS_TOL: f64 = 1e-7;
/// Residual above which two ellipses are not considered homothetic.
pub const HOMOTHETY_TOL: f64 = 1e-4;
pub const MIN_LOCUS_SAMPLES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LociError {
    #[error("locus needs at least {MIN_LOCUS_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("locus of {0} is not an ellipse")]
    NotAnEllipse(CenterId),
    #[error("loci are not homothetic (residual {0:e})")]
    NotHomothetic(f64),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Conic(#[from] ConicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocusShape {
    Ellipse,
    /// Stationary center: the locus collapses to a point.
    DegeneratePoint,
    /// Fitted conic is not a real ellipse (hyperbola, parabola, line pair).
    NonElliptic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusResult {
    pub center_id: CenterId,
    pub image: Image,
    pub points: Vec<Point2>,
    pub shape: LocusShape,
    pub fitted: Option<GeneralEllipse>,
    /// RMS algebraic residual in the normalized fitting frame.
    pub algebraic_residual: f64,
    /// RMS Sampson distance to the fitted conic, divided by the configuration scale.
    pub geometric_residual: f64,
}

impl LocusResult {
    pub fn ellipse(&self) -> Result<&GeneralEllipse, LociError> {
        self.fitted
            .as_ref()
            .ok_or(LociError::NotAnEllipse(self.center_id))
    }

    pub fn bounding_diameter(&self) -> f64 {
        bounding_diameter(&self.points)
    }
}

pub(crate) fn bounding_diameter(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (
        Point2::new(f64::INFINITY, f64::INFINITY),
        Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    hi.dist(lo)
}

/// Classify a sampled trajectory: point test first, then conic fit.
pub fn locus_from_points(
    center_id: CenterId,
    image: Image,
    points: Vec<Point2>,
    scale: f64,
) -> Result<LocusResult, LociError> {
    if points.len() < MIN_LOCUS_SAMPLES {
        return Err(LociError::TooFewSamples(points.len()));
    }
    if bounding_diameter(&points) < POINT_LOCUS_TOL * scale {
        return Ok(LocusResult {
            center_id,
            image,
            points,
            shape: LocusShape::DegeneratePoint,
            fitted: None,
            algebraic_residual: 0.0,
            geometric_residual: 0.0,
        });
    }
    let fit = match fit_conic(&points) {
        Ok(f) => f,
        // several exact conics (line pairs) pass through the points
        Err(ConicError::DegenerateFit { .. }) => {
            return Ok(LocusResult {
                center_id,
                image,
                points,
                shape: LocusShape::NonElliptic,
                fitted: None,
                algebraic_residual: 0.0,
                geometric_residual: 0.0,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let (shape, fitted) = match classify(&fit.conic) {
        Ok(e) => (LocusShape::Ellipse, Some(e)),
        Err(ConicError::NotAnEllipse) => (LocusShape::NonElliptic, None),
        Err(e) => return Err(e.into()),
    };
    let geometric_residual = sampson_rms(&fit.conic, &points) / scale;
    Ok(LocusResult {
        center_id,
        image,
        points,
        shape,
        fitted,
        algebraic_residual: fit.residual,
        geometric_residual,
    })
}

/// First-order distance `|Q(p)| / |∇Q(p)|`, RMS over the points.
fn sampson_rms(c: &ConicMatrix, points: &[Point2]) -> f64 {
    let m = c.0;
    let sum: f64 = points
        .iter()
        .map(|p| {
            let v = p.homogeneous().0;
            let g = m * v;
            let q = v.dot(&g);
            let grad = 2.0 * (g[0] * g[0] + g[1] * g[1]).sqrt();
            if grad > 0.0 {
                (q / grad).powi(2)
            } else {
                0.0
            }
        })
        .sum();
    (sum / points.len() as f64).sqrt()
}

/// Sample `id` over `count` family members and fit its locus.
pub fn locus(spec: &FamilySpec, id: CenterId, count: usize) -> Result<LocusResult, LociError> {
    locus_on(spec, id, Image::Family, count)
}

pub fn locus_on(
    spec: &FamilySpec,
    id: CenterId,
    image: Image,
    count: usize,
) -> Result<LocusResult, LociError> {
    if count < MIN_LOCUS_SAMPLES {
        return Err(LociError::TooFewSamples(count));
    }
    let samples = sample_family(&spec.pair, spec.n, count).map_err(InvariantError::from)?;
    let pts = center_on_samples(spec, &samples, id, image)?;
    locus_from_points(id, image, pts, spec.scale())
}

/// Smallest distance from `claimed` to either fitted focus.
pub fn focus_distance(l: &LocusResult, claimed: Point2) -> Result<f64, LociError> {
    let (f1, f2) = foci_of(l.ellipse()?);
    Ok(f1.dist(claimed).min(f2.dist(claimed)))
}

/// Axis-direction mismatch in `[0, π/2]`.
fn axis_angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Homothety {
    pub factor: f64,
    pub residual: f64,
}

/// Semi-axis ratios of the fitted locus against `reference`.
pub fn homothety_check(
    l: &LocusResult,
    reference: &GeneralEllipse,
) -> Result<Homothety, LociError> {
    let e = l.ellipse()?;
    let major = e.semi_major / reference.semi_major;
    let minor = e.semi_minor / reference.semi_minor;
    let rotation = if e.is_circle(1e-9) || reference.is_circle(1e-9) {
        0.0
    } else {
        axis_angle_diff(e.rotation, reference.rotation)
    };
    let residual = (major - minor).abs() + rotation;
    if residual > HOMOTHETY_TOL {
        return Err(LociError::NotHomothetic(residual));
    }
    Ok(Homothety {
        factor: 0.5 * (major + minor),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisMatch {
    /// `|semi_major(locus) − semi_major(reference)|`.
    pub length_diff: f64,
    /// Major-axis direction mismatch (radians).
    pub angle_diff: f64,
    /// Distance of the locus center from the reference major-axis line.
    pub offset: f64,
}

pub fn major_axis_match(
    l: &LocusResult,
    reference: &GeneralEllipse,
) -> Result<AxisMatch, LociError> {
    let e = l.ellipse()?;
    Ok(AxisMatch {
        length_diff: (e.semi_major - reference.semi_major).abs(),
        angle_diff: axis_angle_diff(e.rotation, reference.rotation),
        offset: e.center.dist_to_line(
            reference.center,
            reference.center + reference.major_direction(),
        ),
    })
}

/// Semi-axis ratios `(major, minor)` of `l` over `other`.
pub fn axis_ratios(l: &LocusResult, other: &LocusResult) -> Result<(f64, f64), LociError> {
    let (e, o) = (l.ellipse()?, other.ellipse()?);
    Ok((e.semi_major / o.semi_major, e.semi_minor / o.semi_minor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse_points(e: &GeneralEllipse, n: usize) -> Vec<Point2> {
        (0..n)
            .map(|k| e.point_at(2.0 * PI * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn point_cluster_is_degenerate() {
        let pts = vec![Point2::new(0.3, 0.1); 16];
        let l = locus_from_points(CenterId::X2, Image::Family, pts, 1.0).unwrap();
        assert_eq!(l.shape, LocusShape::DegeneratePoint);
        assert!(l.fitted.is_none());
        assert!(matches!(
            focus_distance(&l, Point2::ORIGIN),
            Err(LociError::NotAnEllipse(CenterId::X2))
        ));
    }

    #[test]
    fn self_homothety_is_one() {
        let e = GeneralEllipse::new(Point2::new(0.2, 0.1), 1.5, 0.5, 0.4).unwrap();
        let l =
            locus_from_points(CenterId::X3, Image::Family, ellipse_points(&e, 24), 1.0).unwrap();
        let h = homothety_check(&l, &l.fitted.unwrap()).unwrap();
        assert!((h.factor - 1.0).abs() < 1e-12);
        assert!(h.residual < 1e-12);
    }

    #[test]
    fn rotated_reference_is_not_homothetic() {
        let e = GeneralEllipse::new(Point2::ORIGIN, 1.5, 0.5, 0.0).unwrap();
        let l =
            locus_from_points(CenterId::X3, Image::Family, ellipse_points(&e, 24), 1.0).unwrap();
        let other = GeneralEllipse::new(Point2::ORIGIN, 3.0, 1.0, 0.7).unwrap();
        assert!(matches!(
            homothety_check(&l, &other),
            Err(LociError::NotHomothetic(_))
        ));
    }

    #[test]
    fn too_few_samples() {
        let pts = vec![Point2::ORIGIN; 5];
        assert_eq!(
            locus_from_points(CenterId::X3, Image::Family, pts, 1.0).unwrap_err(),
            LociError::TooFewSamples(5)
        );
    }

    #[test]
    fn focus_distance_on_known_ellipse() {
        let e = GeneralEllipse::new(Point2::new(1.0, 0.0), 2.0, 1.0, 0.0).unwrap();
        let l =
            locus_from_points(CenterId::X3, Image::Family, ellipse_points(&e, 32), 2.0).unwrap();
        let d = focus_distance(&l, Point2::new(1.0 - 3f64.sqrt(), 0.0)).unwrap();
        assert!(d < 1e-10);
    }
}
