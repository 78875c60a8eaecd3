//! Measurement harness: evaluate quantities over family samples and compare
//! them with the closed-form predictions.
//!
//! Drift is measured against the sample mean, so "is it stationary" and "is
//! it where predicted" come out as separate verdicts.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centers::{
    adams_radius, angle_sums, center, dist_sq_x1_x2, dist_sq_x1_x4, dist_sq_x1_x7, metrics,
    ngon_centroids, polar_circle_sq, polar_polygon, polygon_angles, CenterError, CenterId,
    Triangle,
};
use crate::conic::Point2;
use crate::families::{Claim, FamilyKind, FamilySpec, Image, Prediction, DEFAULT_TOL};
use crate::loci::{
    axis_ratios, bounding_diameter, focus_distance, homothety_check, locus_from_points,
    major_axis_match, LociError, LocusResult, LocusShape,
};
use crate::poncelet::{certify, sample_uncertified, PolygonSample, PonceletError};

pub const MIN_SAMPLES: usize = 8;
/// Relative tolerance of the per-sample identity suite.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("{0} is not supported for {1}-gon families")]
    UnsupportedForFamily(String, usize),
    #[error("at least {MIN_SAMPLES} samples required, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Poncelet(#[from] PonceletError),
    #[error(transparent)]
    Center(#[from] CenterError),
}

/// Per-sample identities that hold for every triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityCheck {
    /// `θ1 + θ2 + θ3 = π`
    AngleSum,
    /// `area = r·s`
    AreaInradius,
    /// `l1·l2·l3 = 4R·area`
    SidesCircumradius,
    /// `|X1X8| = 3|X1X2|`
    NagelRatio,
    /// `|X3X2| = |X3X4|/3`
    EulerLineThird,
    /// `X10 = (X1 + X8)/2`
    SpiekerMidpoint,
    /// `X5 = (X3 + X4)/2`
    NinePointMidpoint,
    /// `Σl² = 9R² − |X3X4|²`
    SumSquaresEuler,
    /// `Πcos θ = Σl²/(8R²) − 1`
    CosProduct,
    /// `Σcos 2θ = −1 − 4Πcos θ`
    Cos2Sum,
    /// side-length formulas vs coordinate distances
    DistX1X2,
    DistX1X4,
    DistX1X7,
}

impl IdentityCheck {
    pub const ALL: [IdentityCheck; 13] = [
        IdentityCheck::AngleSum,
        IdentityCheck::AreaInradius,
        IdentityCheck::SidesCircumradius,
        IdentityCheck::NagelRatio,
        IdentityCheck::EulerLineThird,
        IdentityCheck::SpiekerMidpoint,
        IdentityCheck::NinePointMidpoint,
        IdentityCheck::SumSquaresEuler,
        IdentityCheck::CosProduct,
        IdentityCheck::Cos2Sum,
        IdentityCheck::DistX1X2,
        IdentityCheck::DistX1X4,
        IdentityCheck::DistX1X7,
    ];

    /// Residual of the identity, made dimensionless with the circumradius.
    pub fn residual(self, t: &Triangle) -> Result<f64, CenterError> {
        let m = metrics(t)?;
        let big_r = m.circumradius;
        let c = |id| center(t, id);
        let r = match self {
            IdentityCheck::AngleSum => m.theta1 + m.theta2 + m.theta3 - PI,
            IdentityCheck::AreaInradius => (m.area - m.inradius * m.s) / (big_r * big_r),
            IdentityCheck::SidesCircumradius => {
                (m.l1 * m.l2 * m.l3 - 4.0 * big_r * m.area) / big_r.powi(3)
            }
            IdentityCheck::NagelRatio => {
                let x1 = c(CenterId::X1)?;
                (x1.dist(c(CenterId::X8)?) - 3.0 * x1.dist(c(CenterId::X2)?)) / big_r
            }
            IdentityCheck::EulerLineThird => {
                let x3 = c(CenterId::X3)?;
                (x3.dist(c(CenterId::X2)?) - x3.dist(c(CenterId::X4)?) / 3.0) / big_r
            }
            IdentityCheck::SpiekerMidpoint => {
                c(CenterId::X10)?.dist(c(CenterId::X1)?.midpoint(c(CenterId::X8)?)) / big_r
            }
            IdentityCheck::NinePointMidpoint => {
                c(CenterId::X5)?.dist(c(CenterId::X3)?.midpoint(c(CenterId::X4)?)) / big_r
            }
            IdentityCheck::SumSquaresEuler => {
                let d = c(CenterId::X3)?.dist(c(CenterId::X4)?);
                (m.sum_sq_sides() - 9.0 * big_r * big_r + d * d) / (big_r * big_r)
            }
            IdentityCheck::CosProduct => {
                let s = angle_sums(&m);
                s.cos_prod - (m.sum_sq_sides() / (8.0 * big_r * big_r) - 1.0)
            }
            IdentityCheck::Cos2Sum => {
                let s = angle_sums(&m);
                s.cos2_sum - (-1.0 - 4.0 * s.cos_prod)
            }
            IdentityCheck::DistX1X2 => {
                let d = c(CenterId::X1)?.dist(c(CenterId::X2)?);
                (dist_sq_x1_x2(&m) - d * d) / (big_r * big_r)
            }
            IdentityCheck::DistX1X4 => {
                let d = c(CenterId::X1)?.dist(c(CenterId::X4)?);
                (dist_sq_x1_x4(&m) - d * d) / (big_r * big_r)
            }
            IdentityCheck::DistX1X7 => {
                let d = c(CenterId::X1)?.dist(c(CenterId::X7)?);
                (dist_sq_x1_x7(&m) - d * d) / (big_r * big_r)
            }
        };
        Ok(r)
    }
}

/// A measurable quantity over a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantId {
    Inradius,
    Circumradius,
    SinHalfSum,
    TanHalfSum,
    Cos2Sum,
    CosSum,
    CosProd,
    SumSqSides,
    PolarCircleSq,
    AdamsRadius,
    DistSqX1X2,
    DistSqX1X4,
    DistSqX1X7,
    /// Drift of a Kimberling center.
    CenterDrift(CenterId),
    /// Drift of a polygon centroid (C0, C1, C2).
    CentroidDrift(CenterId),
    Identity(IdentityCheck),
    /// Distance from a claimed point to the nearest fitted locus focus.
    LocusFocus(CenterId),
    /// Semi-axis ratio of one locus to another.
    LocusScale(CenterId),
    /// Homothety factor of a locus against a reference ellipse.
    LocusHomothety(CenterId),
    /// Algebraic residual of the locus conic fit.
    LocusFit(CenterId),
    /// Major-axis mismatch of a locus against a reference ellipse.
    LocusMajorAxis(CenterId),
}

impl InvariantId {
    pub fn drift(id: CenterId) -> InvariantId {
        if id.is_polygon_centroid() {
            InvariantId::CentroidDrift(id)
        } else {
            InvariantId::CenterDrift(id)
        }
    }
}

impl fmt::Display for InvariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantId::CenterDrift(c) | InvariantId::CentroidDrift(c) => write!(f, "Drift({c})"),
            InvariantId::Identity(i) => write!(f, "Identity({i:?})"),
            InvariantId::LocusFocus(c) => write!(f, "LocusFocus({c})"),
            InvariantId::LocusScale(c) => write!(f, "LocusScale({c})"),
            InvariantId::LocusHomothety(c) => write!(f, "LocusHomothety({c})"),
            InvariantId::LocusFit(c) => write!(f, "LocusFit({c})"),
            InvariantId::LocusMajorAxis(c) => write!(f, "LocusMajorAxis({c})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub id: InvariantId,
    pub image: Image,
    pub samples: usize,
    pub mean: f64,
    /// Largest deviation from the sample mean (mean point for centers).
    pub max_abs_deviation: f64,
    /// `max − min` of the samples (bounding-box diagonal for centers).
    pub spread: f64,
    pub predicted: Option<f64>,
    pub mean_point: Option<Point2>,
    pub predicted_point: Option<Point2>,
    /// Distance of the mean point from the predicted point or line.
    pub location_error: Option<f64>,
    /// Absolute tolerance applied.
    pub tolerance: f64,
    /// Deviation verdict (stationarity for centers).
    pub stationary: bool,
    /// Location verdict, when a location is predicted.
    pub located: Option<bool>,
    pub verdict: Verdict,
    pub experimental: bool,
}

impl InvariantReport {
    fn scalar(
        id: InvariantId,
        image: Image,
        values: &[f64],
        predicted: Option<f64>,
        rel_tol: f64,
    ) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let max_abs_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let tolerance = rel_tol * predicted.unwrap_or(mean).abs().max(1.0);
        let stationary = max_abs_deviation <= tolerance;
        let located = predicted.map(|p| (mean - p).abs() <= tolerance);
        Self {
            id,
            image,
            samples: values.len(),
            mean,
            max_abs_deviation,
            spread: hi - lo,
            predicted,
            mean_point: None,
            predicted_point: None,
            location_error: predicted.map(|p| (mean - p).abs()),
            tolerance,
            stationary,
            located,
            verdict: Verdict::from_bool(stationary && located.unwrap_or(true)),
            experimental: false,
        }
    }

    fn drift(id: InvariantId, image: Image, points: &[Point2], tolerance: f64) -> Self {
        let n = points.len() as f64;
        let mean_point = points.iter().fold(Point2::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
        let dists: Vec<f64> = points.iter().map(|p| p.dist(mean_point)).collect();
        let max_abs_deviation = dists.iter().copied().fold(0.0, f64::max);
        let stationary = max_abs_deviation <= tolerance;
        Self {
            id,
            image,
            samples: points.len(),
            mean: dists.iter().sum::<f64>() / n,
            max_abs_deviation,
            spread: bounding_diameter(points),
            predicted: None,
            mean_point: Some(mean_point),
            predicted_point: None,
            location_error: None,
            tolerance,
            stationary,
            located: None,
            verdict: Verdict::from_bool(stationary),
            experimental: false,
        }
    }

    fn with_location(mut self, error: f64, ok: bool) -> Self {
        self.location_error = Some(error);
        self.located = Some(ok);
        self.verdict = Verdict::from_bool(self.stationary && ok);
        self
    }

    fn measured(
        id: InvariantId,
        samples: usize,
        value: f64,
        predicted: f64,
        tolerance: f64,
    ) -> Self {
        let err = (value - predicted).abs();
        let ok = err <= tolerance;
        Self {
            id,
            image: Image::Family,
            samples,
            mean: value,
            max_abs_deviation: err,
            spread: 0.0,
            predicted: Some(predicted),
            mean_point: None,
            predicted_point: None,
            location_error: Some(err),
            tolerance,
            stationary: ok,
            located: Some(ok),
            verdict: Verdict::from_bool(ok),
            experimental: false,
        }
    }

    fn failed(id: InvariantId, samples: usize, tolerance: f64) -> Self {
        Self {
            id,
            image: Image::Family,
            samples,
            // no measurement: keep values finite so reports stay JSON-representable
            mean: 0.0,
            max_abs_deviation: f64::MAX,
            spread: 0.0,
            predicted: None,
            mean_point: None,
            predicted_point: None,
            location_error: None,
            tolerance,
            stationary: false,
            located: Some(false),
            verdict: Verdict::Fail,
            experimental: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

fn image_vertices(
    spec: &FamilySpec,
    s: &PolygonSample,
    image: Image,
) -> Result<Vec<Point2>, InvariantError> {
    match image {
        Image::Family => Ok(s.vertices.clone()),
        Image::PolarImage => Ok(polar_polygon(&s.vertices, &spec.pair.outer_matrix())?),
    }
}

/// Value of a scalar quantity on one polygon.
pub fn scalar_value(id: InvariantId, vertices: &[Point2]) -> Result<f64, InvariantError> {
    let n = vertices.len();
    if n != 3 {
        let angles = polygon_angles(vertices)?;
        return match id {
            InvariantId::SinHalfSum => Ok(angles.iter().map(|t| (t / 2.0).sin()).sum()),
            InvariantId::TanHalfSum => Ok(angles.iter().map(|t| (t / 2.0).tan()).sum()),
            InvariantId::CosSum => Ok(angles.iter().map(|t| t.cos()).sum()),
            InvariantId::Cos2Sum => Ok(angles.iter().map(|t| (2.0 * t).cos()).sum()),
            InvariantId::CosProd => Ok(angles.iter().map(|t| t.cos()).product()),
            other => Err(InvariantError::UnsupportedForFamily(other.to_string(), n)),
        };
    }
    let t = Triangle::new(vertices[0], vertices[1], vertices[2]);
    let m = metrics(&t)?;
    let v = match id {
        InvariantId::Inradius => m.inradius,
        InvariantId::Circumradius => m.circumradius,
        InvariantId::SinHalfSum => angle_sums(&m).sin_half_sum,
        InvariantId::TanHalfSum => angle_sums(&m).tan_half_sum,
        InvariantId::Cos2Sum => angle_sums(&m).cos2_sum,
        InvariantId::CosSum => angle_sums(&m).cos_sum,
        InvariantId::CosProd => angle_sums(&m).cos_prod,
        InvariantId::SumSqSides => m.sum_sq_sides(),
        InvariantId::PolarCircleSq => polar_circle_sq(&m),
        InvariantId::AdamsRadius => adams_radius(&m)?,
        InvariantId::DistSqX1X2 => dist_sq_x1_x2(&m),
        InvariantId::DistSqX1X4 => dist_sq_x1_x4(&m),
        InvariantId::DistSqX1X7 => dist_sq_x1_x7(&m),
        InvariantId::Identity(check) => check.residual(&t)?,
        other => return Err(InvariantError::UnsupportedForFamily(other.to_string(), 3)),
    };
    Ok(v)
}

/// Position of a center (or polygon centroid) on one polygon.
pub fn center_value(id: CenterId, vertices: &[Point2]) -> Result<Point2, InvariantError> {
    if id.is_polygon_centroid() {
        let c = ngon_centroids(vertices)?;
        return Ok(c.get(id).expect("polygon centroid id"));
    }
    let t = Triangle::from_slice(vertices)
        .ok_or_else(|| InvariantError::UnsupportedForFamily(id.to_string(), vertices.len()))?;
    Ok(center(&t, id)?)
}

/// Trajectory of a center over already-chased samples.
pub fn center_on_samples(
    spec: &FamilySpec,
    samples: &[PolygonSample],
    id: CenterId,
    image: Image,
) -> Result<Vec<Point2>, InvariantError> {
    samples
        .iter()
        .map(|s| center_value(id, &image_vertices(spec, s, image)?))
        .collect()
}

fn scalars_on_samples(
    spec: &FamilySpec,
    samples: &[PolygonSample],
    id: InvariantId,
    image: Image,
) -> Result<Vec<f64>, InvariantError> {
    samples
        .iter()
        .map(|s| scalar_value(id, &image_vertices(spec, s, image)?))
        .collect()
}

fn samples_for(spec: &FamilySpec, count: usize) -> Result<Vec<PolygonSample>, InvariantError> {
    if count < MIN_SAMPLES {
        return Err(InvariantError::TooFewSamples(count));
    }
    Ok(sample_uncertified(&spec.pair, spec.n, count)?)
}

/// Evaluate one quantity over `count` uniform samples of the family.
pub fn measure(
    spec: &FamilySpec,
    id: InvariantId,
    count: usize,
) -> Result<InvariantReport, InvariantError> {
    measure_on(spec, id, Image::Family, count)
}

pub fn measure_on(
    spec: &FamilySpec,
    id: InvariantId,
    image: Image,
    count: usize,
) -> Result<InvariantReport, InvariantError> {
    let samples = samples_for(spec, count)?;
    measure_samples(spec, &samples, id, image, None, DEFAULT_TOL)
}

fn measure_samples(
    spec: &FamilySpec,
    samples: &[PolygonSample],
    id: InvariantId,
    image: Image,
    predicted: Option<f64>,
    tol: f64,
) -> Result<InvariantReport, InvariantError> {
    match id {
        InvariantId::CenterDrift(c) | InvariantId::CentroidDrift(c) => {
            if spec.n != 3 && !c.is_polygon_centroid() {
                return Err(InvariantError::UnsupportedForFamily(c.to_string(), spec.n));
            }
            let pts = center_on_samples(spec, samples, c, image)?;
            Ok(InvariantReport::drift(id, image, &pts, tol * spec.scale()))
        }
        InvariantId::LocusFocus(_)
        | InvariantId::LocusScale(_)
        | InvariantId::LocusHomothety(_)
        | InvariantId::LocusFit(_)
        | InvariantId::LocusMajorAxis(_) => Err(InvariantError::UnsupportedForFamily(
            format!("{id} needs a locus claim"),
            spec.n,
        )),
        _ => {
            let values = scalars_on_samples(spec, samples, id, image)?;
            Ok(InvariantReport::scalar(id, image, &values, predicted, tol))
        }
    }
}

/// Locus trajectories are computed once per (center, image) and reused.
struct LocusCache<'a> {
    spec: &'a FamilySpec,
    samples: &'a [PolygonSample],
    cache: Vec<(CenterId, LocusResult)>,
}

impl<'a> LocusCache<'a> {
    fn get(&mut self, id: CenterId) -> Result<&LocusResult, InvariantError> {
        if let Some(i) = self.cache.iter().position(|(c, _)| *c == id) {
            return Ok(&self.cache[i].1);
        }
        let pts = center_on_samples(self.spec, self.samples, id, Image::Family)?;
        let l =
            locus_from_points(id, Image::Family, pts, self.spec.scale()).map_err(|e| match e {
                LociError::Invariant(inner) => inner,
                other => InvariantError::UnsupportedForFamily(other.to_string(), self.spec.n),
            })?;
        self.cache.push((id, l));
        Ok(&self.cache.last().expect("just pushed").1)
    }
}

fn check_prediction(
    spec: &FamilySpec,
    samples: &[PolygonSample],
    loci: &mut LocusCache<'_>,
    p: &Prediction,
    tol: f64,
) -> Result<InvariantReport, InvariantError> {
    let tol = if p.tolerance == DEFAULT_TOL {
        tol
    } else {
        p.tolerance
    };
    let count = samples.len();
    let scale = spec.scale();
    let mut report = match p.claim {
        Claim::Conserved {
            quantity,
            image,
            value,
        } => measure_samples(spec, samples, quantity, image, value, tol)?,
        Claim::Stationary { center, image, at } => {
            let mut r =
                measure_samples(spec, samples, InvariantId::drift(center), image, None, tol)?;
            if let Some(at) = at {
                let err = r.mean_point.expect("drift report").dist(at);
                r.predicted_point = Some(at);
                let ok = err <= r.tolerance;
                r = r.with_location(err, ok);
            }
            r
        }
        Claim::StationaryOnLine { center, through } => {
            let r = measure_samples(
                spec,
                samples,
                InvariantId::drift(center),
                Image::Family,
                None,
                tol,
            )?;
            let err = r
                .mean_point
                .expect("drift report")
                .dist_to_line(through[0], through[1]);
            let ok = err <= r.tolerance;
            r.with_location(err, ok)
        }
        Claim::OffLine {
            center,
            through,
            min_distance,
        } => {
            let pts = center_on_samples(spec, samples, center, Image::Family)?;
            let closest = pts
                .iter()
                .map(|q| q.dist_to_line(through[0], through[1]))
                .fold(f64::INFINITY, f64::min);
            let mut r = InvariantReport::drift(
                InvariantId::drift(center),
                Image::Family,
                &pts,
                tol * scale,
            );
            r.predicted = Some(min_distance);
            r.with_location(closest, closest > min_distance)
        }
        Claim::LocusFocus { center, focus } => {
            let l = loci.get(center)?;
            match focus_distance(l, focus) {
                Ok(d) => InvariantReport::measured(
                    InvariantId::LocusFocus(center),
                    count,
                    d,
                    0.0,
                    tol * scale,
                ),
                Err(_) => InvariantReport::failed(InvariantId::LocusFocus(center), count, tol),
            }
        }
        Claim::LocusScaled {
            center,
            reference,
            ratio,
        } => {
            let other = loci.get(reference)?.clone();
            let l = loci.get(center)?;
            match axis_ratios(l, &other) {
                Ok((major, minor)) => {
                    // report the worse of the two axis ratios
                    let worst = if (major - ratio).abs() >= (minor - ratio).abs() {
                        major
                    } else {
                        minor
                    };
                    InvariantReport::measured(
                        InvariantId::LocusScale(center),
                        count,
                        worst,
                        ratio,
                        tol,
                    )
                }
                Err(_) => InvariantReport::failed(InvariantId::LocusScale(center), count, tol),
            }
        }
        Claim::LocusHomothetic {
            center,
            reference,
            factor,
        } => {
            let l = loci.get(center)?;
            match homothety_check(l, &reference) {
                Ok(h) => InvariantReport::measured(
                    InvariantId::LocusHomothety(center),
                    count,
                    h.factor,
                    factor,
                    tol,
                ),
                Err(_) => InvariantReport::failed(InvariantId::LocusHomothety(center), count, tol),
            }
        }
        Claim::LocusIsConic { center } => {
            let l = loci.get(center)?;
            let ok = l.shape != LocusShape::NonElliptic;
            let mut r = InvariantReport::measured(
                InvariantId::LocusFit(center),
                count,
                l.algebraic_residual,
                0.0,
                tol,
            );
            if !ok {
                r.verdict = Verdict::Fail;
            }
            r
        }
        Claim::LocusMajorAxis { center, reference } => {
            let l = loci.get(center)?;
            match major_axis_match(l, &reference) {
                Ok(m) => {
                    let worst = m.length_diff.max(m.angle_diff).max(m.offset);
                    InvariantReport::measured(
                        InvariantId::LocusMajorAxis(center),
                        count,
                        worst,
                        0.0,
                        tol,
                    )
                }
                Err(_) => InvariantReport::failed(InvariantId::LocusMajorAxis(center), count, tol),
            }
        }
    };
    report.experimental = p.experimental;
    Ok(report)
}

/// Loci fitted while verifying, in order of first use.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub porism_defect: f64,
    pub reports: Vec<InvariantReport>,
    pub loci: Vec<LocusResult>,
}

impl Verification {
    /// All non-experimental reports passed.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.experimental || r.passed())
    }
}

/// Porism gate, then every prediction plus the identity suite.
pub fn verify(
    spec: &FamilySpec,
    count: usize,
    tol: f64,
) -> Result<Vec<InvariantReport>, InvariantError> {
    Ok(verify_full(spec, count, tol)?.reports)
}

pub fn verify_full(
    spec: &FamilySpec,
    count: usize,
    tol: f64,
) -> Result<Verification, InvariantError> {
    let porism_defect = certify(&spec.pair, spec.n)?;
    let samples = samples_for(spec, count)?;
    let mut loci = LocusCache {
        spec,
        samples: &samples,
        cache: Vec::new(),
    };
    let mut reports = Vec::new();
    for p in &spec.predictions {
        reports.push(check_prediction(spec, &samples, &mut loci, p, tol)?);
    }
    if spec.n == 3 {
        for check in IdentityCheck::ALL {
            let id = InvariantId::Identity(check);
            let values = scalars_on_samples(spec, &samples, id, Image::Family)?;
            let worst = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let mut r = InvariantReport::measured(id, count, worst, 0.0, IDENTITY_TOL);
            r.mean = values.iter().sum::<f64>() / values.len() as f64;
            reports.push(r);
        }
        if spec.kind() == FamilyKind::Chapple
            && !reports
                .iter()
                .any(|r| r.id == InvariantId::CosSum && r.image == Image::Family)
        {
            reports.push(measure_samples(
                spec,
                &samples,
                InvariantId::CosSum,
                Image::Family,
                None,
                tol,
            )?);
        }
    }
    Ok(Verification {
        porism_defect,
        reports,
        loci: loci.cache.into_iter().map(|(_, l)| l).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{focal_x1, iso_x2};

    #[test]
    fn too_few_samples_rejected() {
        let f = focal_x1(2.0, 1.0).unwrap();
        assert_eq!(
            measure(&f, InvariantId::Inradius, 4).unwrap_err(),
            InvariantError::TooFewSamples(4)
        );
    }

    #[test]
    fn weill_point_unsupported_for_quadrilaterals() {
        let f = crate::families::macbeath_ngon(1.0, Point2::new(0.2, 0.0), 4).unwrap();
        assert!(matches!(
            measure(&f, InvariantId::CenterDrift(CenterId::X354), 8),
            Err(InvariantError::UnsupportedForFamily(_, 4))
        ));
    }

    #[test]
    fn drift_reports_mean_point() {
        let f = iso_x2(2.0, 1.0).unwrap();
        let r = measure(&f, InvariantId::CenterDrift(CenterId::X2), 16).unwrap();
        assert!(r.passed());
        let p = r.mean_point.unwrap();
        assert!(p.dist(Point2::new(0.0, 3f64.sqrt() / 6.0)) < 1e-10);
    }
}
