//! Report-only conjecture probes. Their findings never fail a build.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use poncelet_core::centers::polar_polygon;
use poncelet_core::conic::{classify, matrix_of, ConicMatrix};
use poncelet_core::families::{caustic_radius_general, dual, focal_x4, FamilyKind};
use poncelet_core::invariants::{center_value, scalar_value, InvariantId};
use poncelet_core::poncelet::{certify, sample_uncertified, ConicPair};
use poncelet_core::{AxisEllipse, CenterId, GeneralEllipse, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    X4StationaryScan,
    PolarTanHalfSum,
}

/// Known configurations are matched within this relative distance.
pub const MATCH_TOL: f64 = 1e-6;
pub const STATIONARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CausticCandidate {
    Circle { center: Point2, radius: f64 },
    ConcentricEllipse { a: f64, b: f64 },
}

impl CausticCandidate {
    fn shape(&self, outer: &AxisEllipse) -> Result<GeneralEllipse, CliError> {
        let e = match *self {
            CausticCandidate::Circle { center, radius } => {
                GeneralEllipse::new(center, radius, radius, 0.0)
            }
            CausticCandidate::ConcentricEllipse { a, b } => {
                AxisEllipse::new(outer.center, a, b).map(|e| e.to_general())
            }
        };
        e.map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct X4Trial {
    pub a: f64,
    pub b: f64,
    pub caustic: CausticCandidate,
    pub max_drift: f64,
    pub stationary: bool,
    pub matched: Option<FamilyKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct X4ScanReport {
    pub probe: ProbeKind,
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
    pub porisms: usize,
    pub rejected: usize,
    pub stationary: usize,
    pub matched_known: usize,
    /// Stationary-X4 families that match none of the known configurations.
    pub counterexamples: Vec<X4Trial>,
    /// Known configurations pushed through the same detector.
    pub controls: Vec<X4Trial>,
}

fn close(p: Point2, q: Point2, scale: f64) -> bool {
    p.dist(q) < MATCH_TOL * scale
}

/// Match against the focal-X4 (either mirror), dual and MacBeath forms.
pub fn match_known(outer: &AxisEllipse, caustic: &GeneralEllipse) -> Option<FamilyKind> {
    let scale = outer.scale();
    let near = |x: f64, y: f64| (x - y).abs() < MATCH_TOL * scale;
    let (a, b) = (outer.a, outer.b);
    if a > b && outer.center == Point2::ORIGIN {
        if let Ok(f) = focal_x4(a, b) {
            let k = f.pair.caustic_shape;
            let mirror = Point2::new(-k.center.x, k.center.y);
            if caustic.is_circle(MATCH_TOL)
                && near(caustic.semi_major, k.semi_major)
                && (close(caustic.center, k.center, scale) || close(caustic.center, mirror, scale))
            {
                return Some(FamilyKind::FocalX4);
            }
        }
        if let Ok(d) = dual(a, b) {
            let k = d.pair.caustic_shape;
            let aligned =
                (caustic.rotation - k.rotation).abs() < MATCH_TOL || caustic.is_circle(MATCH_TOL);
            if close(caustic.center, k.center, scale)
                && near(caustic.semi_major, k.semi_major)
                && near(caustic.semi_minor, k.semi_minor)
                && aligned
            {
                return Some(FamilyKind::Dual);
            }
        }
    }
    if (a - b).abs() < MATCH_TOL * scale {
        // MacBeath up to similarity: one focus at the circle center, semi-major R/2
        let (f1, f2) = poncelet_core::conic::foci_of(caustic);
        let focus_ok = close(f1, outer.center, scale) || close(f2, outer.center, scale);
        if focus_ok && near(caustic.semi_major, a / 2.0) {
            return Some(FamilyKind::MacBeath);
        }
    }
    None
}

fn x4_drift(pair: &ConicPair, samples: usize) -> Result<f64, CliError> {
    let pts = sample_uncertified(pair, 3, samples)?
        .iter()
        .map(|s| center_value(CenterId::X4, &s.vertices))
        .collect::<Result<Vec<_>, _>>()?;
    let n = pts.len() as f64;
    let mean = pts.iter().fold(Point2::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
    Ok(pts.iter().map(|p| p.dist(mean)).fold(0.0, f64::max))
}

/// `None` when the candidate is not a triangle porism or cannot be chased.
fn run_trial(
    outer: AxisEllipse,
    caustic: CausticCandidate,
    samples: usize,
) -> Result<Option<X4Trial>, CliError> {
    let shape = caustic.shape(&outer)?;
    let Ok(pair) = ConicPair::from_ellipses(outer, shape) else {
        return Ok(None);
    };
    if certify(&pair, 3).is_err() {
        return Ok(None);
    }
    let Ok(max_drift) = x4_drift(&pair, samples) else {
        return Ok(None);
    };
    let stationary = max_drift < STATIONARY_TOL * outer.scale();
    Ok(Some(X4Trial {
        a: outer.a,
        b: outer.b,
        caustic,
        max_drift,
        stationary,
        matched: if stationary {
            match_known(&outer, &shape)
        } else {
            None
        },
    }))
}

fn known_controls(a: f64, b: f64) -> Vec<CausticCandidate> {
    let mut out = Vec::new();
    if let Ok(f) = focal_x4(a, b) {
        let k = f.pair.caustic_shape;
        out.push(CausticCandidate::Circle {
            center: k.center,
            radius: k.semi_major,
        });
        out.push(CausticCandidate::Circle {
            center: Point2::new(-k.center.x, 0.0),
            radius: k.semi_major,
        });
    }
    if let Ok(d) = dual(a, b) {
        let k = d.pair.caustic;
        let e = classify(&k).expect("dual caustic is an ellipse");
        let (ax, bx) = if e.rotation.abs() < FRAC_PI_2 / 2.0 {
            (e.semi_major, e.semi_minor)
        } else {
            (e.semi_minor, e.semi_major)
        };
        out.push(CausticCandidate::ConcentricEllipse { a: ax, b: bx });
    }
    out
}

/// Seeded random circular caustics (general-radius closure formula) and
/// concentric ellipses with `a_c/a + b_c/b = 1`, all triangle porisms.
pub fn x4_stationary_scan(
    trials: usize,
    seed: u64,
    samples: usize,
) -> Result<X4ScanReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = X4ScanReport {
        probe: ProbeKind::X4StationaryScan,
        seed,
        trials,
        samples,
        porisms: 0,
        rejected: 0,
        stationary: 0,
        matched_known: 0,
        counterexamples: Vec::new(),
        controls: Vec::new(),
    };
    for _ in 0..trials {
        let a = rng.gen_range(1.2..3.0);
        let b = a * rng.gen_range(0.3..0.9);
        let outer = AxisEllipse::centered(a, b).map_err(|e| CliError::Config(e.to_string()))?;
        let candidate = if rng.gen_bool(0.5) {
            let (u, v): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let center = Point2::new(0.8 * a * u, 0.8 * b * v);
            match caustic_radius_general(a, b, center.x, center.y) {
                Ok(radius) => CausticCandidate::Circle { center, radius },
                Err(_) => {
                    report.rejected += 1;
                    continue;
                }
            }
        } else {
            let u = rng.gen_range(0.1..0.9);
            CausticCandidate::ConcentricEllipse {
                a: a * u,
                b: b * (1.0 - u),
            }
        };
        match run_trial(outer, candidate, samples)? {
            Some(t) => {
                report.porisms += 1;
                if t.stationary {
                    report.stationary += 1;
                    if t.matched.is_some() {
                        report.matched_known += 1;
                    } else {
                        report.counterexamples.push(t);
                    }
                }
            }
            None => report.rejected += 1,
        }
    }
    let outer = AxisEllipse::centered(2.0, 1.0).expect("valid ellipse");
    for c in known_controls(2.0, 1.0) {
        if let Some(t) = run_trial(outer, c, samples)? {
            report.controls.push(t);
        }
    }
    Ok(report)
}

/// Conic given either as axis-ellipse parameters, a general ellipse or six
/// coefficients `[A, B, C, D, E, F]` of `Ax² + Bxy + Cy² + Dx + Ey + F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicInput {
    AxisEllipse(AxisEllipse),
    Ellipse(GeneralEllipse),
    Coefficients([f64; 6]),
}

impl ConicInput {
    pub fn matrix(&self) -> ConicMatrix {
        match self {
            ConicInput::AxisEllipse(e) => matrix_of(e),
            ConicInput::Ellipse(e) => e.to_conic(),
            ConicInput::Coefficients(c) => ConicMatrix::from_coefficients(*c),
        }
    }

    /// Outer conics must be axis-aligned ellipses.
    pub fn axis_ellipse(&self) -> Result<AxisEllipse, CliError> {
        if let ConicInput::AxisEllipse(e) = self {
            return Ok(*e);
        }
        let g = classify(&self.matrix()).map_err(|e| CliError::Config(format!("outer: {e}")))?;
        let tilt = g.rotation.rem_euclid(FRAC_PI_2);
        let aligned = tilt.min(FRAC_PI_2 - tilt) < 1e-12 || g.is_circle(1e-12);
        if !aligned {
            return Err(CliError::Config("outer conic must be axis-aligned".into()));
        }
        let vertical = (g.rotation - FRAC_PI_2).abs() < 1e-6;
        let (a, b) = if vertical {
            (g.semi_minor, g.semi_major)
        } else {
            (g.semi_major, g.semi_minor)
        };
        AxisEllipse::new(g.center, a, b).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub outer: ConicInput,
    pub caustic: ConicInput,
    pub n: usize,
}

impl PairFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn pair(&self) -> Result<ConicPair, CliError> {
        let outer = self.outer.axis_ellipse()?;
        ConicPair::new(outer, self.caustic.matrix(), None)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TanHalfSumReport {
    pub probe: ProbeKind,
    pub n: usize,
    pub samples: usize,
    pub porism_defect: f64,
    pub mean: f64,
    pub max_abs_deviation: f64,
    pub spread: f64,
    /// Deviation below `1e-9 · max(1, |mean|)`.
    pub conserved: bool,
}

/// Σtan(θᵢ/2) over the polar images (w.r.t. the outer conic) of the chased
/// polygons.
pub fn polar_tan_half_sum(
    pair: &ConicPair,
    n: usize,
    samples: usize,
) -> Result<TanHalfSumReport, CliError> {
    let porism_defect = certify(pair, n)?;
    let outer = pair.outer_matrix();
    let values = sample_uncertified(pair, n, samples)?
        .iter()
        .map(|s| {
            let polar = polar_polygon(&s.vertices, &outer)?;
            scalar_value(InvariantId::TanHalfSum, &polar)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_abs_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TanHalfSumReport {
        probe: ProbeKind::PolarTanHalfSum,
        n,
        samples,
        porism_defect,
        mean,
        max_abs_deviation,
        spread: hi - lo,
        conserved: max_abs_deviation < 1e-9 * mean.abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_configurations_match() {
        let outer = AxisEllipse::centered(2.0, 1.0).unwrap();
        let f = focal_x4(2.0, 1.0).unwrap();
        assert_eq!(
            match_known(&outer, &f.pair.caustic_shape),
            Some(FamilyKind::FocalX4)
        );
        let d = dual(2.0, 1.0).unwrap();
        assert_eq!(
            match_known(&outer, &d.pair.caustic_shape),
            Some(FamilyKind::Dual)
        );
        let other = GeneralEllipse::new(Point2::new(0.1, 0.0), 0.3, 0.3, 0.0).unwrap();
        assert_eq!(match_known(&outer, &other), None);
    }

    #[test]
    fn controls_are_detected_as_stationary() {
        let r = x4_stationary_scan(4, 1, 16).unwrap();
        assert_eq!(r.controls.len(), 3);
        for c in &r.controls {
            assert!(c.stationary, "{c:?}");
            assert!(c.matched.is_some(), "{c:?}");
        }
    }

    #[test]
    fn coefficient_outer_is_accepted() {
        let input = ConicInput::Coefficients([1.0, 0.0, 4.0, 0.0, 0.0, -4.0]);
        let e = input.axis_ellipse().unwrap();
        assert!((e.a - 2.0).abs() < 1e-12 && (e.b - 1.0).abs() < 1e-12);
        let tilted =
            ConicInput::Ellipse(GeneralEllipse::new(Point2::ORIGIN, 2.0, 1.0, 0.5).unwrap());
        assert!(tilted.axis_ellipse().is_err());
    }
}
