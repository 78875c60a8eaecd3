use std::fs;
use std::path::Path;

use clap::ValueEnum;
use poncelet_core::families::{FamilyConfig, DEFAULT_TOL};
use poncelet_core::invariants::MIN_SAMPLES;
use poncelet_core::{Point2, Triangle};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    FocalX1,
    IsoX2,
    FocalX4,
    IsoX7,
    #[value(name = "macbeath")]
    #[serde(rename = "macbeath")]
    MacBeath,
    Dual,
    Chapple,
    Brocard,
    #[value(name = "affine-macbeath")]
    #[serde(rename = "affine-macbeath")]
    AffineMacBeath,
    #[value(name = "macbeath-ngon")]
    #[serde(rename = "macbeath-ngon")]
    MacBeathNgon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Loose shape parameters as they arrive from flags; unset values take
/// per-family defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShapeParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub oc: Option<Point2>,
    pub big_r: Option<f64>,
    pub r: Option<f64>,
    pub n: Option<usize>,
    pub seed_triangle: Option<Triangle>,
}

/// 3-4-5 right triangle.
pub fn default_seed_triangle() -> Triangle {
    Triangle::new(
        Point2::new(0.0, 0.0),
        Point2::new(4.0, 0.0),
        Point2::new(0.0, 3.0),
    )
}

impl ShapeParams {
    pub fn family(&self, name: FamilyName) -> FamilyConfig {
        let a = self.a.unwrap_or(2.0);
        let b = self.b.unwrap_or(1.0);
        match name {
            FamilyName::FocalX1 => FamilyConfig::FocalX1 { a, b },
            FamilyName::IsoX2 => FamilyConfig::IsoX2 { a, b },
            FamilyName::FocalX4 => FamilyConfig::FocalX4 { a, b },
            FamilyName::IsoX7 => FamilyConfig::IsoX7 { a, b },
            FamilyName::MacBeath => FamilyConfig::MacBeath {
                a: self.a.unwrap_or(1.0),
                b: self.b.unwrap_or(0.5),
            },
            FamilyName::Dual => FamilyConfig::Dual { a, b },
            FamilyName::Chapple => FamilyConfig::Chapple {
                big_r: self.big_r.unwrap_or(2.0),
                r: self.r.unwrap_or(0.9),
            },
            FamilyName::Brocard => FamilyConfig::Brocard {
                seed: self.seed_triangle.unwrap_or_else(default_seed_triangle),
            },
            FamilyName::AffineMacBeath => FamilyConfig::AffineMacBeath {
                a,
                b,
                oc: self.oc.unwrap_or(Point2::new(0.3, 0.2)),
            },
            FamilyName::MacBeathNgon => FamilyConfig::MacBeathNgon {
                radius: self.big_r.unwrap_or(1.0),
                center: self.oc.unwrap_or(Point2::new(0.2, 0.0)),
                n: self.n.unwrap_or(4),
            },
        }
    }
}

/// Everything a run depends on; echoed verbatim in the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub family: FamilyConfig,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub perturb: Option<f64>,
}

fn default_samples() -> usize {
    64
}

fn default_tolerance() -> f64 {
    DEFAULT_TOL
}

impl RunConfig {
    pub fn new(family: FamilyConfig) -> Self {
        Self {
            family,
            samples: default_samples(),
            tolerance: default_tolerance(),
            seed: None,
            perturb: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples < MIN_SAMPLES {
            return Err(CliError::Config(format!(
                "--samples must be at least {MIN_SAMPLES}"
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config("--tolerance must be positive".into()));
        }
        if let Some(eps) = self.perturb {
            if !eps.is_finite() || eps <= -1.0 {
                return Err(CliError::Config("--perturb must be > -1".into()));
            }
        }
        Ok(())
    }
}

/// Parse `x1,y1,x2,y2,x3,y3`.
pub fn parse_triangle(s: &str) -> Result<Triangle, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != 6 {
        return Err(format!(
            "expected 6 comma-separated numbers, got {}",
            v.len()
        ));
    }
    Ok(Triangle::new(
        Point2::new(v[0], v[1]),
        Point2::new(v[2], v[3]),
        Point2::new(v[4], v[5]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_per_family() {
        let p = ShapeParams::default();
        assert_eq!(
            p.family(FamilyName::Chapple),
            FamilyConfig::Chapple { big_r: 2.0, r: 0.9 }
        );
        assert_eq!(
            p.family(FamilyName::MacBeath),
            FamilyConfig::MacBeath { a: 1.0, b: 0.5 }
        );
    }

    #[test]
    fn triangle_parsing() {
        let t = parse_triangle("0,0, 4,0, 0,3").unwrap();
        assert_eq!(t, default_seed_triangle());
        assert!(parse_triangle("1,2,3").is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"family":{"kind":"dual","a":2.0,"b":1.0}}"#).unwrap();
        assert_eq!(cfg.samples, 64);
        assert_eq!(cfg.tolerance, DEFAULT_TOL);
    }
}
