use std::fmt::Write as _;

use poncelet_core::families::{FamilyKind, FamilySpec, Image};
use poncelet_core::invariants::{InvariantReport, Verification};
use poncelet_core::loci::LocusResult;
use poncelet_core::poncelet::{CERTIFY_PROBES, PORISM_TOL};
use poncelet_core::{AxisEllipse, GeneralEllipse};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilySummary {
    pub kind: FamilyKind,
    pub n: usize,
    pub outer: AxisEllipse,
    pub caustic: GeneralEllipse,
    pub scale: f64,
}

impl FamilySummary {
    pub fn of(spec: &FamilySpec) -> Self {
        Self {
            kind: spec.kind(),
            n: spec.n,
            outer: spec.pair.outer,
            caustic: spec.pair.caustic_shape,
            scale: spec.scale(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certification {
    pub probes: usize,
    /// Absolute threshold, `PORISM_TOL · scale`.
    pub tolerance: f64,
    pub max_defect: f64,
    pub passed: bool,
}

impl Certification {
    pub fn new(max_defect: f64, scale: f64) -> Self {
        let tolerance = PORISM_TOL * scale;
        Self {
            probes: CERTIFY_PROBES,
            tolerance,
            max_defect,
            passed: max_defect < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub config: RunConfig,
    pub family: FamilySummary,
    pub porism_certification: Certification,
    pub reports: Vec<InvariantReport>,
    pub loci: Vec<LocusResult>,
}

impl Report {
    pub fn from_verification(config: RunConfig, spec: &FamilySpec, v: Verification) -> Self {
        Self {
            config,
            family: FamilySummary::of(spec),
            porism_certification: Certification::new(v.porism_defect, spec.scale()),
            reports: v.reports,
            loci: v.loci,
        }
    }

    /// Report for a family that failed the porism gate.
    pub fn gate_failure(config: RunConfig, spec: &FamilySpec, max_defect: f64) -> Self {
        Self {
            config,
            family: FamilySummary::of(spec),
            porism_certification: Certification::new(max_defect, spec.scale()),
            reports: Vec::new(),
            loci: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.porism_certification.passed
            && self.reports.iter().all(|r| r.experimental || r.passed())
    }

    pub fn failures(&self) -> Vec<&InvariantReport> {
        self.reports
            .iter()
            .filter(|r| !r.experimental && !r.passed())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        reports_csv(&self.reports)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const CSV_HEADER: &str = "id,image,samples,mean,max_abs_deviation,spread,predicted,\
mean_x,mean_y,location_error,tolerance,stationary,located,verdict,experimental";

/// One row per report; floats use shortest round-trip formatting (`{:?}`).
pub fn reports_csv(reports: &[InvariantReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let image = match r.image {
            Image::Family => "family",
            Image::PolarImage => "polar",
        };
        let verdict = if r.passed() { "pass" } else { "fail" };
        writeln!(
            out,
            "{},{},{},{:?},{:?},{:?},{},{},{},{},{:?},{},{},{},{}",
            r.id,
            image,
            r.samples,
            r.mean,
            r.max_abs_deviation,
            r.spread,
            opt(r.predicted),
            opt(r.mean_point.map(|p| p.x)),
            opt(r.mean_point.map(|p| p.y)),
            opt(r.location_error),
            r.tolerance,
            r.stationary,
            opt_bool(r.located),
            verdict,
            r.experimental,
        )
        .expect("writing to a String");
    }
    out
}
