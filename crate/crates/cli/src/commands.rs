use std::fs;
use std::path::{Path, PathBuf};

use poncelet_core::families::{Claim, FamilySpec, LOCUS_TOL};
use poncelet_core::invariants::{verify_full, InvariantError};
use poncelet_core::loci::{
    axis_ratios, focus_distance, homothety_check, locus, Homothety, LocusResult,
};
use poncelet_core::poncelet::{sample_uncertified, PonceletError};
use poncelet_core::{CenterId, Point2};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::probe::{self, PairFile, ProbeKind};
use crate::report::{FamilySummary, Report};
use crate::svg::{self, Plot};
use crate::CliError;

/// Where and in which formats results are written. With no directory the
/// JSON goes to stdout only.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Outputs {
    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write(&self, name: &str, contents: &str) -> Result<Option<PathBuf>, CliError> {
        let Some(dir) = &self.dir else {
            return Ok(None);
        };
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(Some(path))
    }
}

#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub value: T,
    /// JSON rendering of `value`.
    pub json: String,
    pub written: Vec<PathBuf>,
}

fn build_spec(cfg: &RunConfig) -> Result<FamilySpec, CliError> {
    cfg.validate()?;
    let spec = cfg.family.build()?;
    match cfg.perturb {
        Some(eps) if eps != 0.0 => Ok(spec.perturbed(eps)?),
        _ => Ok(spec),
    }
}

fn predicted_points(spec: &FamilySpec) -> Vec<Point2> {
    spec.predictions
        .iter()
        .filter_map(|p| match p.claim {
            Claim::Stationary { at, .. } => at,
            Claim::LocusFocus { focus, .. } => Some(focus),
            _ => None,
        })
        .collect()
}

const SVG_SAMPLES: usize = 32;
const SVG_STRIDE: usize = 4;

fn family_svg(spec: &FamilySpec, locus: Option<&LocusResult>, markers: &[Point2]) -> String {
    // non-porisms are still drawn; missing samples are just skipped
    let samples = sample_uncertified(&spec.pair, spec.n, SVG_SAMPLES).unwrap_or_default();
    svg::render(
        &spec.pair,
        &Plot {
            samples: &samples,
            stride: SVG_STRIDE,
            locus,
            markers,
        },
    )
}

/// Porism gate plus every prediction. A gate failure still yields a report.
pub fn verify(cfg: &RunConfig, out: &Outputs) -> Result<Outcome<Report>, CliError> {
    let spec = build_spec(cfg)?;
    let report = match verify_full(&spec, cfg.samples, cfg.tolerance) {
        Ok(v) => Report::from_verification(cfg.clone(), &spec, v),
        Err(InvariantError::Poncelet(PonceletError::NotAPorism { max_defect, .. })) => {
            Report::gate_failure(cfg.clone(), &spec, max_defect)
        }
        Err(e) => return Err(e.into()),
    };
    let json = report.to_json();
    let mut written = Vec::new();
    if out.wants(Format::Json) {
        written.extend(out.write("report.json", &json)?);
    }
    if out.wants(Format::Csv) {
        written.extend(out.write("report.csv", &report.to_csv())?);
    }
    if out.wants(Format::Svg) {
        let markers = predicted_points(&spec);
        written.extend(out.write("family.svg", &family_svg(&spec, None, &markers))?);
    }
    Ok(Outcome {
        value: report,
        json,
        written,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FocusCheck {
    pub claimed: Point2,
    pub distance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AxisRatio {
    pub reference: CenterId,
    pub major: f64,
    pub minor: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LocusReport {
    pub config: RunConfig,
    pub family: FamilySummary,
    pub center: CenterId,
    pub locus: LocusResult,
    pub focus_checks: Vec<FocusCheck>,
    pub axis_ratios: Vec<AxisRatio>,
    pub homothety: Option<Homothety>,
}

pub fn locus_cmd(
    cfg: &RunConfig,
    id: CenterId,
    out: &Outputs,
) -> Result<Outcome<LocusReport>, CliError> {
    let spec = build_spec(cfg)?;
    let scale = spec.scale();
    let l = locus(&spec, id, cfg.samples)?;
    let mut focus_checks = Vec::new();
    let mut ratios = Vec::new();
    let mut homothety = None;
    for p in &spec.predictions {
        match p.claim {
            Claim::LocusFocus { center, focus } if center == id => {
                if let Ok(d) = focus_distance(&l, focus) {
                    focus_checks.push(FocusCheck {
                        claimed: focus,
                        distance: d,
                        passed: d < LOCUS_TOL * scale,
                    });
                }
            }
            Claim::LocusScaled {
                center,
                reference,
                ratio,
            } if center == id => {
                let other = locus(&spec, reference, cfg.samples)?;
                if let Ok((major, minor)) = axis_ratios(&l, &other) {
                    ratios.push(AxisRatio {
                        reference,
                        major,
                        minor,
                        predicted: ratio,
                    });
                }
            }
            Claim::LocusHomothetic {
                center, reference, ..
            } if center == id => {
                homothety = homothety_check(&l, &reference).ok();
            }
            _ => {}
        }
    }
    let report = LocusReport {
        config: cfg.clone(),
        family: FamilySummary::of(&spec),
        center: id,
        locus: l,
        focus_checks,
        axis_ratios: ratios,
        homothety,
    };
    let json = serde_json::to_string_pretty(&report).expect("report values are finite");
    let mut written = Vec::new();
    if out.wants(Format::Json) {
        written.extend(out.write("locus.json", &json)?);
    }
    if out.wants(Format::Svg) {
        let markers: Vec<Point2> = report.focus_checks.iter().map(|f| f.claimed).collect();
        let svg = family_svg(&spec, Some(&report.locus), &markers);
        written.extend(out.write("locus.svg", &svg)?);
    }
    Ok(Outcome {
        value: report,
        json,
        written,
    })
}

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub kind: ProbeKind,
    pub trials: usize,
    pub seed: u64,
    pub samples: usize,
    pub pair_file: Option<PathBuf>,
}

/// Either a pair file or the configured family supplies the porism for the
/// tangent-sum probe.
pub fn probe_cmd(
    cfg: &RunConfig,
    opts: &ProbeOptions,
    out: &Outputs,
) -> Result<Outcome<serde_json::Value>, CliError> {
    let value = match opts.kind {
        ProbeKind::X4StationaryScan => {
            let r = probe::x4_stationary_scan(opts.trials, opts.seed, opts.samples)?;
            serde_json::to_value(r).expect("finite report")
        }
        ProbeKind::PolarTanHalfSum => {
            let (pair, n) = match &opts.pair_file {
                Some(path) => pair_from_file(path)?,
                None => {
                    let spec = build_spec(cfg)?;
                    (spec.pair, spec.n)
                }
            };
            let r = probe::polar_tan_half_sum(&pair, n, opts.samples)?;
            serde_json::to_value(r).expect("finite report")
        }
    };
    let json = serde_json::to_string_pretty(&value).expect("finite report");
    let mut written = Vec::new();
    if out.wants(Format::Json) {
        written.extend(out.write("probe.json", &json)?);
    }
    Ok(Outcome {
        value,
        json,
        written,
    })
}

fn pair_from_file(path: &Path) -> Result<(poncelet_core::ConicPair, usize), CliError> {
    let f = PairFile::load(path)?;
    if f.n < 3 {
        return Err(CliError::Config(format!(
            "n must be at least 3, got {}",
            f.n
        )));
    }
    Ok((f.pair()?, f.n))
}
