use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poncelet_cli::commands::{self, Outputs, ProbeOptions};
use poncelet_cli::config::{parse_triangle, FamilyName, Format, RunConfig, ShapeParams};
use poncelet_cli::probe::ProbeKind;
use poncelet_cli::CliError;
use poncelet_core::families::DEFAULT_TOL;
use poncelet_core::{CenterId, Point2, Triangle};

#[derive(Debug, Parser)]
#[command(
    name = "poncelet",
    version,
    about = "Verify conservations and loci of special Poncelet families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify the porism and check every closed-form prediction.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sample a center over the family and fit its locus.
    Locus {
        /// Center to trace (X1..X20, X354, C0, C1, C2).
        #[arg(long)]
        center: CenterId,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a conjecture probe; findings are reported, never asserted.
    Probe {
        #[arg(long, value_enum)]
        kind: ProbeKind,
        /// Random conic pairs for the X4 scan.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Conic-pair JSON for the tangent-sum probe; the family flags are used otherwise.
        #[arg(long)]
        pair_file: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration; replaces the family and sampling flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "focal-x1")]
    family: FamilyName,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long = "oc-x", allow_hyphen_values = true)]
    oc_x: Option<f64>,
    #[arg(long = "oc-y", allow_hyphen_values = true)]
    oc_y: Option<f64>,
    /// Circumradius (chapple) or circle radius (macbeath-ngon).
    #[arg(long = "R")]
    big_r: Option<f64>,
    /// Inradius (chapple).
    #[arg(long = "r")]
    r: Option<f64>,
    /// Polygon order (macbeath-ngon).
    #[arg(long)]
    n: Option<usize>,
    /// Brocard seed triangle as x1,y1,x2,y2,x3,y3.
    #[arg(long, value_parser = parse_triangle, allow_hyphen_values = true)]
    seed_triangle: Option<Triangle>,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Scale the caustic by 1 + eps (negative control).
    #[arg(long, allow_hyphen_values = true)]
    perturb: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_values = ["json"])]
    format: Vec<Format>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            return RunConfig::load(path);
        }
        let oc = match (self.oc_x, self.oc_y) {
            (None, None) => None,
            (x, y) => Some(Point2::new(x.unwrap_or(0.0), y.unwrap_or(0.0))),
        };
        let params = ShapeParams {
            a: self.a,
            b: self.b,
            oc,
            big_r: self.big_r,
            r: self.r,
            n: self.n,
            seed_triangle: self.seed_triangle,
        };
        let cfg = RunConfig {
            family: params.family(self.family),
            samples: self.samples,
            tolerance: self.tolerance,
            seed: self.seed,
            perturb: self.perturb,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn outputs(&self) -> Outputs {
        Outputs {
            dir: self.out_dir.clone(),
            formats: self.format.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { run } => {
            let cfg = run.config()?;
            let outcome = commands::verify(&cfg, &run.outputs())?;
            finish(&outcome.json, &outcome.written, run.out_dir.is_some());
            let report = &outcome.value;
            if !report.porism_certification.passed {
                eprintln!(
                    "porism gate failed: max closure defect {:e} >= {:e}",
                    report.porism_certification.max_defect, report.porism_certification.tolerance
                );
                return Ok(1);
            }
            for r in report.failures() {
                eprintln!(
                    "FAIL {} ({:?}): deviation {:e}",
                    r.id, r.image, r.max_abs_deviation
                );
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Locus { center, run } => {
            let cfg = run.config()?;
            let outcome = commands::locus_cmd(&cfg, center, &run.outputs())?;
            finish(&outcome.json, &outcome.written, run.out_dir.is_some());
            Ok(0)
        }
        Command::Probe {
            kind,
            trials,
            pair_file,
            run,
        } => {
            let cfg = run.config()?;
            let opts = ProbeOptions {
                kind,
                trials,
                seed: run.seed.unwrap_or(0),
                samples: run.samples,
                pair_file,
            };
            let outcome = commands::probe_cmd(&cfg, &opts, &run.outputs())?;
            finish(&outcome.json, &outcome.written, run.out_dir.is_some());
            Ok(0)
        }
    }
}

fn finish(json: &str, written: &[PathBuf], to_dir: bool) {
    if to_dir {
        for p in written {
            eprintln!("wrote {}", p.display());
        }
    } else {
        println!("{json}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
