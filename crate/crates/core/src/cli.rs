//! Command-line surface. The binary only parses arguments and maps the
//! result of [`run`] onto a process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aggregate::{summarize, write_summary_csv, SampleFilter, SummaryOptions};
use crate::detect::{run_pattern_based, run_rule_based, Classification, DetectOptions, TrendExpectation, Warning};
use crate::error::{Error, Result};
use crate::geometry::{AntennaSetup, BoresightModel, DEFAULT_BANK_DEG};
use crate::ingest::{load_manifest_with, Condition, IngestOptions, ScenarioBundle};
use crate::render::{render_bundle, ColorScale, PlotKind, RenderSpec};
use crate::simulate::{write_bundle, SimulationConfig};

pub const SEED_ENV: &str = "SKYVANE_SEED";

#[derive(Debug, Parser)]
#[command(name = "skyvane", version, about = "GNSS spoofing detection from C/N0 trends across antenna bank angles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic six-log scenario bundle.
    Simulate(SimulateArgs),
    /// Classify one condition of a bundle as spoofed or not.
    Detect(DetectArgs),
    /// Write the per-PRN summary table for one condition.
    Summarize(SummarizeArgs),
    /// Draw a polar sky plot or trend lines as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario config (`key = value`); defaults are used when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Rule,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    Real,
    Spoofed,
}

impl From<ConditionArg> for Condition {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::Real => Condition::RealSky,
            ConditionArg::Spoofed => Condition::Spoofed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Sweep,
    Tilt,
}

impl From<ModelArg> for BoresightModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sweep => BoresightModel::AzimuthSweep,
            ModelArg::Tilt => BoresightModel::RollTilt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotArg {
    Sky,
    Trends,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Skip bad rows instead of rejecting the file.
    #[arg(long)]
    pub lenient: bool,
    /// Average only rows the receiver used in its fix.
    #[arg(long)]
    pub used_only: bool,
}

impl IngestArgs {
    fn load(&self) -> Result<ScenarioBundle> {
        load_manifest_with(&self.manifest, IngestOptions { lenient: self.lenient })
    }

    fn filter(&self) -> SampleFilter {
        if self.used_only {
            SampleFilter::UsedOnly
        } else {
            SampleFilter::All
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[arg(long, value_enum)]
    pub detector: DetectorArg,
    #[arg(long, value_enum)]
    pub condition: ConditionArg,
    /// Expectation lists for the rule detector.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    /// Antenna heading in degrees, for the pattern detector.
    #[arg(long, allow_negative_numbers = true)]
    pub heading: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BANK_DEG)]
    pub bank: f64,
    #[arg(long, value_enum, default_value = "sweep")]
    pub model: ModelArg,
    /// Also write the report to this file.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[arg(long, value_enum)]
    pub condition: ConditionArg,
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[arg(long, value_enum)]
    pub plot: PlotArg,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 20.0)]
    pub min_dbhz: f64,
    #[arg(long, default_value_t = 50.0)]
    pub max_dbhz: f64,
}

/// Successful outcomes and their exit codes. Errors exit with 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NonSpoofed,
    Spoofed,
    NonSpoofedLowEvidence,
}

pub const ERROR_EXIT_CODE: u8 = 2;

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Done | Outcome::NonSpoofed => 0,
            Outcome::Spoofed => 1,
            Outcome::NonSpoofedLowEvidence => 3,
        }
    }
}

/// Runs one command, writing its primary output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Simulate(args) => {
            let seed_override = std::env::var(SEED_ENV).ok();
            let manifest = cmd_simulate(args.config.as_deref(), &args.out, seed_override.as_deref())?;
            writeln!(stdout, "{}", manifest.display()).map_err(|e| Error::io("<stdout>", e))?;
            Ok(Outcome::Done)
        }
        Command::Detect(args) => cmd_detect(&args, stdout),
        Command::Summarize(args) => {
            let bundle = args.ingest.load()?;
            let summaries = summarize(
                &bundle,
                args.condition.into(),
                SummaryOptions {
                    filter: args.ingest.filter(),
                    tie_epsilon: 0.0,
                },
            )?;
            let mut buf = Vec::new();
            write_summary_csv(&summaries, &mut buf).map_err(|e| Error::io(&args.csv, e))?;
            std::fs::write(&args.csv, buf).map_err(|e| Error::io(&args.csv, e))?;
            Ok(Outcome::Done)
        }
        Command::Render(args) => {
            let bundle = args.ingest.load()?;
            let spec = RenderSpec {
                kind: match args.plot {
                    PlotArg::Sky => PlotKind::PolarSky,
                    PlotArg::Trends => PlotKind::TrendLines,
                },
                scale: ColorScale {
                    min_dbhz: args.min_dbhz,
                    max_dbhz: args.max_dbhz,
                },
                filter: args.ingest.filter(),
            };
            let svg = render_bundle(&bundle, &spec)?;
            std::fs::write(&args.out, svg).map_err(|e| Error::io(&args.out, e))?;
            Ok(Outcome::Done)
        }
    }
}

/// Builds the config (file, then seed override), simulates and writes the
/// bundle. Returns the manifest path.
pub fn cmd_simulate(config: Option<&Path>, out_dir: &Path, seed_override: Option<&str>) -> Result<PathBuf> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            SimulationConfig::parse(&text)?
        }
        None => SimulationConfig::default(),
    };
    if let Some(seed) = seed_override {
        let seed = seed
            .trim()
            .parse()
            .map_err(|_| Error::config(SEED_ENV, format!("`{seed}` is not an unsigned integer")))?;
        cfg.set_seed(seed);
    }
    write_bundle(&cfg.simulate()?, out_dir)
}

pub fn cmd_detect(args: &DetectArgs, stdout: &mut dyn Write) -> Result<Outcome> {
    let condition: Condition = args.condition.into();
    let options = DetectOptions {
        filter: args.ingest.filter(),
    };
    // argument checks come before touching any data files
    let report = match args.detector {
        DetectorArg::Rule => {
            let path = args
                .expect
                .as_ref()
                .ok_or_else(|| Error::config("--expect", "the rule detector needs an expectation file"))?;
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let expect = TrendExpectation::parse(&text)?;
            run_rule_based(&args.ingest.load()?, condition, &expect, options)?
        }
        DetectorArg::Pattern => {
            let heading = args
                .heading
                .ok_or_else(|| Error::config("--heading", "the pattern detector needs an antenna heading"))?;
            let antenna = AntennaSetup::new(heading, args.bank, args.model.into());
            antenna.boresights()?;
            run_pattern_based(&args.ingest.load()?, condition, &antenna, options)?
        }
    };
    let json = report.to_json();
    stdout
        .write_all(json.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    if let Some(path) = &args.json {
        std::fs::write(path, &json).map_err(|e| Error::io(path, e))?;
    }
    Ok(match report.classification {
        Classification::Spoofed => Outcome::Spoofed,
        Classification::NonSpoofed if report.has_warning(Warning::LowEvidence) => Outcome::NonSpoofedLowEvidence,
        Classification::NonSpoofed => Outcome::NonSpoofed,
    })
}
