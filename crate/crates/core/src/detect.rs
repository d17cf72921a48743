//! Spoofing detectors built on the expected left -> flat -> right C/N0 trend
//! of each satellite.
//!
//! Authentic signals arrive from distinct sky directions, so banking the
//! antenna raises some satellites and lowers others in a predictable,
//! strictly monotone way. A single emitter makes every PRN respond the same
//! way (strongest when level). Both detectors therefore take a list of PRNs
//! expected to increase and a list expected to decrease, flag every PRN
//! that breaks its expected strict ordering, and call the data spoofed if
//! anything was flagged.
//!
//! The rule-based detector takes the lists as given. The pattern-based
//! detector predicts them from the real-sky flat log by projecting each
//! satellite's mean direction onto the three antenna boresights.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::aggregate::{
    avg_cno, is_decreasing, is_increasing, mean_positions, median, summarize, CnoMeans, SampleFilter, SummaryOptions,
    TrendLabel,
};
use crate::error::{Error, Result};
use crate::geometry::{sph2cart, AntennaSetup, BoresightModel, BoresightSet};
use crate::ingest::{Condition, Orientation, OrientationDataset, PerOrientation, ScenarioBundle, SvId};
use crate::kv;

/// Expectation lists shipped with the crate, from the original flat-antenna
/// experiment. Only meaningful for that date and site.
pub const REFERENCE_EXPECTATION: &str = include_str!("../config/default_expectation.txt");

/// Typical per-PRN spread across orientations, dB, for authentic signals.
pub const REAL_SKY_SPREAD_BAND_DB: (f64, f64) = (4.0, 6.0);
/// Typical per-PRN spread across orientations, dB, under spoofing.
pub const SPOOFED_SPREAD_BAND_DB: (f64, f64) = (0.5, 1.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedTrend {
    Increasing,
    Decreasing,
}

impl ExpectedTrend {
    pub fn holds_for(self, triple: &PerOrientation<f64>) -> bool {
        match self {
            ExpectedTrend::Increasing => is_increasing(triple.left, triple.flat, triple.right),
            ExpectedTrend::Decreasing => is_decreasing(triple.left, triple.flat, triple.right),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    HardCoded,
    GeometryPredicted(AntennaSetup),
}

/// PRNs expected to rise or fall from left bank to right bank.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendExpectation {
    increasing: BTreeSet<SvId>,
    decreasing: BTreeSet<SvId>,
    provenance: Provenance,
}

impl TrendExpectation {
    pub fn new(
        increasing: impl IntoIterator<Item = SvId>,
        decreasing: impl IntoIterator<Item = SvId>,
        provenance: Provenance,
    ) -> Result<Self> {
        let increasing: BTreeSet<SvId> = increasing.into_iter().collect();
        let decreasing: BTreeSet<SvId> = decreasing.into_iter().collect();
        if let Some(&sv) = increasing.intersection(&decreasing).next() {
            return Err(Error::OverlappingExpectation(sv));
        }
        Ok(Self {
            increasing,
            decreasing,
            provenance,
        })
    }

    pub fn hard_coded(
        increasing: impl IntoIterator<Item = SvId>,
        decreasing: impl IntoIterator<Item = SvId>,
    ) -> Result<Self> {
        Self::new(increasing, decreasing, Provenance::HardCoded)
    }

    /// Parses `increasing = ...` / `decreasing = ...` lists of comma separated
    /// PRNs. Both keys are required; either list may be empty.
    pub fn parse(text: &str) -> Result<Self> {
        let mut increasing = None;
        let mut decreasing = None;
        for entry in kv::parse(text)? {
            let slot = match entry.key {
                "increasing" => &mut increasing,
                "decreasing" => &mut decreasing,
                other => return Err(Error::config(other, "unknown key (expected increasing or decreasing)")),
            };
            if slot.is_some() {
                return Err(Error::config(entry.key, format!("listed twice (line {})", entry.line)));
            }
            let ids = entry
                .value
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| match s.parse::<SvId>() {
                    Ok(id) if id >= 1 => Ok(id),
                    _ => Err(Error::config(entry.key, format!("`{s}` is not a PRN"))),
                })
                .collect::<Result<Vec<_>>>()?;
            *slot = Some(ids);
        }
        let increasing = increasing.ok_or_else(|| Error::config("increasing", "missing"))?;
        let decreasing = decreasing.ok_or_else(|| Error::config("decreasing", "missing"))?;
        Self::hard_coded(increasing, decreasing)
    }

    pub fn reference() -> Self {
        Self::parse(REFERENCE_EXPECTATION).expect("shipped expectation file is valid")
    }

    pub fn to_config_string(&self) -> String {
        fn join(set: &BTreeSet<SvId>) -> String {
            set.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        }
        format!(
            "increasing = {}\ndecreasing = {}\n",
            join(&self.increasing),
            join(&self.decreasing)
        )
    }

    pub fn increasing(&self) -> &BTreeSet<SvId> {
        &self.increasing
    }

    pub fn decreasing(&self) -> &BTreeSet<SvId> {
        &self.decreasing
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn expected(&self, sv: SvId) -> Option<ExpectedTrend> {
        if self.increasing.contains(&sv) {
            Some(ExpectedTrend::Increasing)
        } else if self.decreasing.contains(&sv) {
            Some(ExpectedTrend::Decreasing)
        } else {
            None
        }
    }

    fn checks(&self) -> impl Iterator<Item = (SvId, ExpectedTrend)> + '_ {
        self.increasing
            .iter()
            .map(|&sv| (sv, ExpectedTrend::Increasing))
            .chain(self.decreasing.iter().map(|&sv| (sv, ExpectedTrend::Decreasing)))
    }
}

impl Serialize for TrendExpectation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let geometry = match self.provenance {
            Provenance::HardCoded => None,
            Provenance::GeometryPredicted(setup) => Some(setup),
        };
        let mut s = serializer.serialize_struct("TrendExpectation", 4)?;
        s.serialize_field("increasing", &self.increasing)?;
        s.serialize_field("decreasing", &self.decreasing)?;
        s.serialize_field(
            "provenance",
            match self.provenance {
                Provenance::HardCoded => "hard-coded",
                Provenance::GeometryPredicted(_) => "geometry-predicted",
            },
        )?;
        s.serialize_field("antenna", &geometry)?;
        s.end()
    }
}

/// A PRN whose means break the ordering it was expected to follow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub sv_id: SvId,
    pub expected: ExpectedTrend,
    #[serde(flatten)]
    pub observed: PerOrientation<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ViolationScan {
    pub violations: Vec<Violation>,
    /// Expected PRNs present in all three orientations.
    pub checked: usize,
    /// Expected PRNs missing from at least one orientation.
    pub skipped: usize,
}

/// Checks every expected PRN that is present in all three maps.
pub fn detect_violations(left: &CnoMeans, flat: &CnoMeans, right: &CnoMeans, expect: &TrendExpectation) -> ViolationScan {
    let mut scan = ViolationScan::default();
    for (sv, expected) in expect.checks() {
        let (Some(&l), Some(&f), Some(&r)) = (left.get(&sv), flat.get(&sv), right.get(&sv)) else {
            scan.skipped += 1;
            continue;
        };
        scan.checked += 1;
        let observed = PerOrientation::new(l, f, r);
        if !expected.holds_for(&observed) {
            scan.violations.push(Violation {
                sv_id: sv,
                expected,
                observed,
            });
        }
    }
    scan
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Spoofed,
    NonSpoofed,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Classification::Spoofed => "spoofed",
            Classification::NonSpoofed => "non-spoofed",
        })
    }
}

/// Any violation at all means spoofed.
pub fn classify(violations: &[Violation]) -> Classification {
    if violations.is_empty() {
        Classification::NonSpoofed
    } else {
        Classification::Spoofed
    }
}

/// Expected trend of a satellite at `(azim, elev)`, from the ordering of its
/// projections onto the three boresights. Ties leave it unclassified.
pub fn predict_label(boresights: &BoresightSet, azim_deg: f64, elev_deg: f64) -> Result<Option<ExpectedTrend>> {
    let v = sph2cart(azim_deg, elev_deg)?;
    let p = boresights.projections(&v);
    Ok(if is_increasing(p.left, p.flat, p.right) {
        Some(ExpectedTrend::Increasing)
    } else if is_decreasing(p.left, p.flat, p.right) {
        Some(ExpectedTrend::Decreasing)
    } else {
        None
    })
}

/// Predicts the expectation lists from satellite positions in a flat log.
pub fn predict_trends(flat: &OrientationDataset, antenna: &AntennaSetup) -> Result<TrendExpectation> {
    let set = antenna.boresights()?;
    let positions = mean_positions(flat.observations());
    if positions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut increasing = Vec::new();
    let mut decreasing = Vec::new();
    for (sv, (azim, elev)) in positions {
        match predict_label(&set, azim, elev)? {
            Some(ExpectedTrend::Increasing) => increasing.push(sv),
            Some(ExpectedTrend::Decreasing) => decreasing.push(sv),
            None => {}
        }
    }
    TrendExpectation::new(increasing, decreasing, Provenance::GeometryPredicted(*antenna))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Rule,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// No expected PRN could be checked, so "non-spoofed" rests on nothing.
    LowEvidence,
}

/// Per-PRN means and spread, for every PRN seen in all three orientations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrnEvidence {
    pub sv_id: SvId,
    #[serde(flatten)]
    pub means: PerOrientation<f64>,
    pub spread_db: f64,
    pub variance_db2: f64,
    pub observed: TrendLabel,
    pub expected: Option<ExpectedTrend>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpreadBands {
    pub real_sky_db: (f64, f64),
    pub spoofed_db: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionReport {
    pub classification: Classification,
    pub detector: DetectorKind,
    pub condition: Condition,
    pub expectation: TrendExpectation,
    pub violations: Vec<Violation>,
    pub checked_prns: usize,
    pub skipped_prns: usize,
    /// Median over PRNs of the max-min spread of orientation means.
    /// Advisory only; the classification does not use it.
    pub median_spread_db: Option<f64>,
    pub spread_reference: SpreadBands,
    pub evidence: Vec<PrnEvidence>,
    pub warnings: Vec<Warning>,
}

impl DetectionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn has_warning(&self, w: Warning) -> bool {
        self.warnings.contains(&w)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DetectOptions {
    pub filter: SampleFilter,
}

/// Checks `condition` against fixed expectation lists.
pub fn run_rule_based(
    bundle: &ScenarioBundle,
    condition: Condition,
    expect: &TrendExpectation,
    options: DetectOptions,
) -> Result<DetectionReport> {
    run(bundle, condition, expect.clone(), DetectorKind::Rule, options)
}

/// Predicts expectation lists from the real-sky flat log, then checks
/// `condition` against them.
pub fn run_pattern_based(
    bundle: &ScenarioBundle,
    condition: Condition,
    antenna: &AntennaSetup,
    options: DetectOptions,
) -> Result<DetectionReport> {
    bundle.triple(condition)?;
    let baseline = bundle
        .get(Condition::RealSky, Orientation::Flat)
        .ok_or(Error::MissingBaselineFlat)?;
    let expect = predict_trends(baseline, antenna)?;
    run(bundle, condition, expect, DetectorKind::Pattern, options)
}

fn run(
    bundle: &ScenarioBundle,
    condition: Condition,
    expect: TrendExpectation,
    detector: DetectorKind,
    options: DetectOptions,
) -> Result<DetectionReport> {
    let datasets = bundle.triple(condition)?;
    let left = avg_cno(datasets.left.observations(), options.filter)?;
    let flat = avg_cno(datasets.flat.observations(), options.filter)?;
    let right = avg_cno(datasets.right.observations(), options.filter)?;
    let scan = detect_violations(&left, &flat, &right, &expect);

    let summaries = summarize(
        bundle,
        condition,
        SummaryOptions {
            filter: options.filter,
            tie_epsilon: 0.0,
        },
    )?;
    let evidence: Vec<PrnEvidence> = summaries
        .iter()
        .filter_map(|s| {
            let means = s.triple()?;
            Some(PrnEvidence {
                sv_id: s.sv_id,
                means,
                spread_db: s.spread_db?,
                variance_db2: s.variance_db2?,
                observed: s.trend?,
                expected: expect.expected(s.sv_id),
            })
        })
        .collect();
    let spreads: Vec<f64> = evidence.iter().map(|e| e.spread_db).collect();

    let mut warnings = Vec::new();
    if scan.checked == 0 {
        warnings.push(Warning::LowEvidence);
    }

    Ok(DetectionReport {
        classification: classify(&scan.violations),
        detector,
        condition,
        expectation: expect,
        violations: scan.violations,
        checked_prns: scan.checked,
        skipped_prns: scan.skipped,
        median_spread_db: median(&spreads),
        spread_reference: SpreadBands {
            real_sky_db: REAL_SKY_SPREAD_BAND_DB,
            spoofed_db: SPOOFED_SPREAD_BAND_DB,
        },
        evidence,
        warnings,
    })
}

/// Default detector geometry: the azimuth-sweep layout, banked 45 degrees.
pub fn default_antenna(heading_deg: f64) -> AntennaSetup {
    AntennaSetup::new(heading_deg, crate::geometry::DEFAULT_BANK_DEG, BoresightModel::AzimuthSweep)
}
