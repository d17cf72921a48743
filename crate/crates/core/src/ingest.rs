//! NAV-SAT observation logs: CSV parsing, validation and scenario manifests.
//!
//! A log is a plain CSV with the header
//! `timestamp,svId,elev,azim,cno,qualityInd,svUsed`, one satellite per row.
//! Six logs (real sky and spoofed, each at left bank, flat and right bank)
//! make up a [`ScenarioBundle`], described on disk by a manifest of
//! `key = path` lines.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;
use std::ops::{Index, IndexMut};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDateTime;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kv;

pub const CSV_HEADER: &str = "timestamp,svId,elev,azim,cno,qualityInd,svUsed";

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.f";

/// Upper plausibility bound for C/N0 in dB-Hz.
pub const MAX_CNO_DBHZ: f64 = 99.0;

pub type SvId = u16;

/// One epoch's record for one satellite.
#[derive(Debug, Clone, PartialEq)]
pub struct SatObservation {
    pub timestamp: NaiveDateTime,
    pub sv_id: SvId,
    /// Degrees above the horizon.
    pub elev: f64,
    /// Degrees clockwise from true north.
    pub azim: f64,
    /// dB-Hz.
    pub cno: f64,
    /// Receiver-specific quality index, carried through uninterpreted.
    pub quality_ind: u32,
    pub sv_used: bool,
}

impl SatObservation {
    /// Checks the field bounds, returning the name and value of the first
    /// offending field.
    pub fn check_ranges(&self) -> std::result::Result<(), (&'static str, f64)> {
        if self.sv_id < 1 {
            return Err(("svId", f64::from(self.sv_id)));
        }
        if !(self.elev.is_finite() && (-90.0..=90.0).contains(&self.elev)) {
            return Err(("elev", self.elev));
        }
        if !(self.azim.is_finite() && (0.0..360.0).contains(&self.azim)) {
            return Err(("azim", self.azim));
        }
        if !(self.cno.is_finite() && (0.0..=MAX_CNO_DBHZ).contains(&self.cno)) {
            return Err(("cno", self.cno));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Orientation {
    #[serde(rename = "left")]
    LeftBank,
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "right")]
    RightBank,
}

impl Orientation {
    pub const ALL: [Orientation; 3] = [Orientation::LeftBank, Orientation::Flat, Orientation::RightBank];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::LeftBank => "left",
            Orientation::Flat => "flat",
            Orientation::RightBank => "right",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    RealSky,
    Spoofed,
}

impl Condition {
    pub const ALL: [Condition; 2] = [Condition::RealSky, Condition::Spoofed];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::RealSky => "real-sky",
            Condition::Spoofed => "spoofed",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "real" | "real-sky" | "ns" => Ok(Condition::RealSky),
            "spoofed" | "s" => Ok(Condition::Spoofed),
            other => Err(format!("unknown condition `{other}` (expected real or spoofed)")),
        }
    }
}

/// One value per antenna orientation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PerOrientation<T> {
    pub left: T,
    pub flat: T,
    pub right: T,
}

impl<T> PerOrientation<T> {
    pub fn new(left: T, flat: T, right: T) -> Self {
        Self { left, flat, right }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> PerOrientation<U> {
        PerOrientation {
            left: f(self.left),
            flat: f(self.flat),
            right: f(self.right),
        }
    }

    pub fn as_ref(&self) -> PerOrientation<&T> {
        PerOrientation {
            left: &self.left,
            flat: &self.flat,
            right: &self.right,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Orientation, &T)> {
        Orientation::ALL.into_iter().zip([&self.left, &self.flat, &self.right])
    }
}

impl<T> Index<Orientation> for PerOrientation<T> {
    type Output = T;

    fn index(&self, o: Orientation) -> &T {
        match o {
            Orientation::LeftBank => &self.left,
            Orientation::Flat => &self.flat,
            Orientation::RightBank => &self.right,
        }
    }
}

impl<T> IndexMut<Orientation> for PerOrientation<T> {
    fn index_mut(&mut self, o: Orientation) -> &mut T {
        match o {
            Orientation::LeftBank => &mut self.left,
            Orientation::Flat => &mut self.flat,
            Orientation::RightBank => &mut self.right,
        }
    }
}

/// Slot of a dataset inside a bundle, named like `ns_left` or `s_flat`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScenarioKey {
    pub condition: Condition,
    pub orientation: Orientation,
}

impl ScenarioKey {
    pub const fn new(condition: Condition, orientation: Orientation) -> Self {
        Self {
            condition,
            orientation,
        }
    }

    pub fn all() -> impl Iterator<Item = ScenarioKey> {
        Condition::ALL
            .into_iter()
            .flat_map(|c| Orientation::ALL.into_iter().map(move |o| ScenarioKey::new(c, o)))
    }
}

impl fmt::Display for ScenarioKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.condition {
            Condition::RealSky => "ns",
            Condition::Spoofed => "s",
        };
        write!(f, "{prefix}_{}", self.orientation)
    }
}

impl FromStr for ScenarioKey {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        let (prefix, orientation) = s.split_once('_').ok_or(())?;
        let condition = match prefix {
            "ns" => Condition::RealSky,
            "s" => Condition::Spoofed,
            _ => return Err(()),
        };
        let orientation = match orientation {
            "left" => Orientation::LeftBank,
            "flat" => Orientation::Flat,
            "right" => Orientation::RightBank,
            _ => return Err(()),
        };
        Ok(ScenarioKey::new(condition, orientation))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Skip bad rows (and later duplicates) instead of failing the file.
    pub lenient: bool,
}

impl IngestOptions {
    pub fn lenient() -> Self {
        Self { lenient: true }
    }
}

/// Rows of one log file plus what validation noticed along the way.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedLog {
    pub observations: Vec<SatObservation>,
    /// Rows dropped in lenient mode.
    pub skipped_rows: usize,
    /// Rows with a satellite below the horizon; accepted but worth reporting.
    pub negative_elevation_rows: usize,
}

/// Parses a NAV-SAT CSV file in strict mode.
pub fn parse_navsat_csv(path: impl AsRef<Path>) -> Result<ParsedLog> {
    parse_navsat_csv_with(path, IngestOptions::default())
}

pub fn parse_navsat_csv_with(path: impl AsRef<Path>, options: IngestOptions) -> Result<ParsedLog> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_navsat_bytes(&bytes, options)
}

/// Parses log contents. Never panics: every input is either a [`ParsedLog`]
/// or a single typed error.
pub fn parse_navsat_bytes(bytes: &[u8], options: IngestOptions) -> Result<ParsedLog> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let mut lines = bytes.split(|&b| b == b'\n').map(|l| l.strip_suffix(b"\r").unwrap_or(l));

    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER.as_bytes() {
        return Err(Error::MissingHeader {
            expected: CSV_HEADER,
            found: String::from_utf8_lossy(header).chars().take(80).collect(),
        });
    }

    let mut log = ParsedLog::default();
    let mut seen = HashSet::new();
    let mut last_time: Option<NaiveDateTime> = None;

    for (idx, raw) in lines.enumerate() {
        let line = idx + 2;
        if raw.is_empty() {
            continue;
        }
        let checked = parse_row(raw, line).and_then(|obs| {
            if last_time.is_some_and(|t| obs.timestamp < t) {
                return Err(Error::UnsortedTimestamps { line });
            }
            if seen.contains(&(obs.timestamp, obs.sv_id)) {
                return Err(Error::DuplicateObservation {
                    line,
                    sv_id: obs.sv_id,
                    timestamp: format_timestamp(&obs.timestamp),
                });
            }
            Ok(obs)
        });
        match checked {
            Ok(obs) => {
                last_time = Some(obs.timestamp);
                seen.insert((obs.timestamp, obs.sv_id));
                if obs.elev < 0.0 {
                    log.negative_elevation_rows += 1;
                }
                log.observations.push(obs);
            }
            Err(_) if options.lenient => log.skipped_rows += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(log)
}

fn parse_row(raw: &[u8], line: usize) -> Result<SatObservation> {
    let text = std::str::from_utf8(raw).map_err(|_| Error::MalformedRow {
        line,
        reason: "invalid UTF-8".into(),
    })?;
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != 7 {
        return Err(Error::MalformedRow {
            line,
            reason: format!("expected 7 fields, found {}", fields.len()),
        });
    }
    let malformed = |name: &str, value: &str| Error::MalformedRow {
        line,
        reason: format!("cannot parse {name} from `{value}`"),
    };

    let timestamp = NaiveDateTime::parse_from_str(fields[0], TIMESTAMP_FORMAT)
        .map_err(|_| malformed("timestamp", fields[0]))?;
    let sv_id: SvId = fields[1].parse().map_err(|_| malformed("svId", fields[1]))?;
    let elev: f64 = fields[2].parse().map_err(|_| malformed("elev", fields[2]))?;
    let azim: f64 = fields[3].parse().map_err(|_| malformed("azim", fields[3]))?;
    let cno: f64 = fields[4].parse().map_err(|_| malformed("cno", fields[4]))?;
    let quality_ind: u32 = fields[5].parse().map_err(|_| malformed("qualityInd", fields[5]))?;
    let sv_used = match fields[6] {
        "1" => true,
        "0" => false,
        other => return Err(malformed("svUsed", other)),
    };

    let obs = SatObservation {
        timestamp,
        sv_id,
        elev,
        azim,
        cno,
        quality_ind,
        sv_used,
    };
    obs.check_ranges().map_err(|(field, value)| Error::RangeViolation {
        line,
        field,
        value: value.to_string(),
    })?;
    Ok(obs)
}

pub(crate) fn format_timestamp(t: &NaiveDateTime) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

fn format_real(value: f64) -> String {
    let s = format!("{value:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn format_azimuth(azim: f64) -> String {
    let s = format_real(azim);
    if s == "360.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Writes observations in the ingest format. Reals carry three decimals.
pub fn write_csv<W: Write>(observations: &[SatObservation], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for o in observations {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_timestamp(&o.timestamp),
            o.sv_id,
            format_real(o.elev),
            format_azimuth(o.azim),
            format_real(o.cno),
            o.quality_ind,
            u8::from(o.sv_used)
        )?;
    }
    Ok(())
}

pub fn to_csv_string(observations: &[SatObservation]) -> String {
    let mut buf = Vec::new();
    write_csv(observations, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

/// Observations from one antenna orientation, sorted by time.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationDataset {
    orientation: Orientation,
    observations: Vec<SatObservation>,
    source: String,
}

impl OrientationDataset {
    pub fn new(
        orientation: Orientation,
        observations: Vec<SatObservation>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut seen = HashSet::with_capacity(observations.len());
        for (idx, obs) in observations.iter().enumerate() {
            // Row numbers as they would appear in the written CSV.
            let line = idx + 2;
            if let Err((field, value)) = obs.check_ranges() {
                return Err(Error::RangeViolation {
                    line,
                    field,
                    value: value.to_string(),
                });
            }
            if idx > 0 && obs.timestamp < observations[idx - 1].timestamp {
                return Err(Error::UnsortedTimestamps { line });
            }
            if !seen.insert((obs.timestamp, obs.sv_id)) {
                return Err(Error::DuplicateObservation {
                    line,
                    sv_id: obs.sv_id,
                    timestamp: format_timestamp(&obs.timestamp),
                });
            }
        }
        Ok(Self {
            orientation,
            observations,
            source: source.into(),
        })
    }

    /// Reads and wraps a log file in one step.
    pub fn read(path: impl AsRef<Path>, orientation: Orientation, options: IngestOptions) -> Result<Self> {
        let path = path.as_ref();
        let log = parse_navsat_csv_with(path, options)?;
        Self::new(orientation, log.observations, path.display().to_string())
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn observations(&self) -> &[SatObservation] {
        &self.observations
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn to_csv_string(&self) -> String {
        to_csv_string(&self.observations)
    }
}

/// Up to six datasets: {real sky, spoofed} x {left, flat, right}.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioBundle {
    pub label: String,
    datasets: BTreeMap<ScenarioKey, OrientationDataset>,
}

impl ScenarioBundle {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            datasets: BTreeMap::new(),
        }
    }

    /// Places a dataset in its slot, returning whatever was there before.
    /// The dataset's own orientation is overwritten to match the key.
    pub fn insert(&mut self, condition: Condition, mut dataset: OrientationDataset) -> Option<OrientationDataset> {
        let key = ScenarioKey::new(condition, dataset.orientation);
        dataset.orientation = key.orientation;
        self.datasets.insert(key, dataset)
    }

    pub fn get(&self, condition: Condition, orientation: Orientation) -> Option<&OrientationDataset> {
        self.datasets.get(&ScenarioKey::new(condition, orientation))
    }

    pub fn require(&self, condition: Condition, orientation: Orientation) -> Result<&OrientationDataset> {
        self.get(condition, orientation)
            .ok_or(Error::MissingOrientation {
                condition,
                orientation,
            })
    }

    /// All three orientations of one condition, or the first one missing.
    pub fn triple(&self, condition: Condition) -> Result<PerOrientation<&OrientationDataset>> {
        Ok(PerOrientation::new(
            self.require(condition, Orientation::LeftBank)?,
            self.require(condition, Orientation::Flat)?,
            self.require(condition, Orientation::RightBank)?,
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScenarioKey, &OrientationDataset)> {
        self.datasets.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datasets.is_empty()
    }
}

/// Loads every log named by a manifest, strict mode.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<ScenarioBundle> {
    load_manifest_with(path, IngestOptions::default())
}

pub fn load_manifest_with(path: impl AsRef<Path>, options: IngestOptions) -> Result<ScenarioBundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let mut bundle = parse_manifest(&text, base, options)?;
    bundle.label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(bundle)
}

/// Resolves manifest entries, reading relative paths against `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path, options: IngestOptions) -> Result<ScenarioBundle> {
    let entries = manifest_entries(text)?;
    let mut bundle = ScenarioBundle::new("");
    for (key, rel) in entries {
        let full = if rel.is_absolute() { rel } else { base_dir.join(rel) };
        let dataset = OrientationDataset::read(&full, key.orientation, options).map_err(|e| Error::Scenario {
            key,
            source: Box::new(e),
        })?;
        bundle.insert(key.condition, dataset);
    }
    Ok(bundle)
}

/// Validates the manifest's keys without touching the referenced files.
pub fn manifest_entries(text: &str) -> Result<Vec<(ScenarioKey, PathBuf)>> {
    let mut out: Vec<(ScenarioKey, PathBuf)> = Vec::new();
    for entry in kv::parse(text)? {
        let key: ScenarioKey = entry.key.parse().map_err(|()| Error::UnknownScenarioKey {
            line: entry.line,
            key: entry.key.to_string(),
        })?;
        if out.iter().any(|(k, _)| *k == key) {
            return Err(Error::DuplicateScenarioKey {
                line: entry.line,
                key: entry.key.to_string(),
            });
        }
        if entry.value.is_empty() {
            return Err(Error::MalformedKeyValue {
                line: entry.line,
                reason: format!("no path given for `{}`", entry.key),
            });
        }
        out.push((key, PathBuf::from(entry.value)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ParsedLog> {
        parse_navsat_bytes(text.as_bytes(), IngestOptions::default())
    }

    fn with_rows(rows: &[&str]) -> String {
        let mut s = format!("{CSV_HEADER}\n");
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    #[test]
    fn maps_fields_directly() {
        let log = parse(&with_rows(&["2025-01-15T12:00:00,5,45.0,270.0,42.0,4,1"])).unwrap();
        assert_eq!(log.observations.len(), 1);
        let o = &log.observations[0];
        assert_eq!(format_timestamp(&o.timestamp), "2025-01-15T12:00:00");
        assert_eq!(o.sv_id, 5);
        assert_eq!(o.elev, 45.0);
        assert_eq!(o.azim, 270.0);
        assert_eq!(o.cno, 42.0);
        assert_eq!(o.quality_ind, 4);
        assert!(o.sv_used);
    }

    #[test]
    fn header_only_is_empty_payload_then_empty_dataset() {
        let log = parse(&with_rows(&[])).unwrap();
        assert!(log.observations.is_empty());
        let err = OrientationDataset::new(Orientation::Flat, log.observations, "x").unwrap_err();
        assert!(matches!(err, Error::EmptyDataset));
    }

    #[test]
    fn azimuth_360_is_a_range_violation_on_line_2() {
        let err = parse(&with_rows(&["2025-01-15T12:00:00,5,45.0,360.0,42.0,4,1"])).unwrap_err();
        match err {
            Error::RangeViolation { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "azim");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_range_checks() {
        let cases = [
            ("2025-01-15T12:00:00,0,45.0,10.0,42.0,4,1", "svId"),
            ("2025-01-15T12:00:00,5,90.5,10.0,42.0,4,1", "elev"),
            ("2025-01-15T12:00:00,5,45.0,-0.1,42.0,4,1", "azim"),
            ("2025-01-15T12:00:00,5,45.0,10.0,99.5,4,1", "cno"),
            ("2025-01-15T12:00:00,5,45.0,10.0,NaN,4,1", "cno"),
        ];
        for (row, expected) in cases {
            match parse(&with_rows(&[row])).unwrap_err() {
                Error::RangeViolation { field, .. } => assert_eq!(field, expected, "{row}"),
                other => panic!("{row}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        let err = parse("time,svId,elev,azim,cno,qualityInd,svUsed\n").unwrap_err();
        assert!(matches!(err, Error::MissingHeader { .. }));
        assert!(matches!(parse("").unwrap_err(), Error::MissingHeader { .. }));
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = with_rows(&[
            "2025-01-15T12:00:00,5,45.0,270.0,42.0,4,1",
            "2025-01-15T12:00:05,5,45.0,270.0,42.0,4",
        ]);
        assert!(matches!(parse(&text).unwrap_err(), Error::MalformedRow { line: 3, .. }));

        let text = with_rows(&["2025-01-15T12:00:00,5,45.0,270.0,42.0,4,2"]);
        assert!(matches!(parse(&text).unwrap_err(), Error::MalformedRow { line: 2, .. }));

        let text = with_rows(&["2025/01/15 12:00:00,5,45.0,270.0,42.0,4,1"]);
        assert!(matches!(parse(&text).unwrap_err(), Error::MalformedRow { line: 2, .. }));
    }

    #[test]
    fn accepts_crlf_and_fractional_seconds() {
        let text = format!("{CSV_HEADER}\r\n2025-01-15T12:00:00.500,5,-2.0,270.0,42.0,4,0\r\n");
        let log = parse(&text).unwrap();
        assert_eq!(log.observations.len(), 1);
        assert!(!log.observations[0].sv_used);
        assert_eq!(log.negative_elevation_rows, 1);
    }

    #[test]
    fn duplicates_fail_strict_and_keep_first_lenient() {
        let text = with_rows(&[
            "2025-01-15T12:00:00,5,45.0,270.0,42.0,4,1",
            "2025-01-15T12:00:00,5,45.0,270.0,30.0,4,1",
        ]);
        assert!(matches!(
            parse(&text).unwrap_err(),
            Error::DuplicateObservation { line: 3, sv_id: 5, .. }
        ));
        let log = parse_navsat_bytes(text.as_bytes(), IngestOptions::lenient()).unwrap();
        assert_eq!(log.observations.len(), 1);
        assert_eq!(log.observations[0].cno, 42.0);
        assert_eq!(log.skipped_rows, 1);
    }

    #[test]
    fn lenient_mode_counts_skipped_rows() {
        let text = with_rows(&[
            "2025-01-15T12:00:00,5,45.0,270.0,42.0,4,1",
            "garbage",
            "2025-01-15T12:00:00,6,45.0,400.0,42.0,4,1",
            "2025-01-15T12:00:05,6,45.0,100.0,41.0,4,1",
        ]);
        let log = parse_navsat_bytes(text.as_bytes(), IngestOptions::lenient()).unwrap();
        assert_eq!(log.observations.len(), 2);
        assert_eq!(log.skipped_rows, 2);
    }

    #[test]
    fn backwards_time_is_rejected() {
        let text = with_rows(&[
            "2025-01-15T12:00:05,5,45.0,270.0,42.0,4,1",
            "2025-01-15T12:00:00,6,45.0,270.0,42.0,4,1",
        ]);
        assert!(matches!(parse(&text).unwrap_err(), Error::UnsortedTimestamps { line: 3 }));
    }

    #[test]
    fn scenario_keys_round_trip_through_text() {
        for key in ScenarioKey::all() {
            assert_eq!(key.to_string().parse::<ScenarioKey>(), Ok(key));
        }
        assert!("ns_upsidedown".parse::<ScenarioKey>().is_err());
        assert_eq!(ScenarioKey::all().count(), 6);
    }

    #[test]
    fn manifest_key_errors() {
        let err = manifest_entries("ns_upsidedown = a.csv\n").unwrap_err();
        assert!(matches!(err, Error::UnknownScenarioKey { line: 1, .. }));

        let err = manifest_entries("ns_flat = a.csv\n# again\nns_flat = b.csv\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateScenarioKey { line: 3, .. }));

        let entries = manifest_entries("ns_left = l.csv\nns_flat = f.csv\nns_right = r.csv\n").unwrap();
        assert_eq!(entries.len(), 3);
        assert!(entries.iter().all(|(k, _)| k.condition == Condition::RealSky));
    }

    #[test]
    fn azimuth_close_to_360_wraps_when_written() {
        let obs = SatObservation {
            timestamp: NaiveDateTime::parse_from_str("2025-01-15T12:00:00", TIMESTAMP_FORMAT).unwrap(),
            sv_id: 3,
            elev: -0.0001,
            azim: 359.9999,
            cno: 40.0,
            quality_ind: 0,
            sv_used: false,
        };
        let text = to_csv_string(&[obs]);
        assert!(text.ends_with("2025-01-15T12:00:00,3,0.000,0.000,40.000,0,0\n"), "{text}");
        parse(&text).unwrap();
    }
}
