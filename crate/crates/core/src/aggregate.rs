//! Per-PRN reductions: mean C/N0 per orientation, cross-orientation spread
//! and variance, and the observed left -> flat -> right trend.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Condition, Orientation, PerOrientation, SatObservation, ScenarioBundle, SvId};

/// Mean C/N0 (dB-Hz) by PRN.
pub type CnoMeans = BTreeMap<SvId, f64>;

/// Which rows contribute to the averages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SampleFilter {
    /// Every row, including satellites the receiver did not use in its fix.
    #[default]
    All,
    UsedOnly,
}

impl SampleFilter {
    fn accepts(self, obs: &SatObservation) -> bool {
        match self {
            SampleFilter::All => true,
            SampleFilter::UsedOnly => obs.sv_used,
        }
    }
}

/// Running sum that also remembers the sample range.
#[derive(Debug, Clone, Copy)]
struct Accumulator {
    sum: f64,
    count: usize,
    min: f64,
    max: f64,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            sum: 0.0,
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, v: f64) {
        self.sum += v;
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }

    fn mean(&self) -> f64 {
        // rounding in the sum can land a hair outside the sample range
        (self.sum / self.count as f64).clamp(self.min, self.max)
    }
}

/// Arithmetic mean of C/N0 per PRN.
pub fn avg_cno(observations: &[SatObservation], filter: SampleFilter) -> Result<CnoMeans> {
    let mut acc: BTreeMap<SvId, Accumulator> = BTreeMap::new();
    for obs in observations.iter().filter(|o| filter.accepts(o)) {
        acc.entry(obs.sv_id).or_insert_with(Accumulator::new).push(obs.cno);
    }
    if acc.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(acc.into_iter().map(|(sv, a)| (sv, a.mean())).collect())
}

/// Mean sky position per PRN as `(azim, elev)` in degrees. Azimuths are
/// averaged arithmetically; satellites are static over a collection window.
pub fn mean_positions(observations: &[SatObservation]) -> BTreeMap<SvId, (f64, f64)> {
    let mut acc: BTreeMap<SvId, (f64, f64, usize)> = BTreeMap::new();
    for obs in observations {
        let e = acc.entry(obs.sv_id).or_insert((0.0, 0.0, 0));
        e.0 += obs.azim;
        e.1 += obs.elev;
        e.2 += 1;
    }
    acc.into_iter()
        .map(|(sv, (az, el, n))| (sv, (az / n as f64, el / n as f64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendLabel {
    Increasing,
    Decreasing,
    Irregular,
}

impl TrendLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            TrendLabel::Increasing => "increasing",
            TrendLabel::Decreasing => "decreasing",
            TrendLabel::Irregular => "irregular",
        }
    }
}

impl fmt::Display for TrendLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn is_increasing(left: f64, flat: f64, right: f64) -> bool {
    left < flat && flat < right
}

pub fn is_decreasing(left: f64, flat: f64, right: f64) -> bool {
    left > flat && flat > right
}

/// Strict three-way classification; any tie is irregular.
pub fn classify_trend(left: f64, flat: f64, right: f64) -> TrendLabel {
    classify_trend_with_tolerance(left, flat, right, 0.0)
}

/// Like [`classify_trend`], but steps no larger than `epsilon` dB also count
/// as ties.
pub fn classify_trend_with_tolerance(left: f64, flat: f64, right: f64, epsilon: f64) -> TrendLabel {
    if flat - left > epsilon && right - flat > epsilon {
        TrendLabel::Increasing
    } else if left - flat > epsilon && flat - right > epsilon {
        TrendLabel::Decreasing
    } else {
        TrendLabel::Irregular
    }
}

/// Observed trend of one PRN with its three means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedTrend {
    pub sv_id: SvId,
    pub label: TrendLabel,
    pub triple: PerOrientation<f64>,
}

/// Max minus min of the three means.
pub fn spread(triple: &PerOrientation<f64>) -> f64 {
    let vals = [triple.left, triple.flat, triple.right];
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Population variance of the three means, dB^2.
pub fn variance(triple: &PerOrientation<f64>) -> f64 {
    let vals = [triple.left, triple.flat, triple.right];
    let mean = vals.iter().sum::<f64>() / 3.0;
    vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 3.0
}

/// Median of a sample, averaging the middle pair for even sizes.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 0 { (v[mid - 1] + v[mid]) / 2.0 } else { v[mid] })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrnSummary {
    pub sv_id: SvId,
    /// Mean C/N0 per orientation; `None` where the PRN was not seen.
    pub mean_cno: PerOrientation<Option<f64>>,
    pub sample_count: PerOrientation<usize>,
    pub mean_azim: f64,
    pub mean_elev: f64,
    /// Only set for complete triples.
    pub spread_db: Option<f64>,
    pub variance_db2: Option<f64>,
    pub trend: Option<TrendLabel>,
}

impl PrnSummary {
    /// Means for all three orientations, if the PRN was seen in each.
    pub fn triple(&self) -> Option<PerOrientation<f64>> {
        Some(PerOrientation::new(
            self.mean_cno.left?,
            self.mean_cno.flat?,
            self.mean_cno.right?,
        ))
    }

    pub fn is_complete(&self) -> bool {
        self.triple().is_some()
    }

    pub fn observed_trend(&self) -> Option<ObservedTrend> {
        Some(ObservedTrend {
            sv_id: self.sv_id,
            label: self.trend?,
            triple: self.triple()?,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SummaryOptions {
    pub filter: SampleFilter,
    /// Ties tolerance for the observed trend label, dB. Zero means strict.
    pub tie_epsilon: f64,
}

/// Summarizes every PRN seen in any orientation of `condition`.
///
/// Sky positions come from the real-sky flat dataset when the bundle has
/// it, otherwise from the condition's own datasets (flat, then left, then
/// right).
pub fn summarize(bundle: &ScenarioBundle, condition: Condition, options: SummaryOptions) -> Result<Vec<PrnSummary>> {
    let datasets = bundle.triple(condition)?;

    let means = datasets.map(|d| {
        avg_cno(d.observations(), options.filter).unwrap_or_default()
    });
    let counts = datasets.map(|d| {
        let mut c: BTreeMap<SvId, usize> = BTreeMap::new();
        for o in d.observations().iter().filter(|o| options.filter.accepts(o)) {
            *c.entry(o.sv_id).or_default() += 1;
        }
        c
    });

    let mut position_sources = Vec::new();
    if let Some(baseline) = bundle.get(Condition::RealSky, Orientation::Flat) {
        position_sources.push(mean_positions(baseline.observations()));
    }
    for o in [Orientation::Flat, Orientation::LeftBank, Orientation::RightBank] {
        position_sources.push(mean_positions(datasets[o].observations()));
    }

    let prns: BTreeSet<SvId> = datasets
        .iter()
        .flat_map(|(_, d)| d.observations().iter().map(|o| o.sv_id))
        .collect();

    let summaries = prns
        .into_iter()
        .map(|sv| {
            let mean_cno = means.as_ref().map(|m| m.get(&sv).copied());
            let sample_count = counts.as_ref().map(|c| c.get(&sv).copied().unwrap_or(0));
            let (mean_azim, mean_elev) = position_sources
                .iter()
                .find_map(|p| p.get(&sv).copied())
                .expect("every PRN comes from one of the datasets");
            let mut summary = PrnSummary {
                sv_id: sv,
                mean_cno,
                sample_count,
                mean_azim,
                mean_elev,
                spread_db: None,
                variance_db2: None,
                trend: None,
            };
            if let Some(t) = summary.triple() {
                summary.spread_db = Some(spread(&t));
                summary.variance_db2 = Some(variance(&t));
                summary.trend = Some(classify_trend_with_tolerance(t.left, t.flat, t.right, options.tie_epsilon));
            }
            summary
        })
        .collect();
    Ok(summaries)
}

pub const SUMMARY_CSV_HEADER: &str = "svId,meanLeft,meanFlat,meanRight,spreadDb,varianceDb2,trend";

/// Summary table; missing values are left empty.
pub fn write_summary_csv<W: Write>(summaries: &[PrnSummary], mut out: W) -> std::io::Result<()> {
    fn cell(v: Option<f64>) -> String {
        v.map(|x| format!("{x:.3}")).unwrap_or_default()
    }
    writeln!(out, "{SUMMARY_CSV_HEADER}")?;
    for s in summaries {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.sv_id,
            cell(s.mean_cno.left),
            cell(s.mean_cno.flat),
            cell(s.mean_cno.right),
            cell(s.spread_db),
            cell(s.variance_db2),
            s.trend.map(TrendLabel::as_str).unwrap_or("")
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::OrientationDataset;

    fn obs(t: i64, sv: SvId, cno: f64, used: bool) -> SatObservation {
        SatObservation {
            timestamp: chrono::DateTime::from_timestamp(1_700_000_000 + t, 0).unwrap().naive_utc(),
            sv_id: sv,
            elev: 30.0,
            azim: 100.0,
            cno,
            quality_ind: 4,
            sv_used: used,
        }
    }

    #[test]
    fn mean_of_three_samples() {
        let rows = [obs(0, 7, 40.0, true), obs(5, 7, 42.0, true), obs(10, 7, 44.0, true)];
        assert_eq!(avg_cno(&rows, SampleFilter::All).unwrap()[&7], 42.0);
    }

    #[test]
    fn single_sample_is_identity() {
        assert_eq!(avg_cno(&[obs(0, 1, 37.5, true)], SampleFilter::All).unwrap()[&1], 37.5);
    }

    #[test]
    fn grouping_is_independent_per_prn() {
        let rows = [obs(0, 3, 10.0, true), obs(0, 9, 30.0, true), obs(5, 3, 20.0, true)];
        let means = avg_cno(&rows, SampleFilter::All).unwrap();
        assert_eq!(means, CnoMeans::from([(3, 15.0), (9, 30.0)]));
    }

    #[test]
    fn used_only_drops_unused_rows() {
        let rows = [obs(0, 3, 10.0, true), obs(5, 3, 20.0, false), obs(5, 4, 20.0, false)];
        let means = avg_cno(&rows, SampleFilter::UsedOnly).unwrap();
        assert_eq!(means, CnoMeans::from([(3, 10.0)]));
        assert!(matches!(
            avg_cno(&rows[1..], SampleFilter::UsedOnly),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(avg_cno(&[], SampleFilter::All), Err(Error::EmptyDataset)));
    }

    #[test]
    fn strict_trend_labels() {
        assert_eq!(classify_trend(30.0, 35.0, 40.0), TrendLabel::Increasing);
        assert_eq!(classify_trend(35.0, 35.0, 40.0), TrendLabel::Irregular);
        assert_eq!(classify_trend(41.2, 40.0, 38.7), TrendLabel::Decreasing);
        assert_eq!(classify_trend(30.0, 40.0, 35.0), TrendLabel::Irregular);
        assert_eq!(classify_trend_with_tolerance(30.0, 30.4, 31.0, 0.5), TrendLabel::Irregular);
    }

    #[test]
    fn spread_and_population_variance() {
        let t = PerOrientation::new(30.0, 35.0, 40.0);
        assert_eq!(spread(&t), 10.0);
        assert!((variance(&t) - 50.0 / 3.0).abs() < 1e-12);
        assert_eq!(spread(&PerOrientation::new(33.0, 33.0, 33.0)), 0.0);
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    fn dataset(o: Orientation, rows: Vec<SatObservation>) -> OrientationDataset {
        OrientationDataset::new(o, rows, "test").unwrap()
    }

    #[test]
    fn summarize_flags_incomplete_prns() {
        let mut bundle = ScenarioBundle::new("t");
        bundle.insert(
            Condition::RealSky,
            dataset(Orientation::LeftBank, vec![obs(0, 1, 30.0, true)]),
        );
        bundle.insert(
            Condition::RealSky,
            dataset(Orientation::Flat, vec![obs(0, 1, 35.0, true), obs(0, 2, 44.0, true)]),
        );
        bundle.insert(
            Condition::RealSky,
            dataset(Orientation::RightBank, vec![obs(0, 1, 40.0, true)]),
        );
        let s = summarize(&bundle, Condition::RealSky, SummaryOptions::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].spread_db, Some(10.0));
        assert!((s[0].variance_db2.unwrap() - 16.666_666_666_666_668).abs() < 1e-9);
        assert_eq!(s[0].trend, Some(TrendLabel::Increasing));
        assert!(!s[1].is_complete());
        assert_eq!(s[1].spread_db, None);
        assert_eq!(s[1].sample_count, PerOrientation::new(0, 1, 0));
    }

    #[test]
    fn summarize_names_the_missing_orientation() {
        let mut bundle = ScenarioBundle::new("t");
        bundle.insert(Condition::Spoofed, dataset(Orientation::LeftBank, vec![obs(0, 1, 30.0, true)]));
        bundle.insert(Condition::Spoofed, dataset(Orientation::Flat, vec![obs(0, 1, 30.0, true)]));
        let err = summarize(&bundle, Condition::Spoofed, SummaryOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::MissingOrientation {
                orientation: Orientation::RightBank,
                ..
            }
        ));
        assert!(err.to_string().contains("right"));
    }

    #[test]
    fn summary_csv_leaves_gaps_for_incomplete() {
        let s = PrnSummary {
            sv_id: 4,
            mean_cno: PerOrientation::new(None, Some(40.0), None),
            sample_count: PerOrientation::new(0, 2, 0),
            mean_azim: 0.0,
            mean_elev: 0.0,
            spread_db: None,
            variance_db2: None,
            trend: None,
        };
        let mut buf = Vec::new();
        write_summary_csv(&[s], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{SUMMARY_CSV_HEADER}\n4,,40.000,,,,\n")
        );
    }
}
