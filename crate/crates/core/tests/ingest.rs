use std::fs;

use chrono::NaiveDateTime;
use proptest::prelude::*;

use skyvane::ingest::{
    load_manifest, parse_navsat_bytes, to_csv_string, Condition, IngestOptions, Orientation, OrientationDataset,
    SatObservation, ScenarioKey, CSV_HEADER,
};
use skyvane::Error;

fn observation() -> impl Strategy<Value = (i64, u16, f64, f64, f64, u32, bool)> {
    (
        0i64..5,
        1u16..200,
        -90.0f64..=90.0,
        0.0f64..360.0,
        0.0f64..=99.0,
        0u32..10,
        any::<bool>(),
    )
}

fn build(rows: Vec<(i64, u16, f64, f64, f64, u32, bool)>) -> Vec<SatObservation> {
    let mut t = 1_736_942_400;
    let mut out: Vec<SatObservation> = Vec::new();
    for (step, sv, elev, azim, cno, q, used) in rows {
        t += step;
        let timestamp = chrono::DateTime::from_timestamp(t, 0).unwrap().naive_utc();
        if out.iter().any(|o| o.timestamp == timestamp && o.sv_id == sv) {
            continue;
        }
        out.push(SatObservation {
            timestamp,
            sv_id: sv,
            elev,
            azim,
            cno,
            quality_ind: q,
            sv_used: used,
        });
    }
    out
}

proptest! {
    #[test]
    fn write_then_parse_preserves_fields(rows in prop::collection::vec(observation(), 1..60)) {
        let obs = build(rows);
        let text = to_csv_string(&obs);
        let parsed = parse_navsat_bytes(text.as_bytes(), IngestOptions::default()).unwrap();
        prop_assert_eq!(parsed.observations.len(), obs.len());
        for (a, b) in obs.iter().zip(&parsed.observations) {
            prop_assert_eq!(a.timestamp, b.timestamp);
            prop_assert_eq!(a.sv_id, b.sv_id);
            prop_assert_eq!(a.quality_ind, b.quality_ind);
            prop_assert_eq!(a.sv_used, b.sv_used);
            prop_assert!((a.elev - b.elev).abs() <= 5e-4 + 1e-9);
            prop_assert!((a.cno - b.cno).abs() <= 5e-4 + 1e-9);
            // azimuth may wrap from 359.9995.. to 0.000
            let d = (a.azim - b.azim).abs();
            prop_assert!(d <= 5e-4 + 1e-9 || (360.0 - d) <= 5e-4 + 1e-9);
        }
        // decimal text is stable once written
        prop_assert_eq!(to_csv_string(&parsed.observations), text);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..400), lenient in any::<bool>()) {
        let _ = parse_navsat_bytes(&bytes, IngestOptions { lenient });
    }

    #[test]
    fn arbitrary_rows_after_header_never_panic(body in "[0-9T:,.\\-\\n eNa]{0,300}") {
        let text = format!("{CSV_HEADER}\n{body}");
        let _ = parse_navsat_bytes(text.as_bytes(), IngestOptions::default());
    }
}

#[test]
fn output_order_equals_input_order() {
    let text = format!(
        "{CSV_HEADER}\n2025-01-15T12:00:00,9,10.0,10.0,30.0,1,1\n2025-01-15T12:00:00,2,10.0,10.0,31.0,1,1\n\
         2025-01-15T12:00:00,5,10.0,10.0,32.0,1,1\n"
    );
    let log = parse_navsat_bytes(text.as_bytes(), IngestOptions::default()).unwrap();
    let ids: Vec<u16> = log.observations.iter().map(|o| o.sv_id).collect();
    assert_eq!(ids, [9, 2, 5]);
}

fn write_log(dir: &std::path::Path, name: &str, cno: f64) {
    let body = format!("{CSV_HEADER}\n2025-01-15T12:00:00,5,45.0,270.0,{cno},4,1\n2025-01-15T12:00:05,5,45.0,270.0,{cno},4,1\n");
    fs::write(dir.join(name), body).unwrap();
}

#[test]
fn manifest_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    write_log(dir.path(), "l.csv", 30.0);
    write_log(dir.path(), "f.csv", 35.0);
    write_log(dir.path(), "r.csv", 40.0);
    let manifest = dir.path().join("run.txt");
    fs::write(&manifest, "# real sky only\nns_left = l.csv\nns_flat = f.csv\nns_right = r.csv\n").unwrap();

    let bundle = load_manifest(&manifest).unwrap();
    assert_eq!(bundle.len(), 3);
    assert_eq!(bundle.label, "run");
    assert!(bundle.iter().all(|(k, _)| k.condition == Condition::RealSky));
    assert_eq!(
        bundle.get(Condition::RealSky, Orientation::RightBank).unwrap().observations()[0].cno,
        40.0
    );
    assert!(bundle.triple(Condition::Spoofed).is_err());
}

#[test]
fn manifest_parse_errors_name_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    write_log(dir.path(), "ok.csv", 30.0);
    fs::write(dir.path().join("bad.csv"), format!("{CSV_HEADER}\n2025-01-15T12:00:00,5,45.0,360.0,30,4,1\n")).unwrap();
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, "s_left = ok.csv\ns_flat = bad.csv\n").unwrap();

    match load_manifest(&manifest).unwrap_err() {
        Error::Scenario { key, source } => {
            assert_eq!(key, ScenarioKey::new(Condition::Spoofed, Orientation::Flat));
            assert!(matches!(*source, Error::RangeViolation { line: 2, field: "azim", .. }));
        }
        other => panic!("unexpected {other:?}"),
    }

    fs::write(&manifest, "s_right = missing.csv\n").unwrap();
    assert!(matches!(
        load_manifest(&manifest).unwrap_err(),
        Error::Scenario { source, .. } if matches!(*source, Error::Io { .. })
    ));

    fs::write(dir.path().join("empty.csv"), format!("{CSV_HEADER}\n")).unwrap();
    fs::write(&manifest, "ns_flat = empty.csv\n").unwrap();
    assert!(matches!(
        load_manifest(&manifest).unwrap_err(),
        Error::Scenario { source, .. } if matches!(*source, Error::EmptyDataset)
    ));
}

#[test]
fn lenient_manifest_load_skips_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("f.csv"),
        format!("{CSV_HEADER}\n2025-01-15T12:00:00,5,45.0,270.0,30,4,1\nnot,a,row\n"),
    )
    .unwrap();
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, "ns_flat = f.csv\n").unwrap();
    assert!(load_manifest(&manifest).is_err());
    let bundle = skyvane::ingest::load_manifest_with(&manifest, IngestOptions::lenient()).unwrap();
    assert_eq!(bundle.get(Condition::RealSky, Orientation::Flat).unwrap().observations().len(), 1);
}

#[test]
fn dataset_constructor_enforces_invariants() {
    let t = NaiveDateTime::parse_from_str("2025-01-15T12:00:00", "%Y-%m-%dT%H:%M:%S").unwrap();
    let o = SatObservation {
        timestamp: t,
        sv_id: 1,
        elev: 10.0,
        azim: 10.0,
        cno: 30.0,
        quality_ind: 0,
        sv_used: true,
    };
    let mut later = o.clone();
    later.timestamp = t + chrono::TimeDelta::seconds(5);

    assert!(OrientationDataset::new(Orientation::Flat, vec![o.clone(), later.clone()], "x").is_ok());
    assert!(matches!(
        OrientationDataset::new(Orientation::Flat, vec![later.clone(), o.clone()], "x"),
        Err(Error::UnsortedTimestamps { line: 3 })
    ));
    assert!(matches!(
        OrientationDataset::new(Orientation::Flat, vec![o.clone(), o.clone()], "x"),
        Err(Error::DuplicateObservation { .. })
    ));
    let mut bad = o;
    bad.cno = 120.0;
    assert!(matches!(
        OrientationDataset::new(Orientation::Flat, vec![bad], "x"),
        Err(Error::RangeViolation { field: "cno", .. })
    ));
}
