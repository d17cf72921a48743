use std::fs;

use proptest::prelude::*;

use skyvane::aggregate::{avg_cno, median, spread, SampleFilter};
use skyvane::geometry::{angular_separation, sph2cart, AntennaSetup, BoresightModel};
use skyvane::ingest::{load_manifest, Condition, Orientation, PerOrientation};
use skyvane::simulate::{
    generate_sky, simulate_bundle, write_bundle, GainModel, SimulationConfig, SkyModel, SkySatellite, SpooferModel,
    MANIFEST_FILE,
};
use skyvane::Error;

fn start() -> chrono::NaiveDateTime {
    chrono::NaiveDateTime::parse_from_str("2025-01-15T12:00:00", "%Y-%m-%dT%H:%M:%S").unwrap()
}

fn means(bundle: &skyvane::ingest::ScenarioBundle, condition: Condition) -> PerOrientation<skyvane::aggregate::CnoMeans> {
    bundle
        .triple(condition)
        .unwrap()
        .map(|d| avg_cno(d.observations(), SampleFilter::All).unwrap())
}

#[test]
fn linear_gain_spoofed_example() {
    let sky = SkyModel::new(
        vec![SkySatellite { sv_id: 7, azim_deg: 120.0, elev_deg: 30.0 }],
        4,
        5,
        start(),
    )
    .unwrap();
    let gain = GainModel {
        base_cno_dbhz: 40.0,
        max_rolloff_db: 12.0,
        rolloff_exponent: 1.0,
        beamwidth_deg: 90.0,
        noise_sigma_db: 0.0,
        rng_seed: 1,
    };
    let spoofer = SpooferModel { source: None, spoof_noise_sigma_db: 0.0 };
    let antenna = AntennaSetup::new(0.0, 45.0, BoresightModel::RollTilt);
    let bundle = simulate_bundle(&sky, &gain, &spoofer, &antenna).unwrap();
    let m = means(&bundle, Condition::Spoofed);
    assert!((m.left[&7] - 34.0).abs() < 1e-9);
    assert!((m.flat[&7] - 40.0).abs() < 1e-9);
    assert!((m.right[&7] - 34.0).abs() < 1e-9);
}

#[test]
fn sky_generation_is_seeded_and_bounded() {
    let a = generate_sky(9, 13).unwrap();
    assert_eq!(a, generate_sky(9, 13).unwrap());
    assert_ne!(a, generate_sky(10, 13).unwrap());
    let ids: Vec<u16> = a.satellites().iter().map(|s| s.sv_id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    for s in a.satellites() {
        assert!((0.0..360.0).contains(&s.azim_deg));
        assert!((10.0..=85.0).contains(&s.elev_deg));
    }
    assert!(matches!(generate_sky(1, 39), Err(Error::CountTooLarge { requested: 39, available: 38 })));
    assert!(generate_sky(1, 0).is_err());
}

#[test]
fn spoofed_spreads_collapse_near_the_emitter_value() {
    let cfg = SimulationConfig::default();
    let bundle = cfg.simulate().unwrap();
    let set = cfg.antenna.boresights().unwrap();
    let emitter = set.flat;
    let clean = PerOrientation::new(
        cfg.gain.cno(angular_separation(&set.left, &emitter)),
        cfg.gain.cno(angular_separation(&set.flat, &emitter)),
        cfg.gain.cno(angular_separation(&set.right, &emitter)),
    );
    let clean_spread = spread(&clean);
    // each mean wanders by at most three standard errors
    let bound = 2.0 * 3.0 * cfg.spoofer.spoof_noise_sigma_db / (cfg.epoch_count as f64).sqrt();

    let spoofed = means(&bundle, Condition::Spoofed);
    let real = means(&bundle, Condition::RealSky);
    let mut real_spreads = Vec::new();
    for sv in spoofed.flat.keys() {
        let t = PerOrientation::new(spoofed.left[sv], spoofed.flat[sv], spoofed.right[sv]);
        assert!((spread(&t) - clean_spread).abs() <= bound, "svId {sv}");
        real_spreads.push(spread(&PerOrientation::new(real.left[sv], real.flat[sv], real.right[sv])));
    }
    let max = real_spreads.iter().cloned().fold(f64::MIN, f64::max);
    let min = real_spreads.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max - min > 2.0 * bound, "real-sky spreads should vary by satellite");
    assert!(median(&real_spreads).unwrap() > clean_spread);
}

#[test]
fn bundle_round_trips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SimulationConfig::from_seed(3);
    let bundle = cfg.simulate().unwrap();
    let manifest = write_bundle(&bundle, dir.path()).unwrap();
    assert_eq!(manifest, dir.path().join(MANIFEST_FILE));
    let loaded = load_manifest(&manifest).unwrap();
    assert_eq!(loaded.len(), 6);
    for (key, dataset) in bundle.iter() {
        let back = loaded.get(key.condition, key.orientation).unwrap();
        assert_eq!(back.to_csv_string(), dataset.to_csv_string());
    }
    assert!(!dir.path().join(format!(".{MANIFEST_FILE}.tmp")).exists());
}

#[test]
fn unwritable_directory_leaves_no_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let target = blocker.join("out");
    let bundle = SimulationConfig::default().simulate().unwrap();
    assert!(matches!(write_bundle(&bundle, &target), Err(Error::Io { .. })));
    assert!(!target.join(MANIFEST_FILE).exists());
}

#[test]
fn config_parsing() {
    let cfg = SimulationConfig::parse("# demo\nseed = 11\nnoise_sigma_db = 0\nmodel = sweep\nbank_deg = 30\n").unwrap();
    assert_eq!(cfg.sky_seed, 11);
    assert_eq!(cfg.gain.rng_seed, 11);
    assert_eq!(cfg.gain.noise_sigma_db, 0.0);
    assert_eq!(cfg.antenna.model, BoresightModel::AzimuthSweep);
    assert_eq!(cfg.antenna.bank_deg, 30.0);
    assert_eq!(cfg.simulate().unwrap().len(), 6);

    for (text, key) in [
        ("seed = abc\n", "seed"),
        ("bogus = 1\n", "bogus"),
        ("spoofer_azim_deg = 10\n", "spoofer_elev_deg"),
    ] {
        match SimulationConfig::parse(text) {
            Err(Error::Config { key: k, .. }) => assert_eq!(k, key),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
    let bad_bank = SimulationConfig::parse("bank_deg = 95\n").unwrap();
    assert!(bad_bank.simulate().is_err());
}

#[test]
fn noise_seed_is_independent_of_sky_seed() {
    let a = SimulationConfig::parse("seed = 5\n").unwrap().simulate().unwrap();
    let b = SimulationConfig::parse("seed = 5\nnoise_seed = 6\n").unwrap().simulate().unwrap();
    let key = |b: &skyvane::ingest::ScenarioBundle| {
        b.get(Condition::RealSky, Orientation::Flat).unwrap().observations().to_vec()
    };
    let (ka, kb) = (key(&a), key(&b));
    assert!(ka.iter().zip(&kb).all(|(x, y)| x.sv_id == y.sv_id && x.azim == y.azim));
    assert!(ka.iter().zip(&kb).any(|(x, y)| x.cno != y.cno));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noiseless_real_sky_follows_separation(seed in 0u64..10_000, heading in 0.0f64..360.0, bank in 10.0f64..80.0) {
        let mut cfg = SimulationConfig::from_seed(seed);
        cfg.gain.noise_sigma_db = 0.0;
        cfg.antenna = AntennaSetup::new(heading, bank, BoresightModel::RollTilt);
        let bundle = cfg.simulate().unwrap();
        let set = cfg.antenna.boresights().unwrap();
        let m = means(&bundle, Condition::RealSky);
        for sat in cfg.sky().unwrap().satellites() {
            let v = sph2cart(sat.azim_deg, sat.elev_deg).unwrap();
            let th = PerOrientation::new(
                angular_separation(&set.left, &v),
                angular_separation(&set.flat, &v),
                angular_separation(&set.right, &v),
            );
            let (l, f, r) = (m.left[&sat.sv_id], m.flat[&sat.sv_id], m.right[&sat.sv_id]);
            if l < f && f < r {
                prop_assert!(th.left > th.flat && th.flat > th.right);
            }
            if th.left > th.flat && th.flat > th.right && th.left < cfg.gain.beamwidth_deg {
                prop_assert!(l < f && f < r, "svId {} theta {:?}", sat.sv_id, th);
            }
        }
    }

    #[test]
    fn spoofed_bank_readings_match_for_symmetric_emitter(seed in 0u64..10_000, heading in 0.0f64..360.0) {
        let mut cfg = SimulationConfig::from_seed(seed);
        cfg.spoofer.spoof_noise_sigma_db = 0.0;
        cfg.antenna.heading_deg = heading;
        let m = means(&cfg.simulate().unwrap(), Condition::Spoofed);
        for sv in m.flat.keys() {
            prop_assert!((m.left[sv] - m.right[sv]).abs() < 1e-9);
            prop_assert!(m.flat[sv] > m.left[sv]);
        }
    }
}
