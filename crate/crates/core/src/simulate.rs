//! Synthetic six-log scenarios with known ground truth.
//!
//! Real-sky logs place each satellite at its own sky direction and attenuate
//! it by its angular distance from the current antenna boresight. Spoofed
//! logs route every PRN through one emitter direction, so all satellites
//! see the same attenuation pattern.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{NaiveDateTime, TimeDelta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::{angular_separation, sph2cart, AntennaSetup, BoresightModel, UnitVector3};
use crate::ingest::{
    write_csv, Condition, Orientation, OrientationDataset, SatObservation, ScenarioBundle, SvId, MAX_CNO_DBHZ,
};
use crate::kv;

pub const DEFAULT_SATELLITE_COUNT: usize = 13;
/// One sample at t = 0 and then every 5 s through 60 s.
pub const DEFAULT_EPOCH_COUNT: usize = 13;
pub const DEFAULT_EPOCH_INTERVAL_S: u32 = 5;
pub const DEFAULT_START_TIME: &str = "2025-01-15T12:00:00";
pub const SIMULATED_QUALITY_IND: u32 = 4;
pub const MANIFEST_FILE: &str = "manifest.txt";

/// GPS PRNs 1-32 plus SBAS 133-138.
fn prn_pool() -> Vec<SvId> {
    (1..=32).chain(133..=138).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkySatellite {
    pub sv_id: SvId,
    pub azim_deg: f64,
    pub elev_deg: f64,
}

/// A static constellation observed over a short window.
#[derive(Debug, Clone, PartialEq)]
pub struct SkyModel {
    satellites: Vec<SkySatellite>,
    pub epoch_count: usize,
    pub epoch_interval_s: u32,
    pub start: NaiveDateTime,
}

impl SkyModel {
    pub fn new(
        satellites: Vec<SkySatellite>,
        epoch_count: usize,
        epoch_interval_s: u32,
        start: NaiveDateTime,
    ) -> Result<Self> {
        if satellites.is_empty() {
            return Err(Error::InvalidModel("sky has no satellites".into()));
        }
        if epoch_count == 0 || epoch_interval_s == 0 {
            return Err(Error::InvalidModel("need at least one epoch and a positive interval".into()));
        }
        for (i, s) in satellites.iter().enumerate() {
            if s.sv_id == 0 || satellites[..i].iter().any(|o| o.sv_id == s.sv_id) {
                return Err(Error::InvalidModel(format!("svId {} is zero or repeated", s.sv_id)));
            }
            if !(0.0..360.0).contains(&s.azim_deg) || !(0.0..=90.0).contains(&s.elev_deg) {
                return Err(Error::InvalidModel(format!(
                    "svId {} placed outside the sky ({}, {})",
                    s.sv_id, s.azim_deg, s.elev_deg
                )));
            }
        }
        Ok(Self {
            satellites,
            epoch_count,
            epoch_interval_s,
            start,
        })
    }

    pub fn satellites(&self) -> &[SkySatellite] {
        &self.satellites
    }

    fn timestamps(&self) -> impl Iterator<Item = NaiveDateTime> + '_ {
        (0..self.epoch_count)
            .map(move |i| self.start + TimeDelta::seconds(i as i64 * i64::from(self.epoch_interval_s)))
    }
}

fn default_start() -> NaiveDateTime {
    NaiveDateTime::parse_from_str(DEFAULT_START_TIME, "%Y-%m-%dT%H:%M:%S").expect("valid constant")
}

fn round_millis(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Random constellation: azimuth uniform on [0, 360), elevation uniform on
/// [10, 85], distinct PRNs. Positions are rounded to the CSV precision.
pub fn generate_sky(seed: u64, count: usize) -> Result<SkyModel> {
    let pool = prn_pool();
    if count > pool.len() {
        return Err(Error::CountTooLarge {
            requested: count,
            available: pool.len(),
        });
    }
    if count == 0 {
        return Err(Error::InvalidModel("sky has no satellites".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<SvId> = rand::seq::index::sample(&mut rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    ids.sort_unstable();
    let satellites = ids
        .into_iter()
        .map(|sv_id| {
            let azim_deg = round_millis(rng.random_range(0.0..360.0)).rem_euclid(360.0);
            let elev_deg = round_millis(rng.random_range(10.0..=85.0));
            SkySatellite {
                sv_id,
                azim_deg,
                elev_deg,
            }
        })
        .collect();
    SkyModel::new(satellites, DEFAULT_EPOCH_COUNT, DEFAULT_EPOCH_INTERVAL_S, default_start())
}

/// Patch-antenna response: C/N0 falls off with the angle between boresight
/// and source as `max_rolloff * min(1, (angle / beamwidth)^exponent)` dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainModel {
    pub base_cno_dbhz: f64,
    pub max_rolloff_db: f64,
    pub rolloff_exponent: f64,
    pub beamwidth_deg: f64,
    /// Per-sample Gaussian noise on real-sky C/N0, dB.
    pub noise_sigma_db: f64,
    pub rng_seed: u64,
}

impl Default for GainModel {
    fn default() -> Self {
        Self {
            base_cno_dbhz: 40.0,
            max_rolloff_db: 15.0,
            rolloff_exponent: 3.0,
            beamwidth_deg: 105.0,
            noise_sigma_db: 0.5,
            rng_seed: 42,
        }
    }
}

impl GainModel {
    pub fn validate(&self) -> Result<()> {
        let ok = self.base_cno_dbhz.is_finite()
            && self.max_rolloff_db.is_finite()
            && self.max_rolloff_db >= 0.0
            && self.rolloff_exponent.is_finite()
            && self.rolloff_exponent > 0.0
            && self.beamwidth_deg.is_finite()
            && self.beamwidth_deg > 0.0
            && self.noise_sigma_db.is_finite()
            && self.noise_sigma_db >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!("gain model out of range: {self:?}")))
        }
    }

    pub fn rolloff_db(&self, separation_deg: f64) -> f64 {
        self.max_rolloff_db * (separation_deg / self.beamwidth_deg).powf(self.rolloff_exponent).min(1.0)
    }

    /// Noise-free C/N0 for a source `separation_deg` off boresight.
    pub fn cno(&self, separation_deg: f64) -> f64 {
        (self.base_cno_dbhz - self.rolloff_db(separation_deg)).clamp(0.0, MAX_CNO_DBHZ)
    }
}

/// Single emitter that carries every spoofed PRN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpooferModel {
    /// `(azim, elev)` of the emitter in degrees; `None` puts it on the flat
    /// boresight.
    pub source: Option<(f64, f64)>,
    pub spoof_noise_sigma_db: f64,
}

impl Default for SpooferModel {
    fn default() -> Self {
        Self {
            source: None,
            spoof_noise_sigma_db: 0.3,
        }
    }
}

/// Generates all six logs for one sky. Real-sky C/N0 depends on each
/// satellite's separation from the orientation's boresight; spoofed C/N0
/// on the emitter's separation, identical for every PRN.
pub fn simulate_bundle(
    sky: &SkyModel,
    gain: &GainModel,
    spoofer: &SpooferModel,
    antenna: &AntennaSetup,
) -> Result<ScenarioBundle> {
    gain.validate()?;
    if !(spoofer.spoof_noise_sigma_db.is_finite() && spoofer.spoof_noise_sigma_db >= 0.0) {
        return Err(Error::InvalidModel("spoofer noise must be a non-negative number".into()));
    }
    let set = antenna.boresights()?;
    let emitter = match spoofer.source {
        Some((az, el)) => sph2cart(az, el)?,
        None => set.flat,
    };
    let directions: Vec<UnitVector3> = sky
        .satellites
        .iter()
        .map(|s| sph2cart(s.azim_deg, s.elev_deg))
        .collect::<Result<_>>()?;

    // stream 1 keeps the noise independent of a sky drawn from the same seed
    let mut rng = ChaCha8Rng::seed_from_u64(gain.rng_seed);
    rng.set_stream(1);

    let mut bundle = ScenarioBundle::new("synthetic");
    for condition in Condition::ALL {
        let sigma = match condition {
            Condition::RealSky => gain.noise_sigma_db,
            Condition::Spoofed => spoofer.spoof_noise_sigma_db,
        };
        let noise = Normal::new(0.0, sigma).map_err(|e| Error::InvalidModel(e.to_string()))?;
        for orientation in Orientation::ALL {
            let boresight = set.get(orientation);
            let clean: Vec<f64> = directions
                .iter()
                .map(|dir| {
                    let source = match condition {
                        Condition::RealSky => dir,
                        Condition::Spoofed => &emitter,
                    };
                    gain.cno(angular_separation(boresight, source))
                })
                .collect();
            let mut observations = Vec::with_capacity(sky.epoch_count * sky.satellites.len());
            for timestamp in sky.timestamps() {
                for (sat, &level) in sky.satellites.iter().zip(&clean) {
                    let jitter = if sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
                    observations.push(SatObservation {
                        timestamp,
                        sv_id: sat.sv_id,
                        elev: sat.elev_deg,
                        azim: sat.azim_deg,
                        cno: (level + jitter).clamp(0.0, MAX_CNO_DBHZ),
                        quality_ind: SIMULATED_QUALITY_IND,
                        sv_used: true,
                    });
                }
            }
            let source = format!("simulated:{}", crate::ingest::ScenarioKey::new(condition, orientation));
            bundle.insert(condition, OrientationDataset::new(orientation, observations, source)?);
        }
    }
    Ok(bundle)
}

/// Writes each dataset as `<key>.csv` plus a manifest naming them. The
/// manifest is written last and moved into place, so a failed run leaves
/// no manifest behind.
pub fn write_bundle(bundle: &ScenarioBundle, directory: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = directory.as_ref();
    if bundle.is_empty() {
        return Err(Error::EmptyBundle);
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut manifest = String::new();
    if !bundle.label.is_empty() {
        manifest.push_str(&format!("# {}\n", bundle.label));
    }
    for (key, dataset) in bundle.iter() {
        let name = format!("{key}.csv");
        let path = dir.join(&name);
        let mut buf = Vec::new();
        write_csv(dataset.observations(), &mut buf).map_err(|e| Error::io(&path, e))?;
        fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
        manifest.push_str(&format!("{key} = {name}\n"));
    }

    let target = dir.join(MANIFEST_FILE);
    let staging = dir.join(format!(".{MANIFEST_FILE}.tmp"));
    fs::write(&staging, manifest).map_err(|e| Error::io(&staging, e))?;
    fs::rename(&staging, &target).map_err(|e| Error::io(&target, e))?;
    Ok(target)
}

/// Everything needed to reproduce one synthetic bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub sky_seed: u64,
    pub satellite_count: usize,
    pub epoch_count: usize,
    pub epoch_interval_s: u32,
    pub start: NaiveDateTime,
    pub gain: GainModel,
    pub spoofer: SpooferModel,
    pub antenna: AntennaSetup,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self::from_seed(42)
    }
}

impl SimulationConfig {
    /// Defaults with `seed` driving both sky placement and noise.
    pub fn from_seed(seed: u64) -> Self {
        Self {
            sky_seed: seed,
            satellite_count: DEFAULT_SATELLITE_COUNT,
            epoch_count: DEFAULT_EPOCH_COUNT,
            epoch_interval_s: DEFAULT_EPOCH_INTERVAL_S,
            start: default_start(),
            gain: GainModel {
                rng_seed: seed,
                ..GainModel::default()
            },
            spoofer: SpooferModel::default(),
            antenna: AntennaSetup::new(0.0, crate::geometry::DEFAULT_BANK_DEG, BoresightModel::RollTilt),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.sky_seed = seed;
        self.gain.rng_seed = seed;
    }

    /// Reads `key = value` lines on top of the defaults. `seed` sets both
    /// seeds; `noise_seed` after it overrides the noise seed alone.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut spoofer_azim = None;
        let mut spoofer_elev = None;
        for entry in kv::parse(text)? {
            let key = entry.key;
            let v = entry.value;
            match key {
                "seed" => cfg.set_seed(parse_value(key, v)?),
                "noise_seed" => cfg.gain.rng_seed = parse_value(key, v)?,
                "count" => cfg.satellite_count = parse_value(key, v)?,
                "epochs" => cfg.epoch_count = parse_value(key, v)?,
                "epoch_interval_s" => cfg.epoch_interval_s = parse_value(key, v)?,
                "start_time" => {
                    cfg.start = NaiveDateTime::parse_from_str(v, "%Y-%m-%dT%H:%M:%S%.f")
                        .map_err(|_| Error::config(key, format!("`{v}` is not YYYY-MM-DDTHH:MM:SS")))?
                }
                "base_cno_dbhz" => cfg.gain.base_cno_dbhz = parse_value(key, v)?,
                "max_rolloff_db" => cfg.gain.max_rolloff_db = parse_value(key, v)?,
                "rolloff_exponent" => cfg.gain.rolloff_exponent = parse_value(key, v)?,
                "beamwidth_deg" => cfg.gain.beamwidth_deg = parse_value(key, v)?,
                "noise_sigma_db" => cfg.gain.noise_sigma_db = parse_value(key, v)?,
                "spoof_noise_sigma_db" => cfg.spoofer.spoof_noise_sigma_db = parse_value(key, v)?,
                "spoofer_azim_deg" => spoofer_azim = Some(parse_value::<f64>(key, v)?),
                "spoofer_elev_deg" => spoofer_elev = Some(parse_value::<f64>(key, v)?),
                "heading_deg" => cfg.antenna.heading_deg = parse_value(key, v)?,
                "bank_deg" => cfg.antenna.bank_deg = parse_value(key, v)?,
                "model" => cfg.antenna.model = v.parse().map_err(|e: String| Error::config(key, e))?,
                other => return Err(Error::config(other, format!("unknown key (line {})", entry.line))),
            }
        }
        cfg.spoofer.source = match (spoofer_azim, spoofer_elev) {
            (None, None) => None,
            (Some(az), Some(el)) => Some((az, el)),
            (Some(_), None) => return Err(Error::config("spoofer_elev_deg", "required with spoofer_azim_deg")),
            (None, Some(_)) => return Err(Error::config("spoofer_azim_deg", "required with spoofer_elev_deg")),
        };
        Ok(cfg)
    }

    pub fn sky(&self) -> Result<SkyModel> {
        let sky = generate_sky(self.sky_seed, self.satellite_count)?;
        SkyModel::new(sky.satellites, self.epoch_count, self.epoch_interval_s, self.start)
    }

    pub fn simulate(&self) -> Result<ScenarioBundle> {
        let mut bundle = simulate_bundle(&self.sky()?, &self.gain, &self.spoofer, &self.antenna)?;
        bundle.label = format!("synthetic seed {}", self.sky_seed);
        Ok(bundle)
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}
