//! Direction vectors in a local East-North-Up frame (east = +x, north = +y,
//! up = +z) and antenna boresights for the three bank orientations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Orientation, PerOrientation};

pub const DEFAULT_BANK_DEG: f64 = 45.0;

/// A direction in the local ENU frame, unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const UP: UnitVector3 = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };

    /// Normalizes the given components.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Azimuth (clockwise from north) and elevation in degrees to a unit vector.
pub fn sph2cart(azim_deg: f64, elev_deg: f64) -> Result<UnitVector3> {
    if !azim_deg.is_finite() || !elev_deg.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let (sin_az, cos_az) = sin_cos_deg(azim_deg);
    let (sin_el, cos_el) = sin_cos_deg(elev_deg);
    Ok(UnitVector3 {
        x: sin_az * cos_el,
        y: cos_az * cos_el,
        z: sin_el,
    })
}

/// Sine and cosine of an angle in degrees, exact at multiples of 90.
fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let d = deg.rem_euclid(360.0);
    match d {
        0.0 => (0.0, 1.0),
        90.0 => (1.0, 0.0),
        180.0 => (0.0, -1.0),
        270.0 => (-1.0, 0.0),
        _ => d.to_radians().sin_cos(),
    }
}

pub fn dot(a: &UnitVector3, b: &UnitVector3) -> f64 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

/// Angle between two directions in degrees, in [0, 180].
pub fn angular_separation(a: &UnitVector3, b: &UnitVector3) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos().to_degrees()
}

/// How the three antenna boresights are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum BoresightModel {
    /// Horizontal boresights swept by the bank angle in azimuth around the
    /// heading. This is the layout used by the trend-prediction code.
    #[default]
    #[serde(rename = "sweep")]
    AzimuthSweep,
    /// A zenith-pointing patch antenna rolled about the heading axis.
    #[serde(rename = "tilt")]
    RollTilt,
}

impl BoresightModel {
    pub fn as_str(self) -> &'static str {
        match self {
            BoresightModel::AzimuthSweep => "sweep",
            BoresightModel::RollTilt => "tilt",
        }
    }
}

impl fmt::Display for BoresightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for BoresightModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sweep" | "azimuth-sweep" => Ok(BoresightModel::AzimuthSweep),
            "tilt" | "roll-tilt" => Ok(BoresightModel::RollTilt),
            other => Err(format!("unknown boresight model `{other}` (expected sweep or tilt)")),
        }
    }
}

/// Boresight directions for left bank, flat and right bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoresightSet {
    pub left: UnitVector3,
    pub flat: UnitVector3,
    pub right: UnitVector3,
    pub heading_deg: f64,
    pub bank_deg: f64,
    pub model: BoresightModel,
}

impl BoresightSet {
    pub fn get(&self, orientation: Orientation) -> &UnitVector3 {
        match orientation {
            Orientation::LeftBank => &self.left,
            Orientation::Flat => &self.flat,
            Orientation::RightBank => &self.right,
        }
    }

    pub fn as_per_orientation(&self) -> PerOrientation<UnitVector3> {
        PerOrientation::new(self.left, self.flat, self.right)
    }

    /// Inner products of `v` with the left, flat and right boresights.
    pub fn projections(&self, v: &UnitVector3) -> PerOrientation<f64> {
        PerOrientation::new(dot(&self.left, v), dot(&self.flat, v), dot(&self.right, v))
    }
}

pub fn boresights(heading_deg: f64, bank_deg: f64, model: BoresightModel) -> Result<BoresightSet> {
    if !heading_deg.is_finite() || !bank_deg.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    if !(bank_deg > 0.0 && bank_deg < 90.0) {
        return Err(Error::BankOutOfRange(bank_deg));
    }
    let heading = heading_deg.rem_euclid(360.0);
    let (left, flat, right) = match model {
        BoresightModel::AzimuthSweep => (
            sph2cart((heading - bank_deg).rem_euclid(360.0), 0.0)?,
            sph2cart(heading, 0.0)?,
            sph2cart((heading + bank_deg).rem_euclid(360.0), 0.0)?,
        ),
        // Level, the patch looks straight up. Rolling tips it toward the
        // lowered wing, i.e. perpendicular to the heading.
        BoresightModel::RollTilt => (
            sph2cart((heading - 90.0).rem_euclid(360.0), 90.0 - bank_deg)?,
            UnitVector3::UP,
            sph2cart((heading + 90.0).rem_euclid(360.0), 90.0 - bank_deg)?,
        ),
    };
    Ok(BoresightSet {
        left,
        flat,
        right,
        heading_deg: heading,
        bank_deg,
        model,
    })
}

/// Heading, bank magnitude and boresight layout of the antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AntennaSetup {
    pub heading_deg: f64,
    pub bank_deg: f64,
    pub model: BoresightModel,
}

impl AntennaSetup {
    pub fn new(heading_deg: f64, bank_deg: f64, model: BoresightModel) -> Self {
        Self {
            heading_deg,
            bank_deg,
            model,
        }
    }

    pub fn boresights(&self) -> Result<BoresightSet> {
        boresights(self.heading_deg, self.bank_deg, self.model)
    }
}
