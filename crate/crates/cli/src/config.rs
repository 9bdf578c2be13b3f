//! Run configuration: sectioned TOML with SI units at the boundary.
//!
//! Frequencies are ordinary frequencies (Hz) and are converted to angular
//! frequency once, in [`RunConfig::atom`] and [`RunConfig::motion`]. Lengths
//! accept a bare number (metres) or a string with a unit suffix, e.g.
//! `"1.5 nm"`.
//!
//! ```toml
//! [atom]
//! transition_hz = 5e9
//! alpha = 0.2
//!
//! [motion]
//! kind = "sho"
//! frequency_hz = 1e10
//! amplitude = "1 nm"
//!
//! [geometry]
//! kind = "free_space"
//!
//! [run]
//! n = 1
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use vibrad::units::hz_to_rad_per_s;
use vibrad::{
    AtomParams, Branch, Cavity, GeneralPeriodic, Geometry, Mirror, MotionProfile, Orientation, Rotation, Sho,
};

use crate::error::CliError;

// Units as decimal exponents, applied to the text before parsing so that
// "3 nm" reads as exactly the same f64 as 3e-9.
const LENGTH_UNITS: &[(&str, i32)] = &[
    ("m", 0),
    ("cm", -2),
    ("mm", -3),
    ("um", -6),
    ("µm", -6),
    ("nm", -9),
    ("pm", -12),
];

const FREQUENCY_UNITS: &[(&str, i32)] = &[("Hz", 0), ("kHz", 3), ("MHz", 6), ("GHz", 9), ("THz", 12)];

fn scaled(number: &str, exponent: i32) -> Option<f64> {
    number.parse::<f64>().ok()?;
    let (mantissa, own) = match number.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (number, 0),
    };
    format!("{mantissa}e{}", own + exponent).parse().ok()
}

fn parse_quantity(text: &str, units: &[(&str, i32)]) -> Result<f64, String> {
    let text = text.trim();
    if let Ok(value) = text.parse::<f64>() {
        return Ok(value);
    }
    // longest suffix first so "mm" is not read as "m"
    let mut by_length: Vec<&(&str, i32)> = units.iter().collect();
    by_length.sort_by_key(|(name, _)| std::cmp::Reverse(name.len()));
    for (name, exponent) in by_length {
        if let Some(value) = text
            .strip_suffix(name)
            .and_then(|n| scaled(n.trim_end(), *exponent))
        {
            return Ok(value);
        }
    }
    let known: Vec<&str> = units.iter().map(|(n, _)| *n).collect();
    Err(format!(
        "cannot read {text:?} as a number with one of the units {}",
        known.join(", ")
    ))
}

macro_rules! quantity {
    ($name:ident, $units:expr, $what:literal) => {
        #[doc = concat!("A ", $what, " in SI units; deserialises from a number or a string with a unit.")]
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(pub f64);

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_f64(self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = $name;
                    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                        write!(f, "a {} as a number or a string with a unit", $what)
                    }
                    fn visit_f64<E: de::Error>(self, v: f64) -> Result<$name, E> {
                        Ok($name(v))
                    }
                    fn visit_i64<E: de::Error>(self, v: i64) -> Result<$name, E> {
                        Ok($name(v as f64))
                    }
                    fn visit_u64<E: de::Error>(self, v: u64) -> Result<$name, E> {
                        Ok($name(v as f64))
                    }
                    fn visit_str<E: de::Error>(self, v: &str) -> Result<$name, E> {
                        parse_quantity(v, $units).map($name).map_err(E::custom)
                    }
                }
                d.deserialize_any(V)
            }
        }
    };
}

quantity!(Length, LENGTH_UNITS, "length");
quantity!(Frequency, FREQUENCY_UNITS, "frequency");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub transition_hz: Frequency,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_hz: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationKind {
    Perpendicular,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MotionSection {
    Sho {
        frequency_hz: Frequency,
        amplitude: Length,
        #[serde(default = "default_orientation")]
        orientation: OrientationKind,
        /// Photon direction angle, radians (parallel orientation only).
        #[serde(default)]
        delta: f64,
    },
    Rotation {
        frequency_hz: Frequency,
        radius: Length,
        #[serde(default)]
        delta: f64,
    },
    General {
        frequency_hz: Frequency,
        samples: Vec<Length>,
    },
}

fn default_orientation() -> OrientationKind {
    OrientationKind::Perpendicular
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySection {
    FreeSpace,
    Mirror {
        z0: Length,
    },
    Cavity {
        length: Length,
        z0: Length,
        #[serde(default)]
        photons: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchKind {
    EmitExcite,
    AbsorbDeexcite,
}

impl From<BranchKind> for Branch {
    fn from(b: BranchKind) -> Self {
        match b {
            BranchKind::EmitExcite => Branch::EmitExcite,
            BranchKind::AbsorbDeexcite => Branch::AbsorbDeexcite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Sideband index for `rate`.
    #[serde(default = "default_n")]
    pub n: u32,
    /// Cavity mode index; resolved from the resonance condition when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<u32>,
    #[serde(default = "default_branch")]
    pub branch: BranchKind,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_n() -> u32 {
    1
}

fn default_n_max() -> u32 {
    10
}

fn default_branch() -> BranchKind {
    BranchKind::EmitExcite
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n: default_n(),
            mode: None,
            branch: default_branch(),
            n_max: default_n_max(),
            verify: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Csv
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Custom,
}

/// One axis of a custom sweep. `start`/`stop` are in SI units (strings with
/// units are accepted); `name` is one of the parameters listed in
/// [`crate::commands::CUSTOM_AXES`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub name: String,
    pub start: AxisValue,
    pub stop: AxisValue,
    pub count: usize,
}

/// Axis bound: a bare number, or a length/frequency string with unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisValue(pub f64);

impl Serialize for AxisValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for AxisValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(AxisValue(v)),
            Raw::Text(t) => parse_quantity(&t, LENGTH_UNITS)
                .or_else(|_| parse_quantity(&t, FREQUENCY_UNITS))
                .map(AxisValue)
                .map_err(de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_preset")]
    pub preset: Preset,
    /// Grid points along the first axis (fig2/fig3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Write the fig2 surface in Hz (needs atom and motion frequency) instead of Jₙ².
    #[serde(default)]
    pub absolute: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis1: Option<AxisSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<AxisSection>,
}

fn default_preset() -> Preset {
    Preset::Fig2
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            preset: Preset::Fig2,
            points: None,
            absolute: false,
            axis1: None,
            axis2: None,
        }
    }
}

/// Complete run description. Every section is optional in the file so that
/// preset sweeps and the oracle suite can run without physics input; the
/// accessors report the missing section as a config error.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<AtomSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion: Option<MotionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySection>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn atom(&self) -> Result<AtomParams, CliError> {
        let section = self
            .atom
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [atom] section".into()))?;
        let omega0 = hz_to_rad_per_s(section.transition_hz.0);
        match (section.alpha, section.coupling_hz) {
            (Some(alpha), None) => Ok(AtomParams::with_alpha(omega0, alpha)?),
            (None, Some(g)) => Ok(AtomParams::new(omega0, hz_to_rad_per_s(g.0))?),
            (Some(_), Some(_)) => Err(CliError::Config(
                "[atom]: give either alpha or coupling_hz, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "[atom]: one of alpha or coupling_hz is required".into(),
            )),
        }
    }

    pub fn motion(&self) -> Result<MotionProfile, CliError> {
        let section = self
            .motion
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [motion] section".into()))?;
        Ok(match section {
            MotionSection::Sho {
                frequency_hz,
                amplitude,
                orientation,
                delta,
            } => {
                let orientation = match orientation {
                    OrientationKind::Perpendicular => Orientation::Perpendicular,
                    OrientationKind::Parallel => Orientation::Parallel { delta: *delta },
                };
                Sho::oriented(amplitude.0, hz_to_rad_per_s(frequency_hz.0), orientation)?.into()
            }
            MotionSection::Rotation {
                frequency_hz,
                radius,
                delta,
            } => Rotation::new(radius.0, hz_to_rad_per_s(frequency_hz.0), *delta)?.into(),
            MotionSection::General {
                frequency_hz,
                samples,
            } => GeneralPeriodic::new(
                hz_to_rad_per_s(frequency_hz.0),
                samples.iter().map(|s| s.0).collect(),
            )?
            .into(),
        })
    }

    pub fn geometry(&self) -> Result<Geometry, CliError> {
        let section = self
            .geometry
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [geometry] section".into()))?;
        Ok(match section {
            GeometrySection::FreeSpace => Geometry::FreeSpace,
            GeometrySection::Mirror { z0 } => Geometry::Mirror(Mirror::new(z0.0)?),
            GeometrySection::Cavity { length, z0, photons } => {
                Geometry::Cavity(Cavity::new(length.0, z0.0, *photons)?)
            }
        })
    }

    /// Atom, motion and geometry, checked against each other.
    pub fn physics(&self) -> Result<(AtomParams, MotionProfile, Geometry), CliError> {
        let atom = self.atom()?;
        let motion = self.motion()?;
        let geometry = self.geometry()?;
        geometry.admit(&motion)?;
        Ok((atom, motion, geometry))
    }
}
