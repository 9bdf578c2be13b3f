//! Atom, trajectory and boundary-condition value types.

use serde::Serialize;

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Two-level atom: transition frequency ω₀ and field coupling g, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomParams {
    omega0: f64,
    g: f64,
    alpha: Option<f64>,
}

impl AtomParams {
    pub fn new(omega0: f64, g: f64) -> Result<Self> {
        ensure_positive("omega0", omega0)?;
        ensure_positive("g", g)?;
        Ok(Self {
            omega0,
            g,
            alpha: None,
        })
    }

    /// Ultra-strong coupling expressed as g = α·ω₀.
    pub fn with_alpha(omega0: f64, alpha: f64) -> Result<Self> {
        ensure_positive("omega0", omega0)?;
        ensure_positive("alpha", alpha)?;
        Ok(Self {
            omega0,
            g: alpha * omega0,
            alpha: Some(alpha),
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }
}

/// Direction of a linear oscillation relative to the mirror plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Orientation {
    /// Along z, towards and away from the mirror.
    Perpendicular,
    /// Along y, in the mirror plane. `delta` fixes the photon direction:
    /// k_y = k sin δ, k_z = k cos δ.
    Parallel { delta: f64 },
}

/// Simple harmonic motion x(t) = A sin(Ωt) along the given orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sho {
    amplitude: f64,
    omega: f64,
    orientation: Orientation,
}

impl Sho {
    pub fn new(amplitude: f64, omega: f64) -> Result<Self> {
        Self::oriented(amplitude, omega, Orientation::Perpendicular)
    }

    pub fn oriented(amplitude: f64, omega: f64, orientation: Orientation) -> Result<Self> {
        ensure_non_negative("amplitude", amplitude)?;
        ensure_positive("Omega", omega)?;
        if let Orientation::Parallel { delta } = orientation {
            ensure_finite("delta", delta)?;
        }
        Ok(Self {
            amplitude,
            omega,
            orientation,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Uniform circular motion of radius R in the y–z plane,
/// (y, z) = R(cos Ωt, sin Ωt). `delta` is the photon direction angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation {
    radius: f64,
    omega: f64,
    delta: f64,
}

impl Rotation {
    pub fn new(radius: f64, omega: f64, delta: f64) -> Result<Self> {
        ensure_non_negative("radius", radius)?;
        ensure_positive("Omega", omega)?;
        ensure_finite("delta", delta)?;
        Ok(Self { radius, omega, delta })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Minimum number of samples accepted for a general periodic path.
pub const MIN_SAMPLES: usize = 16;

/// Periodic path along z given by uniform samples over one period:
/// `samples[j] = z(2πj / (NΩ))`, j = 0..N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralPeriodic {
    omega: f64,
    samples: Vec<f64>,
}

impl GeneralPeriodic {
    pub fn new(omega: f64, samples: Vec<f64>) -> Result<Self> {
        ensure_positive("Omega", omega)?;
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Domain(format!(
                "need at least {MIN_SAMPLES} samples per period, got {}",
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|z| !z.is_finite()) {
            return Err(Error::Domain(format!("sample {bad} is not finite")));
        }
        Ok(Self { omega, samples })
    }

    /// Samples `path(τ)` at τ = 2πj/N.
    pub fn from_fn(omega: f64, count: usize, path: impl Fn(f64) -> f64) -> Result<Self> {
        let step = std::f64::consts::TAU / count as f64;
        Self::new(omega, (0..count).map(|j| path(j as f64 * step)).collect())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MotionProfile {
    Sho(Sho),
    Rotation(Rotation),
    General(GeneralPeriodic),
}

impl MotionProfile {
    /// Mechanical angular frequency Ω.
    pub fn omega(&self) -> f64 {
        match self {
            MotionProfile::Sho(s) => s.omega,
            MotionProfile::Rotation(r) => r.omega,
            MotionProfile::General(g) => g.omega,
        }
    }

    /// Largest excursion of the atom from its centre.
    pub fn reach(&self) -> f64 {
        match self {
            MotionProfile::Sho(s) => s.amplitude,
            MotionProfile::Rotation(r) => r.radius,
            MotionProfile::General(g) => g.peak(),
        }
    }

    /// Largest excursion along z, the axis normal to any mirror.
    pub fn reach_along_z(&self) -> f64 {
        match self {
            MotionProfile::Sho(s) => match s.orientation {
                Orientation::Perpendicular => s.amplitude,
                Orientation::Parallel { .. } => 0.0,
            },
            _ => self.reach(),
        }
    }
}

impl From<Sho> for MotionProfile {
    fn from(s: Sho) -> Self {
        MotionProfile::Sho(s)
    }
}

impl From<Rotation> for MotionProfile {
    fn from(r: Rotation) -> Self {
        MotionProfile::Rotation(r)
    }
}

impl From<GeneralPeriodic> for MotionProfile {
    fn from(g: GeneralPeriodic) -> Self {
        MotionProfile::General(g)
    }
}

/// Perfect mirror at distance z₀ from the oscillation centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mirror {
    z0: f64,
}

impl Mirror {
    pub fn new(z0: f64) -> Result<Self> {
        ensure_positive("z0", z0)?;
        Ok(Self { z0 })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }
}

/// One-dimensional cavity of length L; the atom oscillates about a point a
/// distance z₀ from one end mirror. `photons` is the occupation N of the
/// resonant mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cavity {
    length: f64,
    z0: f64,
    photons: u32,
}

impl Cavity {
    pub fn new(length: f64, z0: f64, photons: u32) -> Result<Self> {
        ensure_positive("L", length)?;
        ensure_positive("z0", z0)?;
        if z0 >= length {
            return Err(Error::Domain(format!(
                "z0 = {z0} m must lie inside the cavity of length {length} m"
            )));
        }
        Ok(Self { length, z0, photons })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    /// Mode angular frequency ω_m = πmc/L.
    pub fn mode_frequency(&self, m: u32) -> f64 {
        std::f64::consts::PI * f64::from(m) * crate::units::SPEED_OF_LIGHT / self.length
    }

    /// Mode wavenumber k_m = πm/L.
    pub fn mode_wavenumber(&self, m: u32) -> f64 {
        std::f64::consts::PI * f64::from(m) / self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Geometry {
    FreeSpace,
    Mirror(Mirror),
    Cavity(Cavity),
}

impl Geometry {
    /// Checks that the trajectory fits the boundary conditions: the atom may
    /// not reach a mirror, and only z-oscillations are modelled without a
    /// mirror.
    pub fn admit(&self, motion: &MotionProfile) -> Result<()> {
        match self {
            Geometry::FreeSpace => match motion {
                MotionProfile::Sho(s) if s.orientation != Orientation::Perpendicular => Err(
                    Error::Unsupported("parallel oscillation needs a mirror geometry".into()),
                ),
                MotionProfile::Rotation(_) => {
                    Err(Error::Unsupported("rotation needs a mirror geometry".into()))
                }
                _ => Ok(()),
            },
            Geometry::Mirror(m) => {
                let reach = motion.reach_along_z();
                if reach >= m.z0 {
                    Err(Error::Domain(format!(
                        "excursion {reach} m reaches the mirror at z0 = {} m",
                        m.z0
                    )))
                } else {
                    Ok(())
                }
            }
            Geometry::Cavity(c) => {
                match motion {
                    MotionProfile::Sho(s) if s.orientation == Orientation::Perpendicular => {}
                    MotionProfile::General(_) => {}
                    _ => {
                        return Err(Error::Unsupported(
                            "cavity geometry supports motion along the cavity axis only".into(),
                        ))
                    }
                }
                let reach = motion.reach_along_z();
                let room = c.z0.min(c.length - c.z0);
                if reach >= room {
                    Err(Error::Domain(format!(
                        "excursion {reach} m reaches a cavity mirror (clearance {room} m)"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Which first-order process a sideband line describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Atom excited, photon emitted: ω + ω₀ = nΩ.
    EmitExcite,
    /// Atom de-excited, photon absorbed (cavity only).
    AbsorbDeexcite,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::EmitExcite => "emit-excite",
            Branch::AbsorbDeexcite => "absorb-deexcite",
        }
    }
}

/// One resonance line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sideband {
    pub n: u32,
    /// Cavity mode index, when the line belongs to a cavity mode.
    pub mode: Option<u32>,
    /// Photon angular frequency, rad/s.
    pub omega: f64,
    /// Transition rate, Hz.
    pub rate: f64,
    pub branch: Branch,
}
