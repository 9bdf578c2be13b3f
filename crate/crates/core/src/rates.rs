//! Closed-form per-sideband transition rates.
//!
//! A sideband n carries a photon of frequency ω = nΩ − ω₀. Its rate is the
//! one-period transition probability divided by the mechanical period:
//!
//! * free space: (2πg²/Ω)·Jₙ²(Ã)
//! * mirror: (8πg²/Ω)·sin²(θ − πn/2)·Jₙ²(Ã), θ = k_z z₀
//! * cavity mode m: the mirror formula with k = πm/L, scaled by χ₊ = N+1
//!   (emit and excite) or χ₋ = N (absorb and de-excite).

use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::model::{AtomParams, Branch, Cavity, Geometry, Mirror, MotionProfile, Orientation, Sho, Sideband};
use crate::specfun::bessel_j;
use crate::units::{wavenumber, SPEED_OF_LIGHT};

/// Relative tolerance on |nΩ − (ω + ω₀)|/Ω when matching cavity modes.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Largest Ã accepted by [`small_amplitude_rate`].
pub const SMALL_AMPLITUDE_LIMIT: f64 = 0.1;

/// Ã for a photon of angular frequency `omega`: kA for perpendicular SHO,
/// k_y·A for oscillation parallel to a mirror, kR for rotation and k·max|z|
/// for a sampled path.
pub fn dimensionless_amplitude(motion: &MotionProfile, omega: f64) -> Result<f64> {
    ensure_positive("omega", omega)?;
    let k = wavenumber(omega);
    Ok(match motion {
        MotionProfile::Sho(s) => match s.orientation() {
            Orientation::Perpendicular => k * s.amplitude(),
            Orientation::Parallel { delta } => (k * delta.sin()).abs() * s.amplitude(),
        },
        MotionProfile::Rotation(r) => k * r.radius(),
        MotionProfile::General(g) => k * g.peak(),
    })
}

/// Mirror phase θ = k_z z₀ seen by the given motion.
fn mirror_phase(motion: &MotionProfile, k: f64, z0: f64) -> f64 {
    match motion {
        MotionProfile::Sho(s) => match s.orientation() {
            Orientation::Perpendicular => k * z0,
            Orientation::Parallel { delta } => k * delta.cos() * z0,
        },
        MotionProfile::Rotation(r) => k * r.delta().cos() * z0,
        MotionProfile::General(_) => k * z0,
    }
}

/// sin(θ − πn/2), reduced on n mod 4 so exact nodes stay exact.
pub(crate) fn node_factor(theta: f64, n: u32) -> f64 {
    match n % 4 {
        0 => theta.sin(),
        1 => -theta.cos(),
        2 => -theta.sin(),
        _ => theta.cos(),
    }
}

fn photon_frequency(atom: &AtomParams, omega_mech: f64, n: u32) -> Result<f64> {
    let omega = f64::from(n) * omega_mech - atom.omega0();
    if n == 0 || omega <= 0.0 {
        Err(Error::NoSideband { n, omega })
    } else {
        Ok(omega)
    }
}

/// (8πχg²/Ω)·sin²(θ − πn/2)·Jₙ²(Ã)
fn standing_wave_rate(g: f64, omega_mech: f64, chi: f64, theta: f64, a_tilde: f64, n: u32) -> Result<f64> {
    let s = node_factor(theta, n);
    let j = bessel_j(n, a_tilde)?;
    Ok(8.0 * PI * chi * g * g / omega_mech * s * s * j * j)
}

/// Rate of sideband `n` for SHO (either orientation) or rotation facing a mirror.
pub fn mirror_rate(atom: &AtomParams, motion: &MotionProfile, mirror: &Mirror, n: u32) -> Result<Sideband> {
    if let MotionProfile::General(_) = motion {
        return Err(Error::Unsupported(
            "no closed form for a sampled path; use the oracle".into(),
        ));
    }
    Geometry::Mirror(*mirror).admit(motion)?;
    let omega_mech = motion.omega();
    let omega = photon_frequency(atom, omega_mech, n)?;
    let a_tilde = dimensionless_amplitude(motion, omega)?;
    let theta = mirror_phase(motion, wavenumber(omega), mirror.z0());
    let rate = standing_wave_rate(atom.g(), omega_mech, 1.0, theta, a_tilde, n)?;
    Ok(Sideband {
        n,
        mode: None,
        omega,
        rate,
        branch: Branch::EmitExcite,
    })
}

/// Free-space rate (2πg²/Ω)·Jₙ²((nΩ − ω₀)A/c).
pub fn free_space_rate(atom: &AtomParams, motion: &Sho, n: u32) -> Result<Sideband> {
    if motion.orientation() != Orientation::Perpendicular {
        return Err(Error::Unsupported(
            "free space is one-dimensional; oscillation must be along z".into(),
        ));
    }
    let omega_mech = motion.omega();
    let omega = photon_frequency(atom, omega_mech, n)?;
    let a_tilde = dimensionless_amplitude(&MotionProfile::Sho(*motion), omega)?;
    let j = bessel_j(n, a_tilde)?;
    Ok(Sideband {
        n,
        mode: None,
        omega,
        rate: 2.0 * PI * atom.g() * atom.g() / omega_mech * j * j,
        branch: Branch::EmitExcite,
    })
}

/// Signed resonance mismatch in rad/s for sideband `n` and cavity mode `m`.
pub fn cavity_mismatch(
    atom: &AtomParams,
    omega_mech: f64,
    cavity: &Cavity,
    n: u32,
    m: u32,
    branch: Branch,
) -> f64 {
    let omega_m = cavity.mode_frequency(m);
    let drive = f64::from(n) * omega_mech;
    match branch {
        Branch::EmitExcite => drive - (omega_m + atom.omega0()),
        Branch::AbsorbDeexcite => drive - (atom.omega0() - omega_m),
    }
}

/// Rate for sideband `n` feeding cavity mode `m` on the chosen branch.
pub fn cavity_rate(
    atom: &AtomParams,
    motion: &Sho,
    cavity: &Cavity,
    n: u32,
    m: u32,
    branch: Branch,
) -> Result<Sideband> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!(
            "sideband and mode indices must be positive, got n={n}, m={m}"
        )));
    }
    Geometry::Cavity(*cavity).admit(&MotionProfile::Sho(*motion))?;
    let omega_mech = motion.omega();
    let mismatch = cavity_mismatch(atom, omega_mech, cavity, n, m, branch);
    if mismatch.abs() > RESONANCE_TOL * omega_mech {
        return Err(Error::OffResonance { n, m, mismatch });
    }
    let chi = match branch {
        Branch::EmitExcite => f64::from(cavity.photons()) + 1.0,
        Branch::AbsorbDeexcite => f64::from(cavity.photons()),
    };
    let k = cavity.mode_wavenumber(m);
    let rate = standing_wave_rate(
        atom.g(),
        omega_mech,
        chi,
        k * cavity.z0(),
        k * motion.amplitude(),
        n,
    )?;
    Ok(Sideband {
        n,
        mode: Some(m),
        omega: cavity.mode_frequency(m),
        rate,
        branch,
    })
}

/// Resonant cavity mode for sideband `n` on `branch`, if one exists.
pub fn resonant_mode(
    atom: &AtomParams,
    omega_mech: f64,
    cavity: &Cavity,
    n: u32,
    branch: Branch,
) -> Option<u32> {
    let spacing = cavity.mode_frequency(1);
    let drive = f64::from(n) * omega_mech;
    let target = match branch {
        Branch::EmitExcite => drive - atom.omega0(),
        Branch::AbsorbDeexcite => atom.omega0() - drive,
    };
    if target <= 0.0 {
        return None;
    }
    let m = (target / spacing).round();
    if m < 1.0 || m > f64::from(u32::MAX) {
        return None;
    }
    let m = m as u32;
    let mismatch = cavity_mismatch(atom, omega_mech, cavity, n, m, branch);
    (mismatch.abs() <= RESONANCE_TOL * omega_mech).then_some(m)
}

/// Every sideband n ∈ [1, n_max] that carries a positive-frequency photon.
///
/// For a cavity only resonant (n, m) pairs are listed. De-excitation lines
/// are listed only when the cavity holds photons (χ₋ = N).
pub fn allowed_sidebands(
    atom: &AtomParams,
    motion: &MotionProfile,
    geom: &Geometry,
    n_max: u32,
) -> Result<Vec<Sideband>> {
    geom.admit(motion)?;
    let omega_mech = motion.omega();
    let mut lines = Vec::new();
    for n in 1..=n_max {
        match geom {
            Geometry::FreeSpace | Geometry::Mirror(_) => {
                if f64::from(n) * omega_mech <= atom.omega0() {
                    continue;
                }
                let line = match (geom, motion) {
                    (Geometry::Mirror(m), _) => mirror_rate(atom, motion, m, n)?,
                    (_, MotionProfile::Sho(s)) => free_space_rate(atom, s, n)?,
                    _ => {
                        return Err(Error::Unsupported(
                            "no closed form for a sampled path; use the oracle".into(),
                        ))
                    }
                };
                lines.push(line);
            }
            Geometry::Cavity(cavity) => {
                let MotionProfile::Sho(sho) = motion else {
                    return Err(Error::Unsupported(
                        "no closed form for a sampled path; use the oracle".into(),
                    ));
                };
                let mut branches = vec![Branch::EmitExcite];
                if cavity.photons() > 0 {
                    branches.push(Branch::AbsorbDeexcite);
                }
                for branch in branches {
                    if let Some(m) = resonant_mode(atom, omega_mech, cavity, n, branch) {
                        lines.push(cavity_rate(atom, sho, cavity, n, m, branch)?);
                    }
                }
            }
        }
    }
    Ok(lines)
}

/// Small-amplitude free-space rate of the first sideband at the optimum
/// ω₀ = Ω/2 with g = αω₀: P̄₁ ≈ π(αA)²Ω³/(32c²).
pub fn small_amplitude_rate(atom: &AtomParams, motion: &Sho) -> Result<f64> {
    let alpha = atom
        .alpha()
        .ok_or_else(|| Error::Domain("small-amplitude rate needs g given as alpha·omega0".into()))?;
    let omega_mech = motion.omega();
    let half = 0.5 * omega_mech;
    if (atom.omega0() - half).abs() > 1e-12 * half {
        return Err(Error::Domain(format!(
            "small-amplitude rate assumes omega0 = Omega/2; got omega0 = {}, Omega = {omega_mech}",
            atom.omega0()
        )));
    }
    let a_tilde = (omega_mech - atom.omega0()) * motion.amplitude() / SPEED_OF_LIGHT;
    if a_tilde >= SMALL_AMPLITUDE_LIMIT {
        return Err(Error::ApproximationDomain { a_tilde });
    }
    Ok(small_amplitude_formula(alpha, motion.amplitude(), omega_mech))
}

/// π(αA)²Ω³/(32c²) without any domain checks.
pub fn small_amplitude_formula(alpha: f64, amplitude: f64, omega_mech: f64) -> f64 {
    let aa = alpha * amplitude;
    PI * aa * aa * omega_mech.powi(3) / (32.0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}
