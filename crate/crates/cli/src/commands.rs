use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use vibrad::oracle::{self, verify_selection_rule};
use vibrad::rates::{cavity_rate, free_space_rate, mirror_rate, resonant_mode};
use vibrad::specfun::rational_period_integral;
use vibrad::sweep::{self, relative_deviation, SpectrumLine, VERIFY_TOL};
use vibrad::units::{wavenumber, SPEED_OF_LIGHT};
use vibrad::{
    AtomParams, Axis, Branch, Cavity, Error, Geometry, Mirror, MotionProfile, QuadratureConfig, Sho,
    Sideband, SweepGrid, SweepResult,
};

use crate::config::{AxisSection, GeometrySection, MotionSection, Preset, RunConfig};
use crate::error::CliError;

/// Parameters a custom sweep axis may vary, with their units.
pub const CUSTOM_AXES: &[(&str, &str)] = &[
    ("n", "sideband index"),
    ("amplitude", "m"),
    ("radius", "m"),
    ("z0", "m"),
    ("length", "m"),
    ("frequency_hz", "Hz"),
    ("transition_hz", "Hz"),
    ("alpha", "1"),
    ("coupling_hz", "Hz"),
];

/// Rate of one sideband. Cavity lines use `mode` or, when absent, the mode
/// resonant with the chosen branch. Sampled paths go through the oracle.
pub fn line_rate(
    atom: &AtomParams,
    motion: &MotionProfile,
    geom: &Geometry,
    n: u32,
    mode: Option<u32>,
    branch: Branch,
) -> Result<Sideband, CliError> {
    geom.admit(motion)?;
    let omega_mech = motion.omega();
    let mode = match geom {
        Geometry::Cavity(c) => Some(match mode {
            Some(m) => m,
            None => resonant_mode(atom, omega_mech, c, n, branch).ok_or_else(|| {
                CliError::Physics(Error::Domain(format!(
                    "no cavity mode is resonant with sideband {n} on the {} branch",
                    branch.as_str()
                )))
            })?,
        }),
        _ => None,
    };
    match (geom, motion) {
        (Geometry::Cavity(c), MotionProfile::Sho(s)) => {
            Ok(cavity_rate(atom, s, c, n, mode.unwrap_or_default(), branch)?)
        }
        (Geometry::Mirror(m), MotionProfile::Sho(_) | MotionProfile::Rotation(_)) => {
            Ok(mirror_rate(atom, motion, m, n)?)
        }
        (Geometry::FreeSpace, MotionProfile::Sho(s)) => Ok(free_space_rate(atom, s, n)?),
        (_, MotionProfile::General(_)) => {
            let omega = match (geom, mode) {
                (Geometry::Cavity(c), Some(m)) => c.mode_frequency(m),
                _ => {
                    let omega = f64::from(n) * omega_mech - atom.omega0();
                    if omega <= 0.0 {
                        return Err(Error::NoSideband { n, omega }.into());
                    }
                    omega
                }
            };
            let mut line = Sideband {
                n,
                mode,
                omega,
                rate: 0.0,
                branch,
            };
            line.rate = sweep::oracle_rate(atom, motion, geom, &line, &QuadratureConfig::default())?;
            Ok(line)
        }
        _ => Err(Error::Unsupported("motion not supported in this geometry".into()).into()),
    }
}

pub fn rate(cfg: &RunConfig, verify: bool) -> Result<SpectrumLine, CliError> {
    let (atom, motion, geom) = cfg.physics()?;
    let run = &cfg.run;
    let line = line_rate(&atom, &motion, &geom, run.n, run.mode, run.branch.into())?;
    if !verify || matches!(motion, MotionProfile::General(_)) {
        return Ok(SpectrumLine {
            sideband: line,
            oracle_rate: None,
            deviation: None,
        });
    }
    let checked = sweep::oracle_rate(&atom, &motion, &geom, &line, &QuadratureConfig::default())?;
    let deviation = relative_deviation(line.rate, checked, 1e-300);
    if deviation > VERIFY_TOL {
        return Err(Error::Integrity {
            n: line.n,
            closed: line.rate,
            oracle: checked,
            relative: deviation,
        }
        .into());
    }
    Ok(SpectrumLine {
        sideband: line,
        oracle_rate: Some(checked),
        deviation: Some(deviation),
    })
}

pub fn spectrum(cfg: &RunConfig, verify: bool) -> Result<Vec<SpectrumLine>, CliError> {
    let (atom, motion, geom) = cfg.physics()?;
    let quad = QuadratureConfig::default();
    Ok(sweep::spectrum(
        &atom,
        &motion,
        &geom,
        cfg.run.n_max,
        verify.then_some(&quad),
    )?)
}

pub fn sweep(cfg: &RunConfig, preset: Preset) -> Result<SweepResult, CliError> {
    let section = cfg.sweep.clone().unwrap_or_default();
    match preset {
        Preset::Fig2 => {
            let points = section.points.unwrap_or(sweep::FIG2_POINTS);
            let a = Axis::linspace("a_tilde", 0.0, sweep::FIG2_A_TILDE_MAX, points)?;
            let n: Vec<u32> = (1..=sweep::FIG2_N_MAX).collect();
            if section.absolute {
                let atom = cfg.atom()?;
                let motion = cfg.motion()?;
                Ok(sweep::fig2_surface_absolute(
                    &a.values,
                    &n,
                    atom.g(),
                    motion.omega(),
                )?)
            } else {
                Ok(sweep::fig2_surface(&a.values, &n)?)
            }
        }
        Preset::Fig3 => match section.points {
            None => Ok(sweep::fig3_default()?),
            Some(points) => {
                let step = sweep::FIG3_A_MAX / points as f64;
                let amps = Axis::linspace("amplitude_m", step, sweep::FIG3_A_MAX, points)?;
                let alphas = Axis::linspace("alpha", sweep::FIG3_ALPHA_MIN, sweep::FIG3_ALPHA_MAX, points)?;
                let omega = vibrad::units::hz_to_rad_per_s(sweep::FIG3_OMEGA_HZ);
                Ok(sweep::fig3_surface(&amps.values, &alphas.values, omega)?)
            }
        },
        Preset::Custom => custom_sweep(cfg, &section.axis1, &section.axis2),
    }
}

fn custom_axis(section: &Option<AxisSection>, which: &str) -> Result<Axis, CliError> {
    let section = section
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("[sweep]: custom preset needs {which}")))?;
    if !CUSTOM_AXES.iter().any(|(name, _)| *name == section.name) {
        let known: Vec<&str> = CUSTOM_AXES.iter().map(|(n, _)| *n).collect();
        return Err(CliError::Config(format!(
            "[sweep.{which}]: unknown parameter {:?} (expected one of {})",
            section.name,
            known.join(", ")
        )));
    }
    Axis::linspace(
        section.name.clone(),
        section.start.0,
        section.stop.0,
        section.count,
    )
    .map_err(|e| CliError::Config(format!("[sweep.{which}]: {e}")))
}

fn override_param(cfg: &mut RunConfig, name: &str, value: f64) -> Result<(), CliError> {
    let missing = |section: &str| CliError::Config(format!("sweeping {name} needs a [{section}] section"));
    let unfit = || {
        CliError::Config(format!(
            "{name} does not apply to the configured motion or geometry"
        ))
    };
    match name {
        "n" => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(CliError::Config(format!(
                    "sideband index {value} is not a positive integer"
                )));
            }
            cfg.run.n = value as u32;
        }
        "alpha" | "coupling_hz" | "transition_hz" => {
            let atom = cfg.atom.as_mut().ok_or_else(|| missing("atom"))?;
            match name {
                "alpha" => {
                    atom.alpha = Some(value);
                    atom.coupling_hz = None;
                }
                "coupling_hz" => {
                    atom.coupling_hz = Some(crate::config::Frequency(value));
                    atom.alpha = None;
                }
                _ => atom.transition_hz.0 = value,
            }
        }
        "amplitude" | "radius" | "frequency_hz" => {
            let motion = cfg.motion.as_mut().ok_or_else(|| missing("motion"))?;
            match (name, motion) {
                ("amplitude", MotionSection::Sho { amplitude, .. }) => amplitude.0 = value,
                ("radius", MotionSection::Rotation { radius, .. }) => radius.0 = value,
                (
                    "frequency_hz",
                    MotionSection::Sho { frequency_hz, .. }
                    | MotionSection::Rotation { frequency_hz, .. }
                    | MotionSection::General { frequency_hz, .. },
                ) => frequency_hz.0 = value,
                _ => return Err(unfit()),
            }
        }
        "z0" | "length" => {
            let geom = cfg.geometry.as_mut().ok_or_else(|| missing("geometry"))?;
            match (name, geom) {
                ("z0", GeometrySection::Mirror { z0 } | GeometrySection::Cavity { z0, .. }) => z0.0 = value,
                ("length", GeometrySection::Cavity { length, .. }) => length.0 = value,
                _ => return Err(unfit()),
            }
        }
        _ => return Err(unfit()),
    }
    Ok(())
}

/// Rate of the `[run]` sideband over two named parameters. Cells where the
/// line does not exist (below threshold, or no resonant cavity mode) are 0.
fn custom_sweep(
    cfg: &RunConfig,
    axis1: &Option<AxisSection>,
    axis2: &Option<AxisSection>,
) -> Result<SweepResult, CliError> {
    let a1 = custom_axis(axis1, "axis1")?;
    let a2 = custom_axis(axis2, "axis2")?;
    if a1.name == a2.name {
        return Err(CliError::Config("[sweep]: axis1 and axis2 must differ".into()));
    }
    // surface config errors once, before the parallel sweep
    let mut probe = cfg.clone();
    override_param(&mut probe, &a1.name, a1.values[0])?;
    override_param(&mut probe, &a2.name, a2.values[0])?;
    probe.physics()?;

    let grid = SweepGrid::new(a1, a2);
    let cell = |x: f64, y: f64| -> vibrad::Result<f64> {
        let mut local = cfg.clone();
        let apply = |local: &mut RunConfig| -> Result<f64, CliError> {
            override_param(local, &grid.axis1.name, x)?;
            override_param(local, &grid.axis2.name, y)?;
            let (atom, motion, geom) = local.physics()?;
            let run = &local.run;
            match line_rate(&atom, &motion, &geom, run.n, run.mode, run.branch.into()) {
                Ok(line) => Ok(line.rate),
                Err(CliError::Physics(Error::NoSideband { .. } | Error::OffResonance { .. })) => Ok(0.0),
                Err(CliError::Physics(Error::Domain(msg))) if msg.contains("no cavity mode") => Ok(0.0),
                Err(e) => Err(e),
            }
        };
        apply(&mut local).map_err(|e| match e {
            CliError::Physics(inner) => inner,
            other => Error::Domain(other.to_string()),
        })
    };
    let values = sweep::evaluate_grid(&grid, cell)?;
    let mut metadata = std::collections::BTreeMap::new();
    metadata.insert("preset".to_string(), "custom".to_string());
    metadata.insert("normalization".to_string(), "absolute-hz".to_string());
    metadata.insert("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    metadata.insert("sideband".to_string(), cfg.run.n.to_string());
    Ok(SweepResult {
        grid,
        normalization: sweep::Normalization::AbsoluteHz,
        values,
        exact: None,
        in_domain: None,
        metadata,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const SELECTION_RULE_TOL: f64 = 1e-10;
pub const EQUIVALENCE_TOL: f64 = 1e-8;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn selection_rule_check() -> Result<OracleCheck, CliError> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for q in 2..=7u32 {
        for p in (1..=20u32).filter(|&p| gcd(p, q) == 1) {
            for x in [0.3, 1.0, 2.5, 7.0] {
                worst = worst
                    .max(rational_period_integral(x, p, q)?.abs())
                    .max(verify_selection_rule(p, q, x)?);
                cases += 1;
            }
        }
    }
    Ok(OracleCheck {
        name: "selection_rule",
        cases,
        max_deviation: worst,
        threshold: SELECTION_RULE_TOL,
        pass: worst < SELECTION_RULE_TOL,
    })
}

/// Closed forms against the oracle on random free-space, mirror and cavity
/// configurations drawn from `seed`.
fn equivalence_check(seed: u64, draws: usize) -> Result<OracleCheck, CliError> {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega_mech = 1.0e9;
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let a_tilde = rng.gen_range(0.05..25.0);
        let z0_tilde = rng.gen_range(0.0..TAU);
        let n = rng.gen_range(1..=20u32);
        let omega0 = rng.gen_range(0.05..0.95) * omega_mech;
        let atom = AtomParams::new(omega0, rng.gen_range(0.01..1.0) * omega0)?;
        let omega = f64::from(n) * omega_mech - omega0;
        let (closed, checked) = match rng.gen_range(0..3u32) {
            0 => {
                let sho = Sho::new(a_tilde / wavenumber(omega), omega_mech)?;
                let closed = free_space_rate(&atom, &sho, n)?.rate;
                let out =
                    oracle::one_period_amplitude(&sho.into(), &Geometry::FreeSpace, &atom, omega, &cfg)?;
                (closed, out.rate)
            }
            1 => {
                let k = wavenumber(omega);
                let motion: MotionProfile = Sho::new(a_tilde / k, omega_mech)?.into();
                let lift = TAU * (1.0 + (a_tilde / TAU).ceil());
                let mirror = Mirror::new((z0_tilde + lift) / k)?;
                let closed = mirror_rate(&atom, &motion, &mirror, n)?.rate;
                let out =
                    oracle::one_period_amplitude(&motion, &Geometry::Mirror(mirror), &atom, omega, &cfg)?;
                (closed, out.rate)
            }
            _ => {
                let m_min = ((2.0 * a_tilde + PI) / PI).ceil() as u32 + 1;
                let m = rng.gen_range(m_min..m_min + 6);
                let photons = rng.gen_range(0..5u32);
                let length = PI * f64::from(m) * SPEED_OF_LIGHT / omega;
                let k = PI * f64::from(m) / length;
                let mut theta = z0_tilde;
                while theta <= a_tilde {
                    theta += PI;
                }
                let cavity = Cavity::new(length, theta / k, photons)?;
                let sho = Sho::new(a_tilde / k, omega_mech)?;
                let closed = cavity_rate(&atom, &sho, &cavity, n, m, Branch::EmitExcite)?.rate;
                let out =
                    oracle::cavity_amplitude(&sho.into(), &cavity, &atom, n, m, Branch::EmitExcite, &cfg)?;
                (closed, out.rate)
            }
        };
        worst = worst.max(relative_deviation(closed, checked, 0.0));
    }
    Ok(OracleCheck {
        name: "oracle_equivalence",
        cases: draws,
        max_deviation: worst,
        threshold: EQUIVALENCE_TOL,
        pass: worst < EQUIVALENCE_TOL,
    })
}

pub fn oracle_suite(seed: u64, draws: usize) -> Result<OracleReport, CliError> {
    Ok(OracleReport {
        seed,
        checks: vec![selection_rule_check()?, equivalence_check(seed, draws)?],
    })
}
