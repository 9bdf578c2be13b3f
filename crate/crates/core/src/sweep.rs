//! Grid sweeps and figure data.
//!
//! Cells are evaluated in parallel with rayon; results are collected by cell
//! index, so output never depends on scheduling.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AtomParams, Branch, Geometry, MotionProfile, Sho, Sideband};
use crate::oracle::{self, QuadratureConfig};
use crate::rates::{allowed_sidebands, free_space_rate, small_amplitude_formula, SMALL_AMPLITUDE_LIMIT};
use crate::specfun::bessel_j;
use crate::units::{hz_to_rad_per_s, NANOMETRE, SPEED_OF_LIGHT};

pub const FIG2_POINTS: usize = 512;
pub const FIG2_A_TILDE_MAX: f64 = 30.0;
pub const FIG2_N_MAX: u32 = 30;
pub const FIG3_POINTS: usize = 128;
pub const FIG3_A_MAX: f64 = 10.0 * NANOMETRE;
pub const FIG3_ALPHA_MIN: f64 = 0.1;
pub const FIG3_ALPHA_MAX: f64 = 1.0;
/// Ω/2π = 10 GHz.
pub const FIG3_OMEGA_HZ: f64 = 1.0e10;

/// Relative oracle/closed-form deviation tolerated by [`spectrum`].
pub const VERIFY_TOL: f64 = 1e-6;

/// One named, strictly monotone sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::Domain(format!("axis {name} is empty")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("axis {name} has non-finite values")));
        }
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::Domain(format!("axis {name} is not strictly monotone")));
        }
        Ok(Self { name, values })
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(name: impl Into<String>, start: f64, stop: f64, count: usize) -> Result<Self> {
        let values = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (stop - start) / (count - 1) as f64;
                (0..count).map(|i| start + step * i as f64).collect()
            }
        };
        Self::new(name, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Parameters held fixed over the sweep.
    pub fixed: BTreeMap<String, f64>,
}

impl SweepGrid {
    pub fn new(axis1: Axis, axis2: Axis) -> Self {
        Self {
            axis1,
            axis2,
            fixed: BTreeMap::new(),
        }
    }

    pub fn with_fixed(mut self, name: impl Into<String>, value: f64) -> Self {
        self.fixed.insert(name.into(), value);
        self
    }

    pub fn cells(&self) -> usize {
        self.axis1.len() * self.axis2.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Values are Jₙ²(Ã); multiply by 2πg²/Ω for Hz.
    PrefactorOmitted,
    AbsoluteHz,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalization::PrefactorOmitted => "prefactor-omitted",
            Normalization::AbsoluteHz => "absolute-hz",
        }
    }
}

/// Row-major matrix of rates over a [`SweepGrid`] (axis1 indexes rows).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub grid: SweepGrid,
    pub normalization: Normalization,
    pub values: Vec<f64>,
    /// Exact Bessel rate alongside an approximate surface.
    pub exact: Option<Vec<f64>>,
    /// Per-cell approximation-domain flag.
    pub in_domain: Option<Vec<bool>>,
    pub metadata: BTreeMap<String, String>,
}

impl SweepResult {
    pub fn rows(&self) -> usize {
        self.grid.axis1.len()
    }

    pub fn cols(&self) -> usize {
        self.grid.axis2.len()
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    /// (row, col, value) of the largest cell.
    pub fn argmax(&self) -> (usize, usize, f64) {
        let (idx, value) =
            self.values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, v)| if v > best.1 { (i, v) } else { best },
                );
        (idx / self.cols(), idx % self.cols(), value)
    }
}

fn base_metadata(preset: &str, normalization: Normalization) -> BTreeMap<String, String> {
    let mut meta = BTreeMap::new();
    meta.insert("preset".to_string(), preset.to_string());
    meta.insert("normalization".to_string(), normalization.as_str().to_string());
    meta.insert("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    meta
}

/// Evaluates `cell(axis1_value, axis2_value)` on every grid point in parallel.
pub fn evaluate_grid<F>(grid: &SweepGrid, cell: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let cols = grid.axis2.len();
    (0..grid.cells())
        .into_par_iter()
        .map(|idx| cell(grid.axis1.values[idx / cols], grid.axis2.values[idx % cols]))
        .collect()
}

fn index_axis(name: &str, n: &[u32]) -> Result<Axis> {
    if n.contains(&0) {
        return Err(Error::Domain("sideband indices start at 1".into()));
    }
    Axis::new(name, n.iter().map(|&v| f64::from(v)).collect())
}

/// Jₙ²(Ã) over Ã × n: the free-space rate with 2πg²/Ω omitted.
pub fn fig2_surface(a_tilde: &[f64], n: &[u32]) -> Result<SweepResult> {
    if a_tilde.iter().any(|&a| a < 0.0) {
        return Err(Error::Domain("A~ must be non-negative".into()));
    }
    let grid = SweepGrid::new(Axis::new("a_tilde", a_tilde.to_vec())?, index_axis("n", n)?);
    let values = evaluate_grid(&grid, |a, n| {
        let j = bessel_j(n as u32, a)?;
        Ok(j * j)
    })?;
    Ok(SweepResult {
        grid,
        normalization: Normalization::PrefactorOmitted,
        values,
        exact: None,
        in_domain: None,
        metadata: base_metadata("fig2", Normalization::PrefactorOmitted),
    })
}

/// [`fig2_surface`] with the 2πg²/Ω prefactor restored (Hz).
pub fn fig2_surface_absolute(a_tilde: &[f64], n: &[u32], g: f64, omega_mech: f64) -> Result<SweepResult> {
    crate::error::ensure_positive("g", g)?;
    crate::error::ensure_positive("Omega", omega_mech)?;
    let mut result = fig2_surface(a_tilde, n)?;
    let prefactor = 2.0 * PI * g * g / omega_mech;
    result.values.iter_mut().for_each(|v| *v *= prefactor);
    result.normalization = Normalization::AbsoluteHz;
    result.grid = result.grid.with_fixed("g", g).with_fixed("omega", omega_mech);
    result.metadata = base_metadata("fig2", Normalization::AbsoluteHz);
    Ok(result)
}

/// Default fig2 grid: 512 values of Ã on [0, 30] by n = 1..30.
pub fn fig2_default() -> Result<SweepResult> {
    let a = Axis::linspace("a_tilde", 0.0, FIG2_A_TILDE_MAX, FIG2_POINTS)?;
    let n: Vec<u32> = (1..=FIG2_N_MAX).collect();
    fig2_surface(&a.values, &n)
}

/// Small-amplitude cQED rate over amplitude × α at ω₀ = Ω/2, with the exact
/// first-sideband rate alongside. Cells with Ã ≥ 0.1 are flagged, not dropped.
pub fn fig3_surface(amplitudes: &[f64], alphas: &[f64], omega_mech: f64) -> Result<SweepResult> {
    crate::error::ensure_positive("Omega", omega_mech)?;
    if amplitudes.iter().chain(alphas).any(|&v| v < 0.0) {
        return Err(Error::Domain("amplitudes and alphas must be non-negative".into()));
    }
    let grid = SweepGrid::new(
        Axis::new("amplitude_m", amplitudes.to_vec())?,
        Axis::new("alpha", alphas.to_vec())?,
    )
    .with_fixed("omega", omega_mech)
    .with_fixed("omega0", 0.5 * omega_mech);
    let omega0 = 0.5 * omega_mech;
    let values = evaluate_grid(&grid, |a, alpha| {
        Ok(small_amplitude_formula(alpha, a, omega_mech))
    })?;
    let exact = evaluate_grid(&grid, |a, alpha| {
        if alpha == 0.0 {
            return Ok(0.0);
        }
        let atom = AtomParams::with_alpha(omega0, alpha)?;
        Ok(free_space_rate(&atom, &Sho::new(a, omega_mech)?, 1)?.rate)
    })?;
    let cols = grid.axis2.len();
    let in_domain = (0..grid.cells())
        .map(|idx| {
            let a = grid.axis1.values[idx / cols];
            (omega_mech - omega0) * a / SPEED_OF_LIGHT < SMALL_AMPLITUDE_LIMIT
        })
        .collect();
    Ok(SweepResult {
        grid,
        normalization: Normalization::AbsoluteHz,
        values,
        exact: Some(exact),
        in_domain: Some(in_domain),
        metadata: base_metadata("fig3", Normalization::AbsoluteHz),
    })
}

/// Default fig3 grid: 128 amplitudes up to 10 nm by 128 α in [0.1, 1] at
/// Ω/2π = 10 GHz.
pub fn fig3_default() -> Result<SweepResult> {
    let step = FIG3_A_MAX / FIG3_POINTS as f64;
    let amps = Axis::linspace("amplitude_m", step, FIG3_A_MAX, FIG3_POINTS)?;
    let alphas = Axis::linspace("alpha", FIG3_ALPHA_MIN, FIG3_ALPHA_MAX, FIG3_POINTS)?;
    fig3_surface(&amps.values, &alphas.values, hz_to_rad_per_s(FIG3_OMEGA_HZ))
}

/// A sideband with its optional oracle cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLine {
    pub sideband: Sideband,
    pub oracle_rate: Option<f64>,
    /// Relative closed-form/oracle deviation.
    pub deviation: Option<f64>,
}

/// Relative deviation, treating two rates below `floor` as equal.
pub fn relative_deviation(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale <= floor {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Sideband ladder for a configuration. With `verify`, every line is
/// re-derived by the oracle and a deviation above [`VERIFY_TOL`] is an
/// integrity error. Sampled paths have no closed form; their lines come
/// from the oracle directly.
pub fn spectrum(
    atom: &AtomParams,
    motion: &MotionProfile,
    geom: &Geometry,
    n_max: u32,
    verify: Option<&QuadratureConfig>,
) -> Result<Vec<SpectrumLine>> {
    if let MotionProfile::General(path) = motion {
        let cfg = verify.copied().unwrap_or_default();
        let lines = oracle::general_trajectory_spectrum(path, geom, atom, n_max, &cfg)?;
        return Ok(lines
            .into_iter()
            .map(|sideband| SpectrumLine {
                sideband,
                oracle_rate: Some(sideband.rate),
                deviation: None,
            })
            .collect());
    }
    let lines = allowed_sidebands(atom, motion, geom, n_max)?;
    let Some(cfg) = verify else {
        return Ok(lines
            .into_iter()
            .map(|sideband| SpectrumLine {
                sideband,
                oracle_rate: None,
                deviation: None,
            })
            .collect());
    };
    lines
        .into_par_iter()
        .map(|line| {
            let checked = oracle_rate(atom, motion, geom, &line, cfg)?;
            let chi = match (geom, line.branch) {
                (Geometry::Cavity(c), Branch::EmitExcite) => f64::from(c.photons()) + 1.0,
                (Geometry::Cavity(c), Branch::AbsorbDeexcite) => f64::from(c.photons()),
                _ => 1.0,
            };
            let floor = 1e-14 * 8.0 * PI * chi * atom.g() * atom.g() / motion.omega();
            let deviation = relative_deviation(line.rate, checked, floor);
            if deviation > VERIFY_TOL {
                return Err(Error::Integrity {
                    n: line.n,
                    closed: line.rate,
                    oracle: checked,
                    relative: deviation,
                });
            }
            Ok(SpectrumLine {
                sideband: line,
                oracle_rate: Some(checked),
                deviation: Some(deviation),
            })
        })
        .collect()
}

/// Oracle rate for a closed-form line.
pub fn oracle_rate(
    atom: &AtomParams,
    motion: &MotionProfile,
    geom: &Geometry,
    line: &Sideband,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let out = match (geom, line.mode) {
        (Geometry::Cavity(c), Some(m)) => {
            oracle::cavity_amplitude(motion, c, atom, line.n, m, line.branch, cfg)?
        }
        _ => oracle::one_period_amplitude(motion, geom, atom, line.omega, cfg)?,
    };
    Ok(out.rate)
}
