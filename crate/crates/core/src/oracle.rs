//! Brute-force one-period transition amplitudes.
//!
//! The oracle integrates the first-order amplitude
//!
//! ```text
//! a = ∫_{−π}^{π} Φ*(τ) e^{inτ} dτ,    τ = Ωt,  n = (ω + ω₀)/Ω
//! ```
//!
//! directly from the trajectory, with Φ* the conjugated mode function
//! (travelling wave e^{∓ik·x} in free space, standing wave
//! e^{i(k·x − k_z z₀)} − c.c. with a mirror or inside a cavity). The rate is
//! (Ω/2π)(g²/Ω²)|a|², times χ± in a cavity. Nothing here calls into the
//! Bessel code, so agreement with [`crate::rates`] is a genuine cross-check.
//!
//! For integer n the integrand is 2π-periodic and entire in τ, so the
//! integration line can be moved to τ = t + iσ without changing the result.
//! σ is picked to minimise the largest modulus of the integrand along the
//! line, which keeps the relative error small even when |a| is exponentially
//! small (large n, small Ã).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::model::{
    AtomParams, Branch, Cavity, GeneralPeriodic, Geometry, MotionProfile, Orientation, Sideband,
};
use crate::quad::{composite, refine, Refinement};
use crate::rates::{cavity_mismatch, resonant_mode, RESONANCE_TOL};
use crate::units::wavenumber;

/// Relative tolerance on (ω + ω₀)/Ω being an integer.
pub const INTEGER_TOL: f64 = 1e-9;

const MAX_SHIFT: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    initial_panels: usize,
    rel_tol: f64,
    max_doublings: u32,
    contour_shift: bool,
}

impl QuadratureConfig {
    pub fn new(initial_panels: usize, rel_tol: f64, max_doublings: u32) -> Result<Self> {
        if initial_panels < 16 {
            return Err(Error::Domain(format!(
                "initial_panels must be at least 16, got {initial_panels}"
            )));
        }
        ensure_positive("rel_tol", rel_tol)?;
        Ok(Self {
            initial_panels,
            rel_tol,
            max_doublings,
            contour_shift: true,
        })
    }

    /// Integrate on the real τ axis instead of a shifted line.
    pub fn with_contour_shift(mut self, enabled: bool) -> Self {
        self.contour_shift = enabled;
        self
    }

    pub fn initial_panels(&self) -> usize {
        self.initial_panels
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_doublings(&self) -> u32 {
        self.max_doublings
    }

    pub fn contour_shift(&self) -> bool {
        self.contour_shift
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_panels: 16,
            rel_tol: 1e-12,
            max_doublings: 12,
            contour_shift: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    /// ∫ over one period in scaled time, dimensionless.
    pub amplitude: Complex64,
    /// Hz.
    pub rate: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Direction of a free-space travelling mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Travel {
    /// Mode e^{−i(ωt − kz)}.
    Right,
    /// Mode e^{−i(ωt + kz)}.
    Left,
}

/// Band-limited interpolant of uniform samples, evaluable at complex τ.
#[derive(Debug, Clone)]
struct TrigSeries {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigSeries {
    fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        let mut buffer: Vec<Complex64> = samples.iter().map(|&z| Complex64::new(z, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(count).process(&mut buffer);
        let scale = 1.0 / count as f64;
        let top = count / 2;
        let mut cos = Vec::with_capacity(top);
        let mut sin = Vec::with_capacity(top);
        for (j, x) in buffer.iter().enumerate().take(top + 1).skip(1) {
            if count.is_multiple_of(2) && j == top {
                cos.push(x.re * scale);
                sin.push(0.0);
            } else {
                cos.push(2.0 * x.re * scale);
                sin.push(-2.0 * x.im * scale);
            }
        }
        Self {
            mean: buffer[0].re * scale,
            cos,
            sin,
        }
    }

    fn eval(&self, tau: Complex64) -> Complex64 {
        let w = (Complex64::i() * tau).exp();
        let w_inv = w.inv();
        let (mut up, mut down) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let mut total = Complex64::new(self.mean, 0.0);
        for (a, b) in self.cos.iter().zip(&self.sin) {
            up *= w;
            down *= w_inv;
            let c = 0.5 * (up + down);
            let s = (up - down) * Complex64::new(0.0, -0.5);
            total += c * *a + s * *b;
        }
        total
    }
}

#[derive(Debug, Clone)]
enum Path {
    /// x = A sin τ along z (or y).
    Sine {
        amplitude: f64,
        along_y: bool,
    },
    /// (y, z) = R(cos τ, sin τ).
    Circle {
        radius: f64,
    },
    Sampled(TrigSeries),
}

impl Path {
    fn from_motion(motion: &MotionProfile) -> Self {
        match motion {
            MotionProfile::Sho(s) => Path::Sine {
                amplitude: s.amplitude(),
                along_y: matches!(s.orientation(), Orientation::Parallel { .. }),
            },
            MotionProfile::Rotation(r) => Path::Circle { radius: r.radius() },
            MotionProfile::General(g) => Path::Sampled(TrigSeries::from_samples(g.samples())),
        }
    }

    /// (y, z) at complex scaled time.
    fn position(&self, tau: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Path::Sine { amplitude, along_y } => {
                let x = tau.sin() * *amplitude;
                if *along_y {
                    (x, zero)
                } else {
                    (zero, x)
                }
            }
            Path::Circle { radius } => (tau.cos() * *radius, tau.sin() * *radius),
            Path::Sampled(series) => (zero, series.eval(tau)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    /// e^{i(φ − offset)} − e^{−i(φ − offset)}
    Standing { offset: f64 },
    /// e^{−iφ} (right) or e^{+iφ} (left)
    Travelling(Travel),
}

/// Everything needed to evaluate the integrand for one sideband.
#[derive(Debug, Clone)]
struct Integrand {
    path: Path,
    k_y: f64,
    k_z: f64,
    mode: Mode,
    n: f64,
}

impl Integrand {
    fn phase(&self, tau: Complex64) -> Complex64 {
        let (y, z) = self.path.position(tau);
        y * self.k_y + z * self.k_z
    }

    fn value(&self, tau: Complex64) -> Complex64 {
        let phi = self.phase(tau);
        let i = Complex64::i();
        let field = match self.mode {
            Mode::Standing { offset } => {
                let u = phi - offset;
                (i * u).exp() - (-i * u).exp()
            }
            Mode::Travelling(Travel::Right) => (-i * phi).exp(),
            Mode::Travelling(Travel::Left) => (i * phi).exp(),
        };
        field * (i * self.n * tau).exp()
    }

    /// Upper bound on log|integrand| at τ, computed without exponentiating.
    fn log_bound(&self, tau: Complex64) -> f64 {
        let phi = self.phase(tau);
        let field = match self.mode {
            Mode::Standing { .. } => phi.im.abs() + std::f64::consts::LN_2,
            Mode::Travelling(Travel::Right) => phi.im,
            Mode::Travelling(Travel::Left) => -phi.im,
        };
        field - self.n * tau.im
    }

    /// max_t log|f(t + iσ)| on a coarse grid.
    fn line_bound(&self, sigma: f64, grid: usize) -> f64 {
        (0..grid)
            .map(|j| {
                let t = -PI + TAU * (j as f64 + 0.5) / grid as f64;
                self.log_bound(Complex64::new(t, sigma))
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Golden-section search for the σ minimising the line bound. The
    /// maximum of log|f| along horizontal lines is convex in σ (three-lines
    /// theorem), so the search finds the global minimum on [0, MAX_SHIFT].
    fn best_shift(&self, grid: usize) -> (f64, f64) {
        let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0, MAX_SHIFT);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let mut f1 = self.line_bound(x1, grid);
        let mut f2 = self.line_bound(x2, grid);
        for _ in 0..60 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = self.line_bound(x1, grid);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = self.line_bound(x2, grid);
            }
        }
        let candidate = 0.5 * (lo + hi);
        let at_candidate = self.line_bound(candidate, grid);
        let at_zero = self.line_bound(0.0, grid);
        if at_zero <= at_candidate {
            (0.0, at_zero)
        } else {
            (candidate, at_candidate)
        }
    }

    fn reach(&self, motion: &MotionProfile) -> f64 {
        (self.k_y.abs() + self.k_z.abs()) * motion.reach()
    }
}

fn build_integrand(
    motion: &MotionProfile,
    geom: &Geometry,
    k: f64,
    n: u32,
    travel: Travel,
) -> Result<Integrand> {
    geom.admit(motion)?;
    let path = Path::from_motion(motion);
    let delta = match motion {
        MotionProfile::Sho(s) => match s.orientation() {
            Orientation::Perpendicular => 0.0,
            Orientation::Parallel { delta } => delta,
        },
        MotionProfile::Rotation(r) => r.delta(),
        MotionProfile::General(_) => 0.0,
    };
    let (k_y, k_z) = (k * delta.sin(), k * delta.cos());
    let mode = match geom {
        Geometry::FreeSpace => Mode::Travelling(travel),
        Geometry::Mirror(m) => Mode::Standing { offset: k_z * m.z0() },
        Geometry::Cavity(c) => Mode::Standing { offset: k_z * c.z0() },
    };
    Ok(Integrand {
        path,
        k_y,
        k_z,
        mode,
        n: f64::from(n),
    })
}

struct Integrated {
    amplitude: Complex64,
    error: f64,
    panels: usize,
}

fn integrate(integrand: &Integrand, motion: &MotionProfile, cfg: &QuadratureConfig) -> Result<Integrated> {
    let scale = integrand.n + integrand.reach(motion);
    let grid = 256usize.max((16.0 * scale).ceil() as usize);
    let (sigma, log_peak) = if cfg.contour_shift {
        integrand.best_shift(grid)
    } else {
        (0.0, integrand.line_bound(0.0, grid))
    };
    let start = cfg.initial_panels.max((8.0 * scale).ceil() as usize);
    let stop = Refinement {
        start_panels: start,
        max_panels: start << cfg.max_doublings,
        rel_tol: cfg.rel_tol,
        abs_floor: TAU * log_peak.exp() * 256.0 * f64::EPSILON,
    };
    let f = |t: f64| integrand.value(Complex64::new(t, sigma));
    let estimate = refine(&f, -PI, PI, &stop)?;
    Ok(Integrated {
        amplitude: estimate.value,
        error: estimate.error / estimate.value.norm().max(f64::MIN_POSITIVE),
        panels: estimate.panels,
    })
}

fn rate_from_amplitude(atom: &AtomParams, omega_mech: f64, chi: f64, amplitude: Complex64) -> f64 {
    omega_mech / TAU * atom.g() * atom.g() / (omega_mech * omega_mech) * amplitude.norm_sqr() * chi
}

fn integer_frequency(omega: f64, omega0: f64, omega_mech: f64) -> Result<u32> {
    let omega_tilde = (omega + omega0) / omega_mech;
    let n = omega_tilde.round();
    if n < 1.0 || (omega_tilde - n).abs() > INTEGER_TOL * omega_tilde || n > f64::from(u32::MAX) {
        return Err(Error::NonIntegerFrequency { omega_tilde });
    }
    Ok(n as u32)
}

/// One-period amplitude for emission of a photon of angular frequency
/// `omega` with excitation of the atom. Free space uses the right-moving
/// mode; a cavity requires `omega` to be a cavity mode and scales the rate
/// by χ₊ = N + 1.
pub fn one_period_amplitude(
    traj: &MotionProfile,
    geom: &Geometry,
    atom: &AtomParams,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    ensure_positive("omega", omega)?;
    match geom {
        Geometry::Cavity(cavity) => {
            let m = (omega / cavity.mode_frequency(1)).round();
            if m < 1.0 || (omega - cavity.mode_frequency(m as u32)).abs() > INTEGER_TOL * omega {
                return Err(Error::Domain(format!(
                    "omega = {omega} rad/s is not a mode of the cavity"
                )));
            }
            let n = integer_frequency(omega, atom.omega0(), traj.omega())?;
            cavity_amplitude(traj, cavity, atom, n, m as u32, Branch::EmitExcite, cfg)
        }
        _ => travelling_or_mirror(traj, geom, atom, omega, Travel::Right, cfg),
    }
}

/// Free-space amplitude for a chosen travelling direction.
pub fn free_space_mode_amplitude(
    traj: &MotionProfile,
    travel: Travel,
    atom: &AtomParams,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    ensure_positive("omega", omega)?;
    travelling_or_mirror(traj, &Geometry::FreeSpace, atom, omega, travel, cfg)
}

fn travelling_or_mirror(
    traj: &MotionProfile,
    geom: &Geometry,
    atom: &AtomParams,
    omega: f64,
    travel: Travel,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    let omega_mech = traj.omega();
    let n = integer_frequency(omega, atom.omega0(), omega_mech)?;
    let integrand = build_integrand(traj, geom, wavenumber(omega), n, travel)?;
    let out = integrate(&integrand, traj, cfg)?;
    Ok(OracleResult {
        amplitude: out.amplitude,
        rate: rate_from_amplitude(atom, omega_mech, 1.0, out.amplitude),
        error_estimate: out.error,
        panels_used: out.panels,
    })
}

/// Amplitude for sideband `n` and cavity mode `m` on either branch. The
/// de-excitation branch integrates the same standing wave against the
/// detuning ω₀ − ω_m = nΩ and is weighted by χ₋ = N.
pub fn cavity_amplitude(
    traj: &MotionProfile,
    cavity: &Cavity,
    atom: &AtomParams,
    n: u32,
    m: u32,
    branch: Branch,
    cfg: &QuadratureConfig,
) -> Result<OracleResult> {
    let omega_mech = traj.omega();
    let mismatch = cavity_mismatch(atom, omega_mech, cavity, n, m, branch);
    if n == 0 || m == 0 || mismatch.abs() > RESONANCE_TOL * omega_mech {
        return Err(Error::OffResonance { n, m, mismatch });
    }
    let chi = match branch {
        Branch::EmitExcite => f64::from(cavity.photons()) + 1.0,
        Branch::AbsorbDeexcite => f64::from(cavity.photons()),
    };
    let geom = Geometry::Cavity(*cavity);
    let integrand = build_integrand(traj, &geom, cavity.mode_wavenumber(m), n, Travel::Right)?;
    let out = integrate(&integrand, traj, cfg)?;
    Ok(OracleResult {
        amplitude: out.amplitude,
        rate: rate_from_amplitude(atom, omega_mech, chi, out.amplitude),
        error_estimate: out.error,
        panels_used: out.panels,
    })
}

/// Fixed-panel amplitude on the real axis or the optimally shifted line;
/// used to study convergence of the composite rule.
pub fn amplitude_with_panels(
    traj: &MotionProfile,
    geom: &Geometry,
    atom: &AtomParams,
    omega: f64,
    panels: usize,
    contour_shift: bool,
) -> Result<Complex64> {
    let n = integer_frequency(omega, atom.omega0(), traj.omega())?;
    let k = match geom {
        Geometry::Cavity(c) => c.mode_wavenumber((omega / c.mode_frequency(1)).round() as u32),
        _ => wavenumber(omega),
    };
    let integrand = build_integrand(traj, geom, k, n, Travel::Right)?;
    let scale = integrand.n + integrand.reach(traj);
    let grid = 256usize.max((16.0 * scale).ceil() as usize);
    let sigma = if contour_shift {
        integrand.best_shift(grid).0
    } else {
        0.0
    };
    let f = |t: f64| integrand.value(Complex64::new(t, sigma));
    Ok(composite(&f, -PI, PI, panels))
}

/// |𝒥(x; p, q)| by dense quadrature over the full period 2πq of
/// exp[i(x sin θ − (p/q)θ)]. Non-integer p/q must give (numerically) zero.
pub fn verify_selection_rule(p: u32, q: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if p == 0 || q == 0 {
        return Err(Error::Domain(format!(
            "p and q must be positive, got p={p}, q={q}"
        )));
    }
    let nu = f64::from(p) / f64::from(q);
    let half = PI * f64::from(q);
    let f = |theta: f64| Complex64::from_polar(1.0, x * theta.sin() - nu * theta);
    let start = 64 * q as usize * (1 + x.abs().ceil() as usize);
    let stop = Refinement {
        start_panels: start,
        max_panels: start << 8,
        rel_tol: 1e-13,
        abs_floor: 1e-13 * 2.0 * half,
    };
    let value = refine(&f, -half, half, &stop)?.value / (2.0 * half);
    Ok(value.norm())
}

/// Emission spectrum of a sampled periodic path, one oracle evaluation per
/// sideband. The path is reconstructed by trigonometric interpolation.
pub fn general_trajectory_spectrum(
    traj: &GeneralPeriodic,
    geom: &Geometry,
    atom: &AtomParams,
    n_max: u32,
    cfg: &QuadratureConfig,
) -> Result<Vec<Sideband>> {
    let motion = MotionProfile::General(traj.clone());
    geom.admit(&motion)?;
    let omega_mech = traj.omega();
    let mut lines = Vec::new();
    for n in 1..=n_max {
        match geom {
            Geometry::Cavity(cavity) => {
                let mut branches = vec![Branch::EmitExcite];
                if cavity.photons() > 0 {
                    branches.push(Branch::AbsorbDeexcite);
                }
                for branch in branches {
                    if let Some(m) = resonant_mode(atom, omega_mech, cavity, n, branch) {
                        let out = cavity_amplitude(&motion, cavity, atom, n, m, branch, cfg)?;
                        lines.push(Sideband {
                            n,
                            mode: Some(m),
                            omega: cavity.mode_frequency(m),
                            rate: out.rate,
                            branch,
                        });
                    }
                }
            }
            _ => {
                let omega = f64::from(n) * omega_mech - atom.omega0();
                if omega <= 0.0 {
                    continue;
                }
                let out = travelling_or_mirror(&motion, geom, atom, omega, Travel::Right, cfg)?;
                lines.push(Sideband {
                    n,
                    mode: None,
                    omega,
                    rate: out.rate,
                    branch: Branch::EmitExcite,
                });
            }
        }
    }
    Ok(lines)
}
