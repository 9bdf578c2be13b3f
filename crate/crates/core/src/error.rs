use thiserror::Error;

/// Errors raised by the special-function, rate, oracle and sweep layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {panels} panels: last estimates differ by {achieved:e} (tolerance {tolerance:e})")]
    Convergence {
        panels: usize,
        achieved: f64,
        tolerance: f64,
    },

    #[error("no sideband: n = {n} gives photon frequency {omega:e} rad/s, which is not positive")]
    NoSideband { n: u32, omega: f64 },

    #[error("cavity mode m = {m} is off resonance for sideband n = {n}: mismatch {mismatch:e} rad/s")]
    OffResonance { n: u32, m: u32, mismatch: f64 },

    #[error("(omega + omega0) / Omega = {omega_tilde} is not a positive integer; check the rational-period integral instead")]
    NonIntegerFrequency { omega_tilde: f64 },

    #[error("small-amplitude approximation needs A~ < 0.1, got {a_tilde}")]
    ApproximationDomain { a_tilde: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("oracle disagrees with closed form at n = {n}: closed {closed:e} Hz, oracle {oracle:e} Hz (relative {relative:e})")]
    Integrity {
        n: u32,
        closed: f64,
        oracle: f64,
        relative: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}
