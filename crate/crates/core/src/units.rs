//! Physical constants and unit conversions.
//!
//! Everything inside the library is an angular frequency in rad/s or a length
//! in metres. Ordinary frequencies (Hz) only appear at the CLI boundary.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact, SI).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

pub const NANOMETRE: f64 = 1e-9;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn hz_to_rad_per_s(f: f64) -> f64 {
    2.0 * PI * f
}

#[inline]
pub fn rad_per_s_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Wavenumber k = ω/c for an angular frequency.
#[inline]
pub fn wavenumber(omega: f64) -> f64 {
    omega / SPEED_OF_LIGHT
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hz_round_trip() {
        let f = 1.0e10;
        assert!((rad_per_s_to_hz(hz_to_rad_per_s(f)) - f).abs() <= f * 1e-15);
    }

    #[test]
    fn wavenumber_of_c_is_one() {
        assert_eq!(wavenumber(SPEED_OF_LIGHT), 1.0);
    }
}
