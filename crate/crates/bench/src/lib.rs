//! Shared fixtures for the criterion benches.

use vibrad::units::SPEED_OF_LIGHT;
use vibrad::{AtomParams, MotionProfile, Sho};

/// Unit-coupling atom with ω₀ = 0.5 and an SHO (Ω = 1) whose sideband `n`
/// sees the dimensionless amplitude `a_tilde`.
pub fn sho_case(a_tilde: f64, n: u32) -> (AtomParams, MotionProfile, f64) {
    let omega0 = 0.5;
    let omega = f64::from(n) - omega0;
    let atom = AtomParams::new(omega0, 1.0).expect("valid atom");
    let sho = Sho::new(a_tilde * SPEED_OF_LIGHT / omega, 1.0).expect("valid motion");
    (atom, sho.into(), omega)
}
