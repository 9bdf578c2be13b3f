//! First-order photon-emission rates for a two-level atom driven along a
//! prescribed periodic trajectory, in free space, near a mirror or inside a
//! cavity.
//!
//! * [`specfun`]: Bessel Jₙ, Anger **J**ν and the rational-period integral 𝒥.
//! * [`rates`]: closed-form per-sideband rates for every geometry.
//! * [`oracle`]: direct quadrature of the one-period amplitude, used to
//!   cross-check every closed form.
//! * [`sweep`]: parallel grid sweeps and figure data.

pub mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod rates;
pub mod specfun;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use model::{
    AtomParams, Branch, Cavity, GeneralPeriodic, Geometry, Mirror, MotionProfile, Orientation, Rotation, Sho,
    Sideband,
};
pub use oracle::{OracleResult, QuadratureConfig};
pub use specfun::AccuracyBudget;
pub use sweep::{Axis, SweepGrid, SweepResult};
