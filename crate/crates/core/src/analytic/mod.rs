//! Special functions, wall traces, and closed-form reference solutions.

mod bump;
mod erfc;
mod shear;
mod trace;

pub use bump::BumpSpec;
pub use erfc::{erf, erfc, erfc_prime};
pub use shear::{shear_exact, AnalyticShear};
pub use trace::{EulerTrace, TimeModulation};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// The x2 profile of the normal corrector component at layer width `delta`:
/// R = (1/sqrt(pi) - int_1^{x2} eta) - exp(-z^2)/sqrt(pi) + z erfc(z)
/// with z = x2 / delta. The first parenthesis vanishes identically for
/// x2 >= 2.
pub fn r_profile_scaled(x2: f64, delta: f64, spec: &BumpSpec) -> f64 {
    let z = x2 / delta;
    let head = 1.0 / PI.sqrt() - spec.eta_integral(x2);
    head - (-z * z).exp() / PI.sqrt() + z * erfc(z)
}

/// R profile at the Prandtl scale delta = sqrt(4 nu t).
pub fn r_profile(x2: f64, t: f64, nu: f64, spec: &BumpSpec) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::invalid("r_profile requires t > 0"));
    }
    if nu <= 0.0 {
        return Err(Error::invalid("r_profile requires nu > 0"));
    }
    Ok(r_profile_scaled(x2, (4.0 * nu * t).sqrt(), spec))
}
