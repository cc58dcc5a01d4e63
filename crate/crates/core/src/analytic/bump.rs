//! The smooth bump used to give the tangential corrector zero mass in x2:
//! the standard mollifier profile on (1, 2), normalized so its integral is
//! exactly 1/sqrt(pi).

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use std::f64::consts::PI;

/// Unnormalized mollifier in the centered variable s = 2r - 3 in (-1, 1).
#[inline]
fn kernel(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

#[derive(Debug, Clone)]
pub struct BumpSpec {
    amplitude: f64,
    /// Realized sup |eta'| and sup |eta''| (the C_eta of the scaling bounds).
    pub c_eta_first: f64,
    pub c_eta_second: f64,
}

impl BumpSpec {
    /// The normalized bump. The amplitude is fixed once by quadrature so
    /// that the mass over [1, 2] equals 1/sqrt(pi).
    pub fn standard() -> BumpSpec {
        let raw_mass = adaptive_simpson(&|r| kernel(2.0 * r - 3.0), 1.0, 2.0, 1e-14);
        let amplitude = (1.0 / PI.sqrt()) / raw_mass;
        let mut spec = BumpSpec { amplitude, c_eta_first: 0.0, c_eta_second: 0.0 };
        let n = 4000;
        let (mut m1, mut m2) = (0.0f64, 0.0f64);
        for k in 1..n {
            let r = 1.0 + k as f64 / n as f64;
            m1 = m1.max(spec.eta_prime(r).abs());
            m2 = m2.max(spec.eta_second(r).abs());
        }
        spec.c_eta_first = m1;
        spec.c_eta_second = m2;
        spec
    }

    /// Construct with an explicit amplitude; rejected unless the resulting
    /// mass is 1/sqrt(pi) to 1e-12.
    pub fn with_amplitude(amplitude: f64) -> Result<BumpSpec> {
        let std = BumpSpec::standard();
        if (amplitude - std.amplitude).abs() > 1e-12 * std.amplitude {
            return Err(Error::invalid(format!(
                "bump amplitude {amplitude} breaks the 1/sqrt(pi) mass normalization (expected {})",
                std.amplitude
            )));
        }
        Ok(std)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn eta(&self, r: f64) -> f64 {
        self.amplitude * kernel(2.0 * r - 3.0)
    }

    pub fn eta_prime(&self, r: f64) -> f64 {
        let s = 2.0 * r - 3.0;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        let gp = -2.0 * s / (q * q);
        2.0 * self.amplitude * kernel(s) * gp
    }

    pub fn eta_second(&self, r: f64) -> f64 {
        let s = 2.0 * r - 3.0;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        let gp = -2.0 * s / (q * q);
        let gpp = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
        4.0 * self.amplitude * kernel(s) * (gp * gp + gpp)
    }

    /// Cumulative mass `int_1^x eta(r) dr` (zero below the support, the
    /// full 1/sqrt(pi) above it).
    pub fn eta_integral(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else if x >= 2.0 {
            1.0 / PI.sqrt()
        } else {
            let amp = self.amplitude;
            adaptive_simpson(&move |r| amp * kernel(2.0 * r - 3.0), 1.0, x, 1e-13)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_is_inverse_sqrt_pi() {
        let b = BumpSpec::standard();
        let mass = adaptive_simpson(&|r| b.eta(r), 1.0, 2.0, 1e-14);
        assert!((mass - 1.0 / PI.sqrt()).abs() < 1e-12, "{mass}");
    }

    #[test]
    fn support_and_nonnegativity() {
        let b = BumpSpec::standard();
        assert_eq!(b.eta(0.5), 0.0);
        assert_eq!(b.eta(3.0), 0.0);
        assert_eq!(b.eta(1.0), 0.0);
        for k in 0..200 {
            let r = 1.0 + k as f64 / 200.0;
            assert!(b.eta(r) >= 0.0);
        }
    }

    // values frozen from a 30-digit mpmath evaluation of the same profile
    #[test]
    fn matches_frozen_reference_points() {
        let b = BumpSpec::standard();
        assert!((b.amplitude() - 2.54142991637602101711479481363).abs() < 1e-11);
        assert!((b.eta(1.5) - 0.934939817412796002616265026188).abs() < 1e-11);
        assert!((b.eta(1.25) - 0.669913652678409947543735181936).abs() < 1e-11);
        assert!((b.eta_integral(1.5) - 0.28209479177387814347403972578).abs() < 1e-11);
    }

    #[test]
    fn derivatives_consistent_with_finite_differences() {
        let b = BumpSpec::standard();
        let h = 1e-5;
        for r in [1.2, 1.4, 1.5, 1.7, 1.9] {
            let fd1 = (b.eta(r + h) - b.eta(r - h)) / (2.0 * h);
            assert!((fd1 - b.eta_prime(r)).abs() < 1e-6, "eta' at {r}");
            let fd2 = (b.eta(r + h) - 2.0 * b.eta(r) + b.eta(r - h)) / (h * h);
            assert!((fd2 - b.eta_second(r)).abs() < 1e-3, "eta'' at {r}");
        }
    }

    #[test]
    fn amplitude_rescaling_rejected() {
        assert!(BumpSpec::with_amplitude(1.0).is_err());
        let b = BumpSpec::standard();
        assert!(BumpSpec::with_amplitude(b.amplitude()).is_ok());
    }

    #[test]
    fn realized_c_eta_near_reference() {
        let b = BumpSpec::standard();
        assert!((b.c_eta_first - 4.0583).abs() < 0.01, "{}", b.c_eta_first);
        assert!((b.c_eta_second - 78.78).abs() < 0.3, "{}", b.c_eta_second);
    }
}
