//! Exact impulsively-started shear flow: u1 = U0 erf(x2 / sqrt(4 nu t)),
//! u2 = 0. It solves Navier-Stokes with no-slip at the wall and matches the
//! uniform Euler flow (U0, 0) away from the layer, which makes it the main
//! closed-form oracle for the solver and the criteria functionals.

use super::erfc::erf;
use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, VelocityField};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy)]
pub struct AnalyticShear {
    pub u0: f64,
    pub nu: f64,
}

impl AnalyticShear {
    pub fn new(u0: f64, nu: f64) -> Result<AnalyticShear> {
        if nu <= 0.0 {
            return Err(Error::invalid("AnalyticShear requires nu > 0"));
        }
        Ok(AnalyticShear { u0, nu })
    }

    pub fn u1(&self, x2: f64, t: f64) -> f64 {
        shear_exact(self.u0, self.nu, x2, t)
    }

    /// omega = d2 u1 = U0 exp(-z^2) / sqrt(pi nu t)
    pub fn vorticity(&self, x2: f64, t: f64) -> f64 {
        let delta = (4.0 * self.nu * t).sqrt();
        let z = x2 / delta;
        self.u0 * (-z * z).exp() * 2.0 / (PI.sqrt() * delta)
    }

    pub fn wall_vorticity(&self, t: f64) -> f64 {
        self.u0 / (PI * self.nu * t).sqrt()
    }

    pub fn velocity_field(&self, grid: &Arc<Grid>, t: f64) -> VelocityField {
        VelocityField {
            u1: ScalarField::from_fn(grid, |_, x2| self.u1(x2, t)),
            u2: ScalarField::zeros(grid),
        }
    }

    pub fn vorticity_field(&self, grid: &Arc<Grid>, t: f64) -> ScalarField {
        ScalarField::from_fn(grid, |_, x2| self.vorticity(x2, t))
    }
}

/// U0 * erf(x2 / sqrt(4 nu t)) for t > 0.
pub fn shear_exact(u0: f64, nu: f64, x2: f64, t: f64) -> f64 {
    u0 * erf(x2 / (4.0 * nu * t).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    #[test]
    fn no_slip_at_wall() {
        assert_eq!(shear_exact(2.0, 1e-3, 0.0, 1.0), 0.0);
    }

    #[test]
    fn recovers_free_stream_for_small_nut() {
        assert!((shear_exact(2.0, 1e-9, 0.5, 1.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn satisfies_discrete_heat_equation() {
        // (dt - nu d22) u1 -> 0 at second order under refinement
        let s = AnalyticShear::new(1.0, 1e-2).unwrap();
        let t = 0.5;
        let x2 = 0.1;
        let mut res = Vec::new();
        for h in [2e-3, 1e-3, 5e-4] {
            let dt = (s.u1(x2, t + h) - s.u1(x2, t - h)) / (2.0 * h);
            let d22 = (s.u1(x2 + h, t) - 2.0 * s.u1(x2, t) + s.u1(x2 - h, t)) / (h * h);
            res.push((dt - s.nu * d22).abs());
        }
        assert!((res[0] / res[1]).log2() > 1.9);
        assert!((res[1] / res[2]) > 3.5);
    }

    #[test]
    fn l2_distance_to_euler_matches_self_similar_constant() {
        // ||uNS - uE||_L2(strip)^2 = 2 pi U0^2 sqrt(4 nu t) * int erfc^2,
        // with int_0^inf erfc(z)^2 dz evaluated by the quadrature oracle.
        let c0_sq = adaptive_simpson(&|z| super::super::erfc::erfc(z) * super::super::erfc::erfc(z), 0.0, 12.0, 1e-13);
        assert!((c0_sq - 0.330494606292647218016266783253).abs() < 1e-12);
        let (u0, nu, t) = (1.5f64, 1e-3f64, 0.7f64);
        let grid = Grid::wall_resolved(8, 2.0 * PI, 4.0, crate::fields::TopBc::FreeSlip, (4.0 * nu * t).sqrt(), 32, 1.03).unwrap();
        let s = AnalyticShear::new(u0, nu).unwrap();
        let diff = ScalarField::from_fn(&grid, |_, x2| s.u1(x2, t) - u0);
        let norm = crate::fields::lp_norm(&diff, 2.0).unwrap();
        let exact = (2.0 * PI).sqrt() * u0 * (4.0 * nu * t).powf(0.25) * c0_sq.sqrt();
        assert!((norm - exact).abs() < 1e-3 * exact, "{norm} vs {exact}");
    }
}
