//! Streamfunction solve Delta psi = omega on the periodic half strip.
//!
//! Nonzero x1 modes: FFT in x1 with the modified wavenumber of the 3-point
//! second difference, then a Thomas sweep in x2 with homogeneous Dirichlet
//! ends, so the solve inverts the 5-point Laplacian exactly on those modes.
//!
//! The x1 mean carries the physical ambiguity of the vorticity formulation
//! on the strip: omega only determines the mean profile up to a constant.
//! We close it with the tracked mean tangential velocity at the top,
//! reconstructing mean_u1(x2) = u_top - int_{x2}^{L2} mean_omega and
//! mean_psi by cumulative trapezoid from the wall, so psi = 0 on the wall.

use crate::error::{Error, Result};
use crate::fields::{d_x1, d_x2, Grid, ScalarField, VelocityField};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

pub struct PoissonSolver {
    grid: Arc<Grid>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// modified wavenumbers (2 - 2 cos(2 pi k / nx)) / h1^2
    lambda: Vec<f64>,
}

impl PoissonSolver {
    pub fn new(grid: Arc<Grid>) -> Result<PoissonSolver> {
        if !grid.is_uniform() {
            return Err(Error::invalid("PoissonSolver requires a uniform grid"));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.nx);
        let inv = planner.plan_fft_inverse(grid.nx);
        let h1 = grid.h1();
        let lambda = (0..grid.nx)
            .map(|k| (2.0 - 2.0 * (2.0 * PI * k as f64 / grid.nx as f64).cos()) / (h1 * h1))
            .collect();
        Ok(PoissonSolver { grid, fwd, inv, lambda })
    }

    /// Solve for psi given omega and the mean tangential velocity at the top.
    pub fn solve(&self, omega: &ScalarField, u_top: f64) -> Result<ScalarField> {
        let g = &self.grid;
        if !omega.grid.same_layout(g) {
            return Err(Error::GridMismatch("omega grid does not match solver grid".into()));
        }
        let (nx, ny) = (g.nx, g.ny);
        let h2 = g.h2_uniform()?;

        // forward FFT along x1, row by row; store mode-major [k*ny + j]
        let mut hat = vec![Complex::new(0.0, 0.0); nx * ny];
        let mut row = vec![Complex::new(0.0, 0.0); nx];
        for j in 0..ny {
            for i in 0..nx {
                row[i] = Complex::new(omega.values[i * ny + j], 0.0);
            }
            self.fwd.process(&mut row);
            for k in 0..nx {
                hat[k * ny + j] = row[k] / nx as f64;
            }
        }

        // zero mode: reconstruct the mean profile from the top down
        let mean_omega: Vec<f64> = (0..ny).map(|j| hat[j].re).collect();
        let mut mean_u1 = vec![0.0f64; ny];
        mean_u1[ny - 1] = u_top;
        for j in (0..ny - 1).rev() {
            mean_u1[j] = mean_u1[j + 1] - 0.5 * h2 * (mean_omega[j] + mean_omega[j + 1]);
        }
        let mut mean_psi = vec![0.0f64; ny];
        for j in 1..ny {
            mean_psi[j] = mean_psi[j - 1] + 0.5 * h2 * (mean_u1[j - 1] + mean_u1[j]);
        }

        // nonzero modes: Thomas sweep with Dirichlet psi = 0 at both ends
        let mut psihat = vec![Complex::new(0.0, 0.0); nx * ny];
        let n_int = ny - 2;
        let mut cp = vec![0.0f64; n_int];
        let mut dp = vec![Complex::new(0.0, 0.0); n_int];
        let off = 1.0 / (h2 * h2);
        for k in 1..nx {
            let diag = -2.0 / (h2 * h2) - self.lambda[k];
            let mut beta = diag;
            cp[0] = off / beta;
            dp[0] = hat[k * ny + 1] / beta;
            for m in 1..n_int {
                beta = diag - off * cp[m - 1];
                cp[m] = off / beta;
                dp[m] = (hat[k * ny + 1 + m] - off * dp[m - 1]) / beta;
            }
            let mut prev = dp[n_int - 1];
            psihat[k * ny + ny - 2] = prev;
            for m in (0..n_int - 1).rev() {
                prev = dp[m] - cp[m] * prev;
                psihat[k * ny + 1 + m] = prev;
            }
        }

        // inverse FFT and add the mean profile
        let mut psi = ScalarField::zeros(g);
        for j in 0..ny {
            for k in 0..nx {
                row[k] = psihat[k * ny + j];
            }
            self.inv.process(&mut row);
            for i in 0..nx {
                psi.values[i * ny + j] = row[i].re + mean_psi[j];
            }
        }
        Ok(psi)
    }

    /// u = (d2 psi, -d1 psi) by the grid's difference stencils.
    pub fn velocity(&self, psi: &ScalarField) -> Result<VelocityField> {
        let u1 = d_x2(psi);
        let mut u2 = d_x1(psi);
        for v in u2.values.iter_mut() {
            *v = -*v;
        }
        Ok(VelocityField { u1, u2 })
    }
}
