//! Vorticity-streamfunction solvers for Navier-Stokes and Euler on the
//! periodic half strip, sharing one SSP-RK3 stepper.
//!
//! State is the vorticity field plus one scalar: the x1-mean tangential
//! velocity at the top, which the vorticity alone cannot determine. Its
//! evolution comes from the x1-averaged momentum equation evaluated at the
//! top row.
//!
//! Wall closures: Navier-Stokes enforces no slip through Thom's formula
//! `omega_wall = 2 psi_1 / h2^2` (psi vanishes on the wall, u1 = d2 psi);
//! Euler advects wall vorticity tangentially and conserves the slip. The
//! truncation top is free slip (omega = 0) unless configured no-slip.

mod arakawa;
mod poisson;

pub use arakawa::arakawa_jacobian;
pub use poisson::PoissonSolver;

use crate::analytic::{shear_exact, AnalyticShear};
use crate::error::{Error, Result};
use crate::fields::{d_x1, Grid, ScalarField, TopBc, VelocityField};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum Model {
    NavierStokes { nu: f64 },
    Euler,
}

impl Model {
    pub fn nu(&self) -> f64 {
        match self {
            Model::NavierStokes { nu } => *nu,
            Model::Euler => 0.0,
        }
    }

    pub fn is_viscous(&self) -> bool {
        matches!(self, Model::NavierStokes { .. })
    }
}

#[derive(Debug, Clone)]
pub enum Scenario {
    /// Wall-driven diffusing shear, initialized from the exact erf profile
    /// at `t0 > 0` (the impulsive start itself is singular).
    Shear { u0: f64, t0: f64 },
    /// Shear plus a localized cellular vorticity perturbation.
    PerturbedShear { u0: f64, t0: f64, amplitude: f64, wavenumber: u32 },
    /// Smoothed tanh vortex sheet centered at `center`.
    VortexSheetSmoothed { u0: f64, center: f64, thickness: f64 },
    /// Restart from explicit state (snapshot loading happens upstream).
    FromState { omega: ScalarField, u_top: f64, t: f64 },
}

impl Scenario {
    fn initial(&self, model: &Model, grid: &Arc<Grid>) -> Result<(ScalarField, f64, f64)> {
        let l2 = grid.height_x2;
        match self {
            Scenario::Shear { u0, t0 } => match model {
                Model::NavierStokes { nu } => {
                    if *t0 <= 0.0 {
                        return Err(Error::invalid("shear scenario requires t0 > 0"));
                    }
                    let s = AnalyticShear::new(*u0, *nu)?;
                    Ok((s.vorticity_field(grid, *t0), shear_exact(*u0, *nu, l2, *t0), *t0))
                }
                // the inviscid counterpart of the shear is the uniform stream
                Model::Euler => Ok((ScalarField::zeros(grid), *u0, *t0)),
            },
            Scenario::PerturbedShear { u0, t0, amplitude, wavenumber } => {
                let base = Scenario::Shear { u0: *u0, t0: *t0 }.initial(model, grid)?;
                let k = *wavenumber as f64;
                let sigma = l2 / 4.0;
                let pert = ScalarField::from_fn(grid, |x1, x2| {
                    let s = x2 / sigma;
                    amplitude * (k * x1).sin() * s * (-s * s).exp()
                });
                Ok((base.0.zip(&pert, |a, b| a + b)?, base.1, base.2))
            }
            Scenario::VortexSheetSmoothed { u0, center, thickness } => {
                if *thickness <= 0.0 {
                    return Err(Error::invalid("vortex sheet thickness must be positive"));
                }
                let omega = ScalarField::from_fn(grid, |_, x2| {
                    let s = (x2 - center) / thickness;
                    u0 / thickness / s.cosh().powi(2)
                });
                Ok((omega, u0 * ((l2 - center) / thickness).tanh(), 0.0))
            }
            Scenario::FromState { omega, u_top, t } => {
                if !omega.grid.same_layout(grid) {
                    return Err(Error::GridMismatch("restart state on a different grid".into()));
                }
                Ok((omega.clone(), *u_top, *t))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub model: Model,
    pub scenario: Scenario,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_max: f64,
    pub blowup_threshold: f64,
}

impl SolverConfig {
    pub fn new(model: Model, scenario: Scenario, t_end: f64) -> SolverConfig {
        SolverConfig { model, scenario, t_end, cfl: 0.4, dt_max: f64::INFINITY, blowup_threshold: 1e8 }
    }
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub omega: ScalarField,
    pub psi: ScalarField,
    pub u: VelocityField,
    pub u_top: f64,
    pub t: f64,
}

pub struct Solver {
    pub grid: Arc<Grid>,
    pub config: SolverConfig,
    poisson: PoissonSolver,
    pub state: SolverState,
    pub steps: usize,
}

impl Solver {
    pub fn new(grid: Arc<Grid>, config: SolverConfig) -> Result<Solver> {
        if !grid.is_uniform() {
            return Err(Error::invalid("the solver requires a uniform grid"));
        }
        if !config.model.is_viscous() && grid.top_bc == TopBc::NoSlip {
            return Err(Error::invalid("Euler admits only the free-slip top closure"));
        }
        let (omega, u_top, t) = config.scenario.initial(&config.model, &grid)?;
        let poisson = PoissonSolver::new(Arc::clone(&grid))?;
        let placeholder = SolverState {
            psi: ScalarField::zeros(&grid),
            u: VelocityField::zeros(&grid),
            omega,
            u_top,
            t,
        };
        let mut solver = Solver { grid, config, poisson, state: placeholder, steps: 0 };
        let mut omega = solver.state.omega.clone();
        let (psi, u) = solver.close(&mut omega, u_top)?;
        solver.state.omega = omega;
        solver.state.psi = psi;
        solver.state.u = u;
        Ok(solver)
    }

    /// Largest stable step: advective CFL plus the explicit-diffusion limit.
    pub fn suggest_dt(&self) -> f64 {
        let h = self.grid.h1().min(self.grid.h2_min());
        let umax = self.state.u.u1.max_abs().max(self.state.u.u2.max_abs()).max(1e-12);
        let mut dt = self.config.cfl * h / umax;
        if let Model::NavierStokes { nu } = self.config.model {
            let h2 = self.grid.h2_min();
            dt = dt.min(0.25 * h2 * h2 / nu);
        }
        dt.min(self.config.dt_max)
    }

    /// One SSP-RK3 step. Returns the stage-identity residual: the final
    /// combination recomputed in Butcher form must agree to roundoff.
    pub fn step(&mut self, dt: f64) -> Result<f64> {
        if dt <= 0.0 {
            return Err(Error::invalid("step requires dt > 0"));
        }
        let s = &self.state;
        let (l1, lt1) = self.rhs(&s.omega, &s.psi, &s.u)?;
        let mut w1 = s.omega.zip(&l1, |a, b| a + dt * b)?;
        let ut1 = s.u_top + dt * lt1;
        let (psi1, u1) = self.close(&mut w1, ut1)?;

        let (l2, lt2) = self.rhs(&w1, &psi1, &u1)?;
        let mut w2 = ScalarField::zeros(&self.grid);
        for idx in 0..w2.values.len() {
            w2.values[idx] =
                0.75 * self.state.omega.values[idx] + 0.25 * (w1.values[idx] + dt * l2.values[idx]);
        }
        let ut2 = 0.75 * self.state.u_top + 0.25 * (ut1 + dt * lt2);
        let (psi2, u2) = self.close(&mut w2, ut2)?;

        let (l3, lt3) = self.rhs(&w2, &psi2, &u2)?;
        let mut wn = ScalarField::zeros(&self.grid);
        let mut audit = 0.0f64;
        let scale = self.state.omega.max_abs().max(1.0);
        let ny = self.grid.ny;
        for idx in 0..wn.values.len() {
            let shu = self.state.omega.values[idx] / 3.0
                + 2.0 / 3.0 * (w2.values[idx] + dt * l3.values[idx]);
            wn.values[idx] = shu;
            // away from the closure rows the Shu-Osher cascade must agree
            // with the Butcher form y + dt (l1 + l2 + 4 l3) / 6 to roundoff
            let j = idx % ny;
            if j >= 1 && j + 1 < ny {
                let butcher = self.state.omega.values[idx]
                    + dt * (l1.values[idx] + l2.values[idx] + 4.0 * l3.values[idx]) / 6.0;
                audit = audit.max((shu - butcher).abs() / scale);
            }
        }
        let utn = self.state.u_top / 3.0 + 2.0 / 3.0 * (ut2 + dt * lt3);
        let (psin, un) = self.close(&mut wn, utn)?;

        let t_new = self.state.t + dt;
        if !wn.all_finite() || !utn.is_finite() {
            return Err(Error::SolverDiverged { t: t_new, reason: "non-finite vorticity".into() });
        }
        if wn.max_abs() > self.config.blowup_threshold {
            return Err(Error::SolverDiverged {
                t: t_new,
                reason: format!("vorticity exceeded blow-up threshold {}", self.config.blowup_threshold),
            });
        }
        self.state = SolverState { omega: wn, psi: psin, u: un, u_top: utn, t: t_new };
        self.steps += 1;
        Ok(audit)
    }

    /// Advance to `t_target`, choosing stable steps; calls `visit` with the
    /// state after every step (and once for the initial state).
    pub fn advance_to(
        &mut self,
        t_target: f64,
        mut visit: impl FnMut(&SolverState),
    ) -> Result<()> {
        visit(&self.state);
        let max_steps = 50_000_000usize;
        while self.state.t < t_target - 1e-14 {
            let dt = self.suggest_dt().min(t_target - self.state.t);
            self.step(dt)?;
            visit(&self.state);
            if self.steps > max_steps {
                return Err(Error::SolverDiverged {
                    t: self.state.t,
                    reason: "step budget exhausted".into(),
                });
            }
        }
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        let t_end = self.config.t_end;
        self.advance_to(t_end, |_| {})
    }

    /// Apply the wall and top vorticity closures and return the matching
    /// streamfunction and velocity. The wall-mean component of Thom's
    /// formula feeds back into the zero-mode reconstruction (the wall row
    /// carries trapezoid weight h2/2), which is linear with known
    /// coefficients, so the closure is solved exactly and psi is patched in
    /// closed form: the stored pair stays consistent to roundoff, and
    /// restarting from a stored state is reproducible.
    fn close(&self, omega: &mut ScalarField, u_top: f64) -> Result<(ScalarField, VelocityField)> {
        let g = &self.grid;
        let (nx, ny) = (g.nx, g.ny);
        let h2 = g.h2_uniform()?;
        let noslip_top = g.top_bc == TopBc::NoSlip;
        if !noslip_top {
            for i in 0..nx {
                omega.values[i * ny + ny - 1] = 0.0;
            }
        }
        let mut psi = self.poisson.solve(omega, u_top)?;
        if self.config.model.is_viscous() {
            let mean_row = |f: &ScalarField, j: usize| -> f64 {
                (0..nx).map(|i| f.values[i * ny + j]).sum::<f64>() / nx as f64
            };
            let c_w = mean_row(omega, 0);
            let psib1 = mean_row(&psi, 1);
            let a = 2.0 * psib1 / (h2 * h2);
            // sensitivities of the mean streamfunction to the closure rows:
            // d psibar_1 / d omegabar_wall = -h2^2/4,
            // d psibar_j / d omegabar_top = -(h2^2/2) min(j, ny-2) (- h2^2/4
            // extra at the top row), from the trapezoid reconstruction
            let (dw, dt_top) = if noslip_top {
                let c_t = mean_row(omega, ny - 1);
                let psibn = mean_row(&psi, ny - 2);
                let b = 2.0 * psibn / (h2 * h2);
                let m = (ny - 2) as f64;
                // (3/2) dw +        dt = a - c_w
                // (1/2) dw + (m+1)  dt = b - c_t
                let det = 1.5 * (m + 1.0) - 0.5;
                let dw = ((a - c_w) * (m + 1.0) - (b - c_t)) / det;
                let dt = (1.5 * (b - c_t) - 0.5 * (a - c_w)) / det;
                (dw, dt)
            } else {
                (2.0 / 3.0 * (a - c_w), 0.0)
            };
            let x_w = c_w + dw;
            for i in 0..nx {
                omega.values[i * ny] = 2.0 * (psi.values[i * ny + 1] - psib1) / (h2 * h2) + x_w;
            }
            if noslip_top {
                let psibn = mean_row(&psi, ny - 2);
                let c_t = mean_row(omega, ny - 1);
                let x_t = c_t + dt_top;
                for i in 0..nx {
                    omega.values[i * ny + ny - 1] =
                        2.0 * (psi.values[i * ny + ny - 2] - psibn) / (h2 * h2) + x_t;
                }
            }
            for i in 0..nx {
                for j in 1..ny {
                    let mut shift = -0.25 * h2 * h2 * dw;
                    if noslip_top {
                        shift -= 0.5 * h2 * h2 * (j.min(ny - 2) as f64) * dt_top;
                        if j == ny - 1 {
                            shift -= 0.25 * h2 * h2 * dt_top;
                        }
                    }
                    psi.values[i * ny + j] += shift;
                }
            }
        }
        let u = self.poisson.velocity(&psi)?;
        Ok((psi, u))
    }

    /// Time derivative of (omega, u_top) for the given consistent stage
    /// state. Boundary rows of d omega are zero except the advected Euler
    /// wall row; closures are reapplied after each stage combination.
    fn rhs(&self, omega: &ScalarField, psi: &ScalarField, u: &VelocityField) -> Result<(ScalarField, f64)> {
        let g = &self.grid;
        let (nx, ny) = (g.nx, g.ny);
        let nu = self.config.model.nu();
        let mut d = arakawa_jacobian(psi, omega)?;
        if self.config.model.is_viscous() {
            let h1 = g.h1();
            let h2 = g.h2_uniform()?;
            for i in 0..nx {
                let ip = (i + 1) % nx;
                let im = (i + nx - 1) % nx;
                for j in 1..ny - 1 {
                    let lap = (omega.at(ip, j) - 2.0 * omega.at(i, j) + omega.at(im, j)) / (h1 * h1)
                        + (omega.at(i, j + 1) - 2.0 * omega.at(i, j) + omega.at(i, j - 1)) / (h2 * h2);
                    d.values[i * ny + j] += nu * lap;
                }
            }
        } else {
            // Euler wall row: tangential advection of wall vorticity
            let d1w = d_x1(omega);
            for i in 0..nx {
                d.values[i * ny] = -u.u1.at(i, 0) * d1w.at(i, 0);
            }
        }

        // top mean velocity: d/dt u_top = -d2(mean u1 u2) + nu d2(mean omega)
        let du_top = if g.top_bc == TopBc::NoSlip {
            0.0
        } else {
            let h2 = g.h2_uniform()?;
            let mean_at = |f: &dyn Fn(usize, usize) -> f64, j: usize| -> f64 {
                (0..nx).map(|i| f(i, j)).sum::<f64>() / nx as f64
            };
            let flux = |j: usize| mean_at(&|i, j| u.u1.at(i, j) * u.u2.at(i, j), j);
            let womega = |j: usize| mean_at(&|i, j| omega.at(i, j), j);
            let one_sided =
                |f: &dyn Fn(usize) -> f64| (3.0 * f(ny - 1) - 4.0 * f(ny - 2) + f(ny - 3)) / (2.0 * h2);
            -one_sided(&|j| flux(j)) + nu * one_sided(&|j| womega(j))
        };
        Ok((d, du_top))
    }
}
