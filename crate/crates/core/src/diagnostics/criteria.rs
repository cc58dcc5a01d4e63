//! Boundary-layer criteria for the vanishing-viscosity limit, all of the
//! form "time integral of a layer-localized norm of the viscous solution".
//! Each takes a sampled trajectory and integrates in time by trapezoid.

use super::{time_trapezoid, TrajectorySample};
use crate::analytic::EulerTrace;
use crate::corrector::CorrectorScale;
use crate::error::{Error, Result};
use crate::fields::{d_x1, d_x2, layer_norm, Grid, ScalarField};

/// Number of whole grid cells inside the layer 0 < x2 <= rho. Layer
/// functionals lose accuracy below ~2 cells; callers should surface that.
pub fn cells_in_layer(grid: &Grid, rho: f64) -> usize {
    let mut n = 0;
    while n + 1 < grid.ny && grid.x2(n + 1) <= rho {
        n += 1;
    }
    n
}

fn check_traj(traj: &[TrajectorySample]) -> Result<()> {
    if traj.len() < 2 {
        return Err(Error::invalid("criteria need at least 2 trajectory samples"));
    }
    for w in traj.windows(2) {
        if w[1].t <= w[0].t {
            return Err(Error::invalid("trajectory times must be strictly increasing"));
        }
    }
    Ok(())
}

fn integrate_layer_sq(
    traj: &[TrajectorySample],
    layer_of_t: impl Fn(f64) -> f64,
    fields_of: impl Fn(&TrajectorySample) -> Vec<ScalarField>,
) -> Result<f64> {
    check_traj(traj)?;
    let ts: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let mut vals = Vec::with_capacity(traj.len());
    for s in traj {
        let rho = layer_of_t(s.t);
        if rho <= 0.0 {
            vals.push(0.0);
            continue;
        }
        let mut v = 0.0;
        for f in fields_of(s) {
            let n = layer_norm(&f, rho, 2.0, 2.0)?;
            v += n * n;
        }
        vals.push(v);
    }
    Ok(time_trapezoid(&ts, &vals))
}

/// Kato's criterion: nu * int_0^T int_{x2 <= C nu} |grad u|^2.
pub fn kato_functional(traj: &[TrajectorySample], nu: f64, c: f64) -> Result<f64> {
    if nu <= 0.0 || c <= 0.0 {
        return Err(Error::invalid("kato_functional requires nu > 0 and C > 0"));
    }
    let val = integrate_layer_sq(
        traj,
        |_| c * nu,
        |s| vec![d_x1(&s.u.u1), d_x2(&s.u.u1), d_x1(&s.u.u2), d_x2(&s.u.u2)],
    )?;
    Ok(nu * val)
}

/// Kelliher's variant: nu^{-1} * int_0^T ||u||^2_{L^2(x2 <= C nu)}.
pub fn kelliher_functional(traj: &[TrajectorySample], nu: f64, c: f64) -> Result<f64> {
    if nu <= 0.0 || c <= 0.0 {
        return Err(Error::invalid("kelliher_functional requires nu > 0 and C > 0"));
    }
    let val = integrate_layer_sq(traj, |_| c * nu, |s| vec![s.u.u1.clone(), s.u.u2.clone()])?;
    Ok(val / nu)
}

/// Tangential-gradient criterion: nu * int_0^T int_{x2 <= delta} |d1 u|^2
/// with a viscosity-dependent layer width `delta`.
pub fn temam_wang_functional(traj: &[TrajectorySample], nu: f64, delta: f64) -> Result<f64> {
    if nu <= 0.0 || delta <= 0.0 {
        return Err(Error::invalid("temam_wang_functional requires nu > 0 and delta > 0"));
    }
    let val = integrate_layer_sq(traj, |_| delta, |s| vec![d_x1(&s.u.u1), d_x1(&s.u.u2)])?;
    Ok(nu * val)
}

/// Boundary vorticity criterion: int_0^T nu int |omega(x1, 0, t)| dx1 dt.
pub fn bt_boundary_vorticity(traj: &[TrajectorySample], nu: f64) -> Result<f64> {
    if nu <= 0.0 {
        return Err(Error::invalid("bt_boundary_vorticity requires nu > 0"));
    }
    check_traj(traj)?;
    let ts: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let vals: Vec<f64> = traj
        .iter()
        .map(|s| {
            let g = &s.omega.grid;
            let h1 = g.h1();
            nu * (0..g.nx).map(|i| h1 * s.omega.at(i, 0).abs()).sum::<f64>()
        })
        .collect();
    Ok(time_trapezoid(&ts, &vals))
}

/// One-sided vorticity criterion:
/// int_0^T || ( U^E (omega + delta(nu t)/(nu t)) )_- ||^2_{L^2(x2 <= nu t / delta(nu t))} dt.
/// Only the negative part of the weighted shifted vorticity counts, and the
/// layer shrinks like nu t / delta(nu t).
pub fn ckv_functional(
    traj: &[TrajectorySample],
    trace: &EulerTrace,
    nu: f64,
    scale: &CorrectorScale,
) -> Result<f64> {
    if nu <= 0.0 {
        return Err(Error::invalid("ckv_functional requires nu > 0"));
    }
    check_traj(traj)?;
    if traj[0].t <= 0.0 {
        return Err(Error::invalid("ckv_functional requires strictly positive sample times"));
    }
    let ts: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let mut vals = Vec::with_capacity(traj.len());
    for s in traj {
        let nut = nu * s.t;
        let shift = scale.delta(nut) / nut;
        let layer = nut / scale.delta(nut);
        let g = s.omega.grid.clone();
        let weighted = ScalarField::from_fn(&g, |x1, _| trace.eval(x1, s.t))
            .zip(&s.omega, |u, w| (u * (w + shift)).min(0.0))?;
        let n = layer_norm(&weighted, layer, 2.0, 2.0)?;
        vals.push(n * n);
    }
    Ok(time_trapezoid(&ts, &vals))
}
