//! Assumption functionals: the layer-norm quantities whose boundedness or
//! smallness drives the energy argument. All are time integrals over a
//! sampled trajectory, with the Reynolds-stress product u1 u2 or the
//! tangential component measured in mixed layer norms.

use super::{time_trapezoid, TrajectorySample};
use crate::error::{Error, Result};
use crate::fields::{d_x1, layer_norm, ScalarField};
use crate::quad::adaptive_simpson;

fn check(traj: &[TrajectorySample]) -> Result<()> {
    if traj.len() < 2 {
        return Err(Error::invalid("assumption functionals need at least 2 samples"));
    }
    for w in traj.windows(2) {
        if w[1].t <= w[0].t {
            return Err(Error::invalid("trajectory times must be strictly increasing"));
        }
    }
    Ok(())
}

fn stress(s: &TrajectorySample) -> Result<ScalarField> {
    s.u.u1.zip(&s.u.u2, |a, b| a * b)
}

fn time_integral_of(
    traj: &[TrajectorySample],
    per_sample: impl Fn(&TrajectorySample) -> Result<f64>,
) -> Result<f64> {
    check(traj)?;
    let ts: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let vals = traj.iter().map(&per_sample).collect::<Result<Vec<f64>>>()?;
    Ok(time_trapezoid(&ts, &vals))
}

/// Equicontinuity modulus: for each rho,
/// E(rho) = int_0^T || u1 u2 ||_{L^1_{x1} L^inf_{x2}(x2 <= rho)} dt.
/// The limit rho -> 0 measures how the Reynolds stress concentrates at the
/// wall; returns (rho, E(rho)) pairs.
pub fn equicontinuity_modulus(
    traj: &[TrajectorySample],
    rho_list: &[f64],
) -> Result<Vec<(f64, f64)>> {
    check(traj)?;
    rho_list
        .iter()
        .map(|&rho| {
            let v = time_integral_of(traj, |s| {
                layer_norm(&stress(s)?, rho, 1.0, f64::INFINITY)
            })?;
            Ok((rho, v))
        })
        .collect()
}

/// Uniform integrability of the tangential derivative:
/// I(rho) = int_0^T || d1 u1 ||^2_{L^1(x2 <= rho)} dt.
pub fn uniform_integrability(traj: &[TrajectorySample], rho: f64) -> Result<f64> {
    time_integral_of(traj, |s| {
        let n = layer_norm(&d_x1(&s.u.u1), rho, 1.0, 1.0)?;
        Ok(n * n)
    })
}

/// Uniform boundedness of the tangential component:
/// B(rho) = int_0^T || u1 ||^2_{L^inf(x2 <= rho)} dt.
pub fn boundedness(traj: &[TrajectorySample], rho: f64) -> Result<f64> {
    time_integral_of(traj, |s| {
        let n = layer_norm(&s.u.u1, rho, f64::INFINITY, f64::INFINITY)?;
        Ok(n * n)
    })
}

/// The L^2-in-x1 weakenings of I and B:
/// int_0^T || d1 u1 ||^2_{L^2_{x1} L^1_{x2}} dt and
/// int_0^T || u1 ||^2_{L^2_{x1} L^inf_{x2}} dt over the layer x2 <= rho.
pub fn mixed_variants(traj: &[TrajectorySample], rho: f64) -> Result<(f64, f64)> {
    let i2 = time_integral_of(traj, |s| {
        let n = layer_norm(&d_x1(&s.u.u1), rho, 2.0, 1.0)?;
        Ok(n * n)
    })?;
    let b2 = time_integral_of(traj, |s| {
        let n = layer_norm(&s.u.u1, rho, 2.0, f64::INFINITY)?;
        Ok(n * n)
    })?;
    Ok((i2, b2))
}

/// The two functionals behind the power-scale sufficient condition with
/// delta(s) = s^a: a viscosity integral that must vanish as nu -> 0 and a
/// sup-norm of the Reynolds stress over a slightly inflated layer.
#[derive(Debug, Clone)]
pub struct Thm13Report {
    /// int_{t_min}^{T} ( nu / delta(nu t) + delta(nu t) / t^{1+c} ) dt
    pub wang_integral: f64,
    /// int_{t_min}^{T} || u1 u2 ||_{L^inf(x2 <= delta(nu t) sqrt(log 1/nu))} dt
    pub layer_sup_integral: f64,
    /// true when the inflated layer hit the top of the strip
    pub layer_clipped: bool,
}

pub fn thm13_functionals(
    traj: &[TrajectorySample],
    nu: f64,
    a: f64,
    c: f64,
) -> Result<Thm13Report> {
    check(traj)?;
    if !(0.0 < a && a < 1.0) {
        return Err(Error::invalid(format!("thm13 requires 0 < a < 1, got a = {a}")));
    }
    if c <= 0.0 {
        return Err(Error::invalid(format!("thm13 requires c > 0, got c = {c}")));
    }
    if nu <= 0.0 || nu >= 1.0 {
        return Err(Error::invalid(format!(
            "thm13 requires 0 < nu < 1 (the layer inflation factor is sqrt(log 1/nu)), got nu = {nu}"
        )));
    }
    let t0 = traj[0].t;
    let t1 = traj[traj.len() - 1].t;
    if t0 <= 0.0 {
        return Err(Error::invalid("thm13 requires strictly positive sample times"));
    }
    let wang_integral = adaptive_simpson(
        &|t: f64| nu / (nu * t).powf(a) + (nu * t).powf(a) / t.powf(1.0 + c),
        t0,
        t1,
        1e-12,
    );
    let inflate = (1.0 / nu).ln().sqrt();
    let layer_clipped = std::cell::Cell::new(false);
    let layer_sup_integral = time_integral_of(traj, |s| {
        let layer = (nu * s.t).powf(a) * inflate;
        if layer >= s.omega.grid.height_x2 {
            layer_clipped.set(true);
        }
        layer_norm(&stress(s)?, layer, f64::INFINITY, f64::INFINITY)
    })?;
    Ok(Thm13Report { wang_integral, layer_sup_integral, layer_clipped: layer_clipped.get() })
}
