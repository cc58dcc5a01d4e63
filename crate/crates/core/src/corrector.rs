//! The pseudo-caloric boundary-layer corrector: a divergence-free lift that
//! cancels the Euler slip -U^E at the wall, with tangential part
//! `u1 = -U^E (erfc(x2/delta) - delta eta(x2))` and the normal part obtained
//! from incompressibility. All derivative fields and both heat residuals are
//! evaluated in closed form, never by finite differences, so that residual
//! and scaling diagnostics are meaningful well below discretization error.
//!
//! The layer width is `delta = sqrt(4 nu t)` (Prandtl) or the generalized
//! `delta = (nu t)^a` variant; the substitution also replaces the
//! self-similar variable by `z = x2 / delta`.

use crate::analytic::{erfc, erfc_prime, BumpSpec, EulerTrace};
use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField};
use crate::quad::adaptive_simpson;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum CorrectorScale {
    /// delta(s) = sqrt(4 s)
    Prandtl,
    /// delta(s) = s^a with 0 < a < 1
    Power { a: f64 },
}

impl CorrectorScale {
    pub fn power(a: f64) -> Result<CorrectorScale> {
        if !(0.0 < a && a < 1.0) {
            return Err(Error::invalid(format!("power scale requires 0 < a < 1, got {a}")));
        }
        Ok(CorrectorScale::Power { a })
    }

    /// Layer width delta(s) at s = nu * t.
    pub fn delta(&self, s: f64) -> f64 {
        match *self {
            CorrectorScale::Prandtl => (4.0 * s).sqrt(),
            CorrectorScale::Power { a } => s.powf(a),
        }
    }

    pub fn delta_prime(&self, s: f64) -> f64 {
        match *self {
            CorrectorScale::Prandtl => 1.0 / s.sqrt(),
            CorrectorScale::Power { a } => a * s.powf(a - 1.0),
        }
    }

    /// s delta'(s) / delta(s); constant for both variants (1/2 resp. a).
    pub fn log_slope(&self, s: f64) -> f64 {
        s * self.delta_prime(s) / self.delta(s)
    }
}

#[derive(Debug, Clone)]
pub struct CorrectorParams {
    pub nu: f64,
    pub trace: EulerTrace,
    pub bump: BumpSpec,
    pub scale: CorrectorScale,
}

impl CorrectorParams {
    pub fn new(nu: f64, trace: EulerTrace, scale: CorrectorScale) -> Result<CorrectorParams> {
        if nu <= 0.0 {
            return Err(Error::invalid("corrector requires nu > 0"));
        }
        Ok(CorrectorParams { nu, trace, bump: BumpSpec::standard(), scale })
    }
}

/// The corrector sampled on a grid together with its closed-form
/// derivatives and the residuals of the heat operator on each component.
#[derive(Debug, Clone)]
pub struct CorrectorField {
    pub u1: ScalarField,
    pub u2: ScalarField,
    pub d1_u1: ScalarField,
    pub d2_u1: ScalarField,
    pub d12_u1: ScalarField,
    pub d1_u2: ScalarField,
    pub heat_residual_1: ScalarField,
    pub heat_residual_2: ScalarField,
    pub t: f64,
}

/// x2-profile samples shared by every column of the strip.
struct RowProfiles {
    /// erfc(z) - delta * eta(x2)
    lift: Vec<f64>,
    /// erfc'(z)/delta - delta * eta'(x2)
    lift_d2: Vec<f64>,
    /// R(x2)
    r: Vec<f64>,
    /// -(dt - nu d22) erfc(z), the residual_1 contribution per unit trace
    caloric_erfc: Vec<f64>,
    /// (dt - nu d22)(delta eta) = nu delta' eta - nu delta eta''
    caloric_eta: Vec<f64>,
    /// delta' * (R - z erfc(z))
    r_dot_scaled: Vec<f64>,
}

fn row_profiles(params: &CorrectorParams, grid: &Grid, t: f64, include_bump: bool) -> RowProfiles {
    let nu = params.nu;
    let s = nu * t;
    let delta = params.scale.delta(s);
    let dprime = params.scale.delta_prime(s);
    let b = &params.bump;
    let ny = grid.ny;
    let mut p = RowProfiles {
        lift: Vec::with_capacity(ny),
        lift_d2: Vec::with_capacity(ny),
        r: Vec::with_capacity(ny),
        caloric_erfc: Vec::with_capacity(ny),
        caloric_eta: Vec::with_capacity(ny),
        r_dot_scaled: Vec::with_capacity(ny),
    };
    // (dt - nu d22) erfc(z) = -z erfc'(z) * nu * (delta'/delta - 2/delta^2);
    // identically zero for the Prandtl scale.
    let caloric_coeff = nu * (dprime / delta - 2.0 / (delta * delta));
    for j in 0..ny {
        let x2 = grid.x2(j);
        let z = x2 / delta;
        let e = erfc(z);
        let ep = erfc_prime(z);
        let (eta, etap, etapp, etaint) = if include_bump {
            (b.eta(x2), b.eta_prime(x2), b.eta_second(x2), b.eta_integral(x2))
        } else {
            (0.0, 0.0, 0.0, 0.0)
        };
        p.lift.push(e - delta * eta);
        p.lift_d2.push(ep / delta - delta * etap);
        let head = if include_bump { 1.0 / PI.sqrt() - etaint } else { 1.0 / PI.sqrt() };
        let r = head - (-z * z).exp() / PI.sqrt() + z * e;
        p.r.push(r);
        p.caloric_erfc.push(z * ep * caloric_coeff);
        p.caloric_eta.push(nu * (dprime * eta - delta * etapp));
        p.r_dot_scaled.push(dprime * (r - z * e));
    }
    p
}

/// Evaluate the corrector and all its closed-form derivative and residual
/// fields on `grid` at time `t > 0`.
pub fn build_corrector(params: &CorrectorParams, grid: &Arc<Grid>, t: f64) -> Result<CorrectorField> {
    build_corrector_with_options(params, grid, t, true)
}

/// As `build_corrector`; `include_bump = false` drops the eta mass
/// correction (diagnostic mode for isolating the caloric erfc part).
pub fn build_corrector_with_options(
    params: &CorrectorParams,
    grid: &Arc<Grid>,
    t: f64,
    include_bump: bool,
) -> Result<CorrectorField> {
    if t <= 0.0 {
        return Err(Error::invalid("corrector is singular at t = 0; require t > 0"));
    }
    if params.nu <= 0.0 {
        return Err(Error::invalid("corrector requires nu > 0"));
    }
    let nu = params.nu;
    let s = nu * t;
    let delta = params.scale.delta(s);
    let rows = row_profiles(params, grid, t, include_bump);
    let tr = &params.trace;
    let ny = grid.ny;

    let mut out = CorrectorField {
        u1: ScalarField::zeros(grid),
        u2: ScalarField::zeros(grid),
        d1_u1: ScalarField::zeros(grid),
        d2_u1: ScalarField::zeros(grid),
        d12_u1: ScalarField::zeros(grid),
        d1_u2: ScalarField::zeros(grid),
        heat_residual_1: ScalarField::zeros(grid),
        heat_residual_2: ScalarField::zeros(grid),
        t,
    };
    for i in 0..grid.nx {
        let x1 = grid.x1(i);
        let u = tr.eval(x1, t);
        let u_d1 = tr.d1(x1, t);
        let u_d11 = tr.d11(x1, t);
        let u_d111 = tr.d111(x1, t);
        let u_dt = tr.dt(x1, t);
        let u_d1t = tr.d1t(x1, t);
        for j in 0..ny {
            let idx = i * ny + j;
            out.u1.values[idx] = -u * rows.lift[j];
            out.d1_u1.values[idx] = -u_d1 * rows.lift[j];
            out.d2_u1.values[idx] = -u * rows.lift_d2[j];
            out.d12_u1.values[idx] = -u_d1 * rows.lift_d2[j];
            out.u2.values[idx] = delta * u_d1 * rows.r[j];
            out.d1_u2.values[idx] = delta * u_d11 * rows.r[j];
            out.heat_residual_1.values[idx] = -(u_dt - nu * u_d11) * rows.lift[j]
                + u * (rows.caloric_erfc[j] + rows.caloric_eta[j]);
            out.heat_residual_2.values[idx] = nu * out.d12_u1.values[idx]
                - nu * delta * u_d111 * rows.r[j]
                + nu * u_d1 * rows.r_dot_scaled[j]
                + delta * u_d1t * rows.r[j];
        }
    }
    Ok(out)
}

/// Residual of the zero-mean identity `int_0^inf u1(x1, x2, t) dx2 = 0`,
/// by adaptive quadrature truncated at x2 = 10 (the erfc tail beyond that
/// is far below working precision).
pub fn zero_mean_check(params: &CorrectorParams, x1: f64, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::invalid("zero_mean_check requires t > 0"));
    }
    let s = params.nu * t;
    let delta = params.scale.delta(s);
    let u = params.trace.eval(x1, t);
    let b = params.bump.clone();
    let profile = move |x2: f64| erfc(x2 / delta) - delta * b.eta(x2);
    // the erfc mass sits in [0, ~8 delta], the eta mass in [1, 2]
    let split = (8.0 * delta).min(1.0);
    let integral = adaptive_simpson(&profile, 0.0, split, 1e-12)
        + adaptive_simpson(&profile, split, 2.5, 1e-12)
        + adaptive_simpson(&profile, 2.5, 10.0, 1e-12);
    Ok(-u * integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectorQuantity {
    U1,
    D1U1,
    D2U1,
    D12U1,
    U2,
    D1U2,
}

impl CorrectorQuantity {
    pub const ALL: [CorrectorQuantity; 6] = [
        CorrectorQuantity::U1,
        CorrectorQuantity::D1U1,
        CorrectorQuantity::D2U1,
        CorrectorQuantity::D12U1,
        CorrectorQuantity::U2,
        CorrectorQuantity::D1U2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CorrectorQuantity::U1 => "u1",
            CorrectorQuantity::D1U1 => "d1_u1",
            CorrectorQuantity::D2U1 => "d2_u1",
            CorrectorQuantity::D12U1 => "d12_u1",
            CorrectorQuantity::U2 => "u2",
            CorrectorQuantity::D1U2 => "d1_u2",
        }
    }

    /// Exponent of (nu t) predicted by the layer scaling bounds (Prandtl).
    pub fn expected_exponent(&self, p: f64) -> f64 {
        match self {
            CorrectorQuantity::U1 | CorrectorQuantity::D1U1 => 1.0 / (2.0 * p),
            CorrectorQuantity::D2U1 | CorrectorQuantity::D12U1 => 1.0 / (2.0 * p) - 0.5,
            CorrectorQuantity::U2 | CorrectorQuantity::D1U2 => 0.5,
        }
    }
}

/// L^p norm over the half strip of one corrector quantity at the given
/// nu*t, computed semi-analytically: the x1 trace factor times a 1D
/// quadrature of the x2 profile over (0, inf). Resolution independent, so
/// usable for layer widths far below any practical grid.
pub fn quantity_lp_norm(params: &CorrectorParams, quantity: CorrectorQuantity, p: f64, nut: f64, t: f64) -> f64 {
    let delta = params.scale.delta(nut);
    let b = params.bump.clone();
    let tr = &params.trace;
    let (trace_order, profile): (u32, Box<dyn Fn(f64) -> f64>) = match quantity {
        CorrectorQuantity::U1 => (0, Box::new(move |x2: f64| erfc(x2 / delta) - delta * b.eta(x2))),
        CorrectorQuantity::D1U1 => (1, Box::new(move |x2: f64| erfc(x2 / delta) - delta * b.eta(x2))),
        CorrectorQuantity::D2U1 => {
            (0, Box::new(move |x2: f64| erfc_prime(x2 / delta) / delta - delta * b.eta_prime(x2)))
        }
        CorrectorQuantity::D12U1 => {
            (1, Box::new(move |x2: f64| erfc_prime(x2 / delta) / delta - delta * b.eta_prime(x2)))
        }
        CorrectorQuantity::U2 => (1, Box::new(move |x2: f64| delta * crate::analytic::r_profile_scaled(x2, delta, &b))),
        CorrectorQuantity::D1U2 => {
            (2, Box::new(move |x2: f64| delta * crate::analytic::r_profile_scaled(x2, delta, &b)))
        }
    };
    let xfac = tr.lp_x1(trace_order, p, t);
    let x2norm = if p.is_infinite() {
        // layer region plus the bump support
        let mut m = 0.0f64;
        for k in 0..=4000 {
            let x2 = 10.0 * delta * k as f64 / 4000.0;
            m = m.max(profile(x2).abs());
        }
        for k in 0..=4000 {
            let x2 = 0.5 + 2.0 * k as f64 / 4000.0;
            m = m.max(profile(x2).abs());
        }
        m
    } else {
        let split = (8.0 * delta).min(1.0);
        let f = |x2: f64| profile(x2).abs().powf(p);
        // tolerance scaled to the integrand: |d2 profiles|^p reaches
        // delta^{-p}, so a fixed absolute tolerance would never converge
        let quad = |a: f64, b: f64| {
            let mut m = 0.0f64;
            for k in 0..=64 {
                m = m.max(f(a + (b - a) * k as f64 / 64.0));
            }
            adaptive_simpson(&f, a, b, (1e-12 * m * (b - a)).max(1e-300))
        };
        let int = quad(0.0, split) + quad(split, 2.5) + quad(2.5, 6.0);
        int.powf(1.0 / p)
    };
    xfac * x2norm
}

/// Least-squares slope of log ||quantity||_p against log(nu t) over the
/// sample set (evaluated at t = 1, so nu t = nu per sample).
pub fn scaling_exponents(
    params: &CorrectorParams,
    p: f64,
    quantity: CorrectorQuantity,
    nut_samples: &[f64],
) -> Result<f64> {
    if nut_samples.len() < 4 {
        return Err(Error::invalid("scaling fit requires at least 4 nu*t samples"));
    }
    let lo = nut_samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = nut_samples.iter().cloned().fold(0.0f64, f64::max);
    if lo <= 0.0 || hi / lo < 100.0 {
        return Err(Error::invalid("nu*t samples must be positive and span at least two decades"));
    }
    let mut pts = Vec::new();
    for &nut in nut_samples {
        let norm = quantity_lp_norm(params, quantity, p, nut, 1.0);
        if norm > 0.0 {
            pts.push((nut.ln(), norm.ln()));
        }
    }
    if pts.len() < 4 {
        return Err(Error::invalid("degenerate sample range: too many zero norms"));
    }
    Ok(least_squares_slope(&pts))
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

/// L^2 norms of both heat residuals on the grid.
pub fn heat_residual_norm(params: &CorrectorParams, grid: &Arc<Grid>, t: f64) -> Result<(f64, f64)> {
    let ck = build_corrector(params, grid, t)?;
    Ok((
        crate::fields::lp_norm(&ck.heat_residual_1, 2.0)?,
        crate::fields::lp_norm(&ck.heat_residual_2, 2.0)?,
    ))
}
