//! Diagnostics for the corrected difference flow v = u^NS - u^E - u^K:
//! the energy decomposition T1..T6, the energy-identity audit, the
//! boundary-layer criteria (Kato, Kelliher, Temam-Wang, boundary vorticity,
//! one-sided vorticity), and the assumption functionals behind the
//! equicontinuity and uniform-integrability theorems.

mod assumptions;
mod criteria;

pub use assumptions::{
    boundedness, equicontinuity_modulus, mixed_variants, thm13_functionals, uniform_integrability,
    Thm13Report,
};
pub use criteria::{
    bt_boundary_vorticity, cells_in_layer, ckv_functional, kato_functional, kelliher_functional,
    temam_wang_functional,
};

use crate::analytic::AnalyticShear;
use crate::corrector::{CorrectorField, CorrectorParams};
use crate::error::{Error, Result};
use crate::fields::{d_x1, d_x2, Grid, ScalarField, VelocityField};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// One time sample of a flow: velocity plus vorticity on a shared grid.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub u: VelocityField,
    pub omega: ScalarField,
}

/// Exact playback of the diffusing shear as a trajectory.
pub fn analytic_shear_trajectory(
    shear: &AnalyticShear,
    grid: &Arc<Grid>,
    times: &[f64],
) -> Result<Vec<TrajectorySample>> {
    if times.iter().any(|&t| t <= 0.0) {
        return Err(Error::invalid("shear playback requires strictly positive times"));
    }
    Ok(times
        .iter()
        .map(|&t| TrajectorySample {
            t,
            u: shear.velocity_field(grid, t),
            omega: shear.vorticity_field(grid, t),
        })
        .collect())
}

/// Trapezoid in time over (t_k, f_k) samples.
pub(crate) fn time_trapezoid(ts: &[f64], vals: &[f64]) -> f64 {
    let mut sum = 0.0;
    for k in 1..ts.len() {
        sum += 0.5 * (ts[k] - ts[k - 1]) * (vals[k] + vals[k - 1]);
    }
    sum
}

/// Domain quadrature of a nodal integrand.
pub(crate) fn domain_integral(grid: &Grid, f: impl Fn(usize, usize) -> f64) -> f64 {
    let h1 = grid.h1();
    let mut sum = 0.0;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            sum += h1 * grid.w2(j) * f(i, j);
        }
    }
    sum
}

/// An Euler flow with first derivatives and Laplacian: analytic when
/// available, second-order stencils otherwise.
#[derive(Debug, Clone)]
pub struct EulerData {
    pub u: VelocityField,
    pub d1_u1: ScalarField,
    pub d2_u1: ScalarField,
    pub d1_u2: ScalarField,
    pub d2_u2: ScalarField,
    pub lap_u1: ScalarField,
    pub lap_u2: ScalarField,
}

impl EulerData {
    /// Uniform stream (u0, 0): every derivative vanishes.
    pub fn uniform(grid: &Arc<Grid>, u0: f64) -> EulerData {
        let zero = || ScalarField::zeros(grid);
        EulerData {
            u: VelocityField { u1: ScalarField::from_fn(grid, |_, _| u0), u2: zero() },
            d1_u1: zero(),
            d2_u1: zero(),
            d1_u2: zero(),
            d2_u2: zero(),
            lap_u1: zero(),
            lap_u2: zero(),
        }
    }

    /// Numeric Euler state: derivatives by the grid stencils.
    pub fn from_velocity(u: &VelocityField) -> EulerData {
        let d1_u1 = d_x1(&u.u1);
        let d2_u1 = d_x2(&u.u1);
        let d1_u2 = d_x1(&u.u2);
        let d2_u2 = d_x2(&u.u2);
        let lap_u1 = d_x1(&d1_u1).zip(&d_x2(&d2_u1), |a, b| a + b).expect("same grid");
        let lap_u2 = d_x1(&d1_u2).zip(&d_x2(&d2_u2), |a, b| a + b).expect("same grid");
        EulerData { u: u.clone(), d1_u1, d2_u1, d1_u2, d2_u2, lap_u1, lap_u2 }
    }

    /// Analytic Euler flow sampled from closures `(x1, x2) -> value`:
    /// components, first derivatives, Laplacians.
    #[allow(clippy::too_many_arguments)]
    pub fn from_closures(
        grid: &Arc<Grid>,
        u1: impl Fn(f64, f64) -> f64,
        u2: impl Fn(f64, f64) -> f64,
        d1_u1: impl Fn(f64, f64) -> f64,
        d2_u1: impl Fn(f64, f64) -> f64,
        d1_u2: impl Fn(f64, f64) -> f64,
        d2_u2: impl Fn(f64, f64) -> f64,
        lap_u1: impl Fn(f64, f64) -> f64,
        lap_u2: impl Fn(f64, f64) -> f64,
    ) -> EulerData {
        EulerData {
            u: VelocityField {
                u1: ScalarField::from_fn(grid, u1),
                u2: ScalarField::from_fn(grid, u2),
            },
            d1_u1: ScalarField::from_fn(grid, d1_u1),
            d2_u1: ScalarField::from_fn(grid, d2_u1),
            d1_u2: ScalarField::from_fn(grid, d1_u2),
            d2_u2: ScalarField::from_fn(grid, d2_u2),
            lap_u1: ScalarField::from_fn(grid, lap_u1),
            lap_u2: ScalarField::from_fn(grid, lap_u2),
        }
    }
}

/// v = u^NS - u^E - u^K.
pub fn compute_v(uns: &VelocityField, ue: &VelocityField, uk: &VelocityField) -> Result<VelocityField> {
    let g = uns.grid();
    if !g.same_layout(ue.grid()) || !g.same_layout(uk.grid()) {
        return Err(Error::GridMismatch("compute_v arguments on different grids".into()));
    }
    Ok(VelocityField {
        u1: uns.u1.zip(&ue.u1, |a, b| a - b)?.zip(&uk.u1, |a, b| a - b)?,
        u2: uns.u2.zip(&ue.u2, |a, b| a - b)?.zip(&uk.u2, |a, b| a - b)?,
    })
}

/// The terms of the energy identity
/// d/dt (1/2 ||v||^2) + nu ||grad v||^2 = lin_stretch + lin_visc + sum T_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub t: f64,
    pub v_l2_sq: f64,
    pub dissipation: f64,
    pub lin_stretch: f64,
    pub lin_visc: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: f64,
    pub t6: f64,
    pub t6_nu: f64,
    pub identity_residual: f64,
}

impl EnergyBreakdown {
    pub fn terms_sum(&self) -> f64 {
        self.t1 + self.t2 + self.t3 + self.t4 + self.t5 + self.t6
    }
}

/// Evaluate every term of the energy identity at the corrector's time.
///
/// T1 = -int (dt - nu Lap) u^K . v        T4 = -int u1 u2 d1 u^K_2
/// T2 = -int (u^NS . grad u^E) . u^K      T5 = -int (u1^2 - u2^2) d1 u^K_1
/// T3 = -int (u^K . grad u^E) . v         T6 = -int u1 u2 d2 u^K_1
///
/// t6_nu is the erfc-kernel part of T6 in the layer variable:
/// int u1 u2 U^E erfc'(x2/delta)/delta.
pub fn energy_breakdown(
    uns: &VelocityField,
    euler: &EulerData,
    ck: &CorrectorField,
    params: &CorrectorParams,
) -> Result<EnergyBreakdown> {
    let g = Arc::clone(uns.grid());
    if !g.same_layout(euler.u.grid()) || !g.same_layout(&ck.u1.grid) {
        return Err(Error::GridMismatch("energy_breakdown inputs on different grids".into()));
    }
    let t = ck.t;
    let nu = params.nu;
    let uk = VelocityField { u1: ck.u1.clone(), u2: ck.u2.clone() };
    let v = compute_v(uns, &euler.u, &uk)?;

    let v_l2_sq = domain_integral(&g, |i, j| {
        v.u1.at(i, j) * v.u1.at(i, j) + v.u2.at(i, j) * v.u2.at(i, j)
    });

    let dv = [d_x1(&v.u1), d_x2(&v.u1), d_x1(&v.u2), d_x2(&v.u2)];
    let dissipation = nu
        * domain_integral(&g, |i, j| dv.iter().map(|f| f.at(i, j) * f.at(i, j)).sum::<f64>());

    // (w . grad u^E) . z for velocity pairs (w, z)
    let stretch = |w: &VelocityField, z: &VelocityField| {
        domain_integral(&g, |i, j| {
            let g1 = w.u1.at(i, j) * euler.d1_u1.at(i, j) + w.u2.at(i, j) * euler.d2_u1.at(i, j);
            let g2 = w.u1.at(i, j) * euler.d1_u2.at(i, j) + w.u2.at(i, j) * euler.d2_u2.at(i, j);
            g1 * z.u1.at(i, j) + g2 * z.u2.at(i, j)
        })
    };

    let lin_stretch = -stretch(&v, &v);
    let lin_visc = nu
        * domain_integral(&g, |i, j| {
            euler.lap_u1.at(i, j) * v.u1.at(i, j) + euler.lap_u2.at(i, j) * v.u2.at(i, j)
        });

    let t1 = -domain_integral(&g, |i, j| {
        ck.heat_residual_1.at(i, j) * v.u1.at(i, j) + ck.heat_residual_2.at(i, j) * v.u2.at(i, j)
    });
    let t2 = -stretch(uns, &uk);
    let t3 = -stretch(&uk, &v);
    let t4 = -domain_integral(&g, |i, j| uns.u1.at(i, j) * uns.u2.at(i, j) * ck.d1_u2.at(i, j));
    let t5 = -domain_integral(&g, |i, j| {
        (uns.u1.at(i, j) * uns.u1.at(i, j) - uns.u2.at(i, j) * uns.u2.at(i, j)) * ck.d1_u1.at(i, j)
    });
    let t6 = -domain_integral(&g, |i, j| uns.u1.at(i, j) * uns.u2.at(i, j) * ck.d2_u1.at(i, j));

    let (inner, outer) = t6_split(uns, params, t, 0.0)?;
    let t6_nu = inner + outer;

    Ok(EnergyBreakdown {
        t,
        v_l2_sq,
        dissipation,
        lin_stretch,
        lin_visc,
        t1,
        t2,
        t3,
        t4,
        t5,
        t6,
        t6_nu,
        identity_residual: 0.0,
    })
}

/// The erfc-kernel part of T6, split at x2 = rho:
/// int u1 u2 U^E erfc'(x2/delta)/delta over {x2 <= rho} and {x2 > rho}.
/// inner + outer equals t6_nu for every rho.
pub fn t6_split(
    uns: &VelocityField,
    params: &CorrectorParams,
    t: f64,
    rho: f64,
) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::invalid("t6_split requires t > 0"));
    }
    if rho < 0.0 {
        return Err(Error::invalid("t6_split requires rho >= 0"));
    }
    let g = uns.grid();
    let delta = params.scale.delta(params.nu * t);
    let h1 = g.h1();
    let mut inner = 0.0;
    let mut outer = 0.0;
    for i in 0..g.nx {
        let trace = params.trace.eval(g.x1(i), t);
        for j in 0..g.ny {
            let x2 = g.x2(j);
            let kernel = crate::analytic::erfc_prime(x2 / delta) / delta;
            let val = h1 * g.w2(j) * uns.u1.at(i, j) * uns.u2.at(i, j) * trace * kernel;
            if x2 <= rho {
                inner += val;
            } else {
                outer += val;
            }
        }
    }
    Ok((inner, outer))
}

/// Fill per-time identity residuals by centered differencing of the stored
/// 1/2 ||v||^2 and return the maximum magnitude over interior sample times.
pub fn identity_audit(series: &mut [EnergyBreakdown]) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::invalid("identity_audit needs at least 3 sample times"));
    }
    let mut max_res = 0.0f64;
    for k in 1..series.len() - 1 {
        let dt = series[k + 1].t - series[k - 1].t;
        if dt <= 0.0 {
            return Err(Error::invalid("identity_audit requires strictly increasing times"));
        }
        let ddt = 0.5 * (series[k + 1].v_l2_sq - series[k - 1].v_l2_sq) / dt;
        let b = &series[k];
        let res = ddt + b.dissipation - b.lin_stretch - b.lin_visc - b.terms_sum();
        series[k].identity_residual = res;
        max_res = max_res.max(res.abs());
    }
    Ok(max_res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{erfc, erfc_prime, EulerTrace, TimeModulation};
    use crate::corrector::{build_corrector, CorrectorScale};
    use crate::fields::TopBc;
    use std::f64::consts::PI;

    #[test]
    fn v_vanishes_when_ns_equals_euler_and_trace_is_zero() {
        let g = Grid::new(16, 17, 2.0 * PI, 1.0, TopBc::FreeSlip).unwrap();
        let u = VelocityField {
            u1: ScalarField::from_fn(&g, |x1, x2| x1.sin() * x2),
            u2: ScalarField::zeros(&g),
        };
        let params = CorrectorParams::new(1e-3, EulerTrace::Zero, CorrectorScale::Prandtl).unwrap();
        let ck = build_corrector(&params, &g, 0.5).unwrap();
        let uk = VelocityField { u1: ck.u1, u2: ck.u2 };
        let v = compute_v(&u, &u, &uk).unwrap();
        assert_eq!(v.u1.max_abs(), 0.0);
        assert_eq!(v.u2.max_abs(), 0.0);
    }

    #[test]
    fn shear_scenario_v_vanishes_at_wall() {
        // u^NS = exact shear, u^E = uniform stream, corrector with the
        // constant trace: at the wall u^NS = 0 and u^E + u^K = 0
        let (u0, nu, t) = (1.3f64, 1e-3f64, 0.5f64);
        let g = Grid::new(16, 65, 2.0 * PI, 4.0, TopBc::FreeSlip).unwrap();
        let shear = AnalyticShear::new(u0, nu).unwrap();
        let uns = shear.velocity_field(&g, t);
        let euler = EulerData::uniform(&g, u0);
        let params =
            CorrectorParams::new(nu, EulerTrace::Constant { u0 }, CorrectorScale::Prandtl).unwrap();
        let ck = build_corrector(&params, &g, t).unwrap();
        let uk = VelocityField { u1: ck.u1, u2: ck.u2 };
        let v = compute_v(&uns, &euler.u, &uk).unwrap();
        for i in 0..g.nx {
            assert!(v.u1.at(i, 0).abs() < 1e-10);
            assert!(v.u2.at(i, 0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_trace_zeroes_all_t_terms() {
        let g = Grid::new(16, 33, 2.0 * PI, 2.0, TopBc::FreeSlip).unwrap();
        let uns = VelocityField {
            u1: ScalarField::from_fn(&g, |x1, x2| (x1 + x2).sin()),
            u2: ScalarField::from_fn(&g, |x1, x2| x1.cos() * x2),
        };
        let params = CorrectorParams::new(1e-3, EulerTrace::Zero, CorrectorScale::Prandtl).unwrap();
        let ck = build_corrector(&params, &g, 0.5).unwrap();
        let euler = EulerData::uniform(&g, 0.0);
        let b = energy_breakdown(&uns, &euler, &ck, &params).unwrap();
        assert_eq!(b.t1, 0.0);
        assert_eq!(b.t2, 0.0);
        assert_eq!(b.t3, 0.0);
        assert_eq!(b.t4, 0.0);
        assert_eq!(b.t5, 0.0);
        assert_eq!(b.t6, 0.0);
        assert_eq!(b.t6_nu, 0.0);
    }

    #[test]
    fn shear_zeroes_the_quadratic_terms() {
        // u2 = 0 and d1 u^K = 0 for the constant trace
        let (u0, nu, t) = (1.0f64, 1e-3f64, 0.5f64);
        let g = Grid::new(16, 65, 2.0 * PI, 4.0, TopBc::FreeSlip).unwrap();
        let shear = AnalyticShear::new(u0, nu).unwrap();
        let uns = shear.velocity_field(&g, t);
        let euler = EulerData::uniform(&g, u0);
        let params =
            CorrectorParams::new(nu, EulerTrace::Constant { u0 }, CorrectorScale::Prandtl).unwrap();
        let ck = build_corrector(&params, &g, t).unwrap();
        let b = energy_breakdown(&uns, &euler, &ck, &params).unwrap();
        assert_eq!(b.t4, 0.0);
        assert_eq!(b.t5, 0.0);
        assert_eq!(b.t6, 0.0);
        assert_eq!(b.t6_nu, 0.0);
        assert_eq!(b.lin_stretch, 0.0);
        assert_eq!(b.lin_visc, 0.0);
    }

    /// The manufactured divergence-free pair used by the oracle tests:
    /// psi^NS = (sin x1 + 2 cos 2x1 + 1.5 sin 2x1 + 0.3) x2^2 e^{-x2}
    /// (mixed harmonics and a mean so no T term dies by x1 parity),
    /// psi^E = cos(x1) x2 e^{-x2} (so the Euler trace is cos x1).
    fn f_ns(x1: f64) -> f64 {
        x1.sin() + 2.0 * (2.0 * x1).cos() + 1.5 * (2.0 * x1).sin() + 0.3
    }
    fn fp_ns(x1: f64) -> f64 {
        x1.cos() - 4.0 * (2.0 * x1).sin() + 3.0 * (2.0 * x1).cos()
    }

    fn manufactured(g: &Arc<Grid>, nu: f64) -> (VelocityField, EulerData, CorrectorParams) {
        let uns = VelocityField {
            u1: ScalarField::from_fn(g, |x1, x2| f_ns(x1) * (-x2).exp() * (2.0 * x2 - x2 * x2)),
            u2: ScalarField::from_fn(g, |x1, x2| -fp_ns(x1) * x2 * x2 * (-x2).exp()),
        };
        let euler = EulerData::from_closures(
            g,
            |x1, x2| x1.cos() * (-x2).exp() * (1.0 - x2),
            |x1, x2| x1.sin() * x2 * (-x2).exp(),
            |x1, x2| -x1.sin() * (-x2).exp() * (1.0 - x2),
            |x1, x2| x1.cos() * (-x2).exp() * (x2 - 2.0),
            |x1, x2| x1.cos() * x2 * (-x2).exp(),
            |x1, x2| x1.sin() * (-x2).exp() * (1.0 - x2),
            |x1, x2| -x1.cos() * (-x2).exp() * (1.0 - x2) + x1.cos() * (-x2).exp() * (3.0 - x2),
            |x1, x2| -x1.sin() * x2 * (-x2).exp() + x1.sin() * (-x2).exp() * (x2 - 2.0),
        );
        let params = CorrectorParams::new(
            nu,
            EulerTrace::Cosine { amplitude: 1.0, wavenumber: 1, modulation: TimeModulation::Steady },
            CorrectorScale::Prandtl,
        )
        .unwrap();
        (uns, euler, params)
    }

    /// One 4x-refined x2 node with its trapezoid weight and every
    /// x2-dependent factor of the manufactured pair precomputed.
    struct OracleRow {
        w: f64,
        g1: f64,       // e^{-x2}(2 x2 - x2^2), the u1^NS profile
        g2: f64,       // x2^2 e^{-x2}, the u2^NS profile
        a: f64,        // e^{-x2}(1 - x2), the u1^E profile
        b: f64,        // x2 e^{-x2}, the u2^E profile
        d: f64,        // e^{-x2}(x2 - 2), the d2 u1^E profile
        lift: f64,     // erfc(z) - delta eta
        lift_d2: f64,  // erfc'(z)/delta - delta eta'
        eta: f64,
        eta2: f64,     // eta''
        r: f64,        // R(x2) at scale delta
        rz: f64,       // R - z erfc(z)
    }

    /// Independent brute-force oracle for the T terms: trapezoid on a
    /// 4x-refined node set with every factor evaluated from closures.
    fn oracle_t_terms(g: &Arc<Grid>, params: &CorrectorParams, t: f64) -> [f64; 6] {
        let bump = &params.bump;
        let nu = params.nu;
        let delta = (4.0 * nu * t).sqrt();
        let dprime = 1.0 / (nu * t).sqrt();

        let mut x2s = Vec::new();
        for j in 0..g.ny - 1 {
            let (lo, hi) = (g.x2(j), g.x2(j + 1));
            for m in 0..4 {
                x2s.push(lo + (hi - lo) * m as f64 / 4.0);
            }
        }
        x2s.push(g.height_x2);
        let mut rows: Vec<OracleRow> = x2s
            .iter()
            .map(|&x2| {
                let e = (-x2).exp();
                let z = x2 / delta;
                let ec = erfc(z);
                let r = crate::analytic::r_profile_scaled(x2, delta, bump);
                OracleRow {
                    w: 0.0,
                    g1: e * (2.0 * x2 - x2 * x2),
                    g2: x2 * x2 * e,
                    a: e * (1.0 - x2),
                    b: x2 * e,
                    d: e * (x2 - 2.0),
                    lift: ec - delta * bump.eta(x2),
                    lift_d2: erfc_prime(z) / delta - delta * bump.eta_prime(x2),
                    eta: bump.eta(x2),
                    eta2: bump.eta_second(x2),
                    r,
                    rz: r - z * ec,
                }
            })
            .collect();
        for m in 0..x2s.len() - 1 {
            let h = x2s[m + 1] - x2s[m];
            rows[m].w += 0.5 * h;
            rows[m + 1].w += 0.5 * h;
        }

        let nx4 = 4 * g.nx;
        let h1 = g.length_x1 / nx4 as f64;
        let mut out = [0.0f64; 6];
        for i in 0..nx4 {
            let x1 = i as f64 * h1;
            let (s, c) = (x1.sin(), x1.cos());
            let (f, fp) = (f_ns(x1), fp_ns(x1));
            for p in &rows {
                let w = h1 * p.w;
                let uns1 = f * p.g1;
                let uns2 = -fp * p.g2;
                let ue1 = c * p.a;
                let ue2 = s * p.b;
                let (d1ue1, d2ue1) = (-s * p.a, c * p.d);
                let (d1ue2, d2ue2) = (c * p.b, s * p.a);
                let uk1 = -c * p.lift;
                let uk2 = delta * (-s) * p.r;
                let d1uk1 = s * p.lift;
                let d2uk1 = -c * p.lift_d2;
                let d1uk2 = delta * (-c) * p.r;
                let res1 = -nu * c * p.lift + c * nu * (dprime * p.eta - delta * p.eta2);
                let res2 =
                    nu * s * p.lift_d2 - nu * delta * s * p.r + nu * dprime * (-s) * p.rz;
                let v1 = uns1 - ue1 - uk1;
                let v2 = uns2 - ue2 - uk2;
                out[0] -= w * (res1 * v1 + res2 * v2);
                out[1] -= w
                    * ((uns1 * d1ue1 + uns2 * d2ue1) * uk1 + (uns1 * d1ue2 + uns2 * d2ue2) * uk2);
                out[2] -=
                    w * ((uk1 * d1ue1 + uk2 * d2ue1) * v1 + (uk1 * d1ue2 + uk2 * d2ue2) * v2);
                out[3] -= w * uns1 * uns2 * d1uk2;
                out[4] -= w * (uns1 * uns1 - uns2 * uns2) * d1uk1;
                out[5] -= w * uns1 * uns2 * d2uk1;
            }
        }
        out
    }

    #[test]
    fn t_terms_match_brute_force_oracle() {
        let (nu, t) = (1e-2f64, 0.5);
        let delta = (4.0 * nu * t).sqrt();
        let g =
            Grid::wall_resolved(16, 2.0 * PI, 4.0, TopBc::FreeSlip, delta, 1536, 1.0002).unwrap();
        let (uns, euler, params) = manufactured(&g, nu);
        let ck = build_corrector(&params, &g, t).unwrap();
        let b = energy_breakdown(&uns, &euler, &ck, &params).unwrap();
        let oracle = oracle_t_terms(&g, &params, t);
        let got = [b.t1, b.t2, b.t3, b.t4, b.t5, b.t6];
        for (k, (x, y)) in got.iter().zip(oracle.iter()).enumerate() {
            assert!(y.abs() > 1e-5, "oracle T{} degenerate: {y}", k + 1);
            assert!(
                (x - y).abs() <= 1e-6 * y.abs(),
                "T{}: {x} vs oracle {y} (rel {:.2e})",
                k + 1,
                (x - y).abs() / y.abs()
            );
        }
    }

    #[test]
    fn t6_split_additivity_and_degenerate_rho() {
        let t = 0.5;
        let g = Grid::new(32, 129, 2.0 * PI, 4.0, TopBc::FreeSlip).unwrap();
        let (uns, _, params) = manufactured(&g, 1e-2);
        let (i0, o0) = t6_split(&uns, &params, t, 0.0).unwrap();
        assert_eq!(i0, 0.0);
        let total = i0 + o0;
        for rho in [0.01, 0.1, 0.5, 2.0, 10.0] {
            let (inner, outer) = t6_split(&uns, &params, t, rho).unwrap();
            assert!(
                ((inner + outer) - total).abs() <= 1e-10 * total.abs().max(1e-12),
                "rho={rho}"
            );
        }
    }

    #[test]
    fn identity_audit_zero_for_frozen_zero_v() {
        let g = Grid::new(16, 33, 2.0 * PI, 2.0, TopBc::FreeSlip).unwrap();
        let u = VelocityField {
            u1: ScalarField::from_fn(&g, |_, x2| x2),
            u2: ScalarField::zeros(&g),
        };
        let params = CorrectorParams::new(1e-6, EulerTrace::Zero, CorrectorScale::Prandtl).unwrap();
        let euler = EulerData::from_velocity(&u);
        let mut series: Vec<EnergyBreakdown> = [0.1, 0.2, 0.3, 0.4]
            .iter()
            .map(|&t| {
                let ck = build_corrector(&params, &g, t).unwrap();
                let mut b = energy_breakdown(&u, &euler, &ck, &params).unwrap();
                // nu ||grad v||^2 = 0 exactly since v = 0
                b.t = t;
                b
            })
            .collect();
        let res = identity_audit(&mut series).unwrap();
        assert!(res < 1e-10, "{res}");
    }

    #[test]
    fn identity_audit_rejects_short_series() {
        let mut series = vec![];
        assert!(identity_audit(&mut series).is_err());
    }
}
