//! The nu sweep: for each viscosity, produce a trajectory (closed-form
//! playback or solver run), evaluate the corrector, the energy breakdown,
//! and all criteria/assumption functionals, then fit decay rates across
//! the sweep. Workers are independent; a solver abort quarantines that nu
//! and the report marks the gap.

use super::config::{GridPolicy, ScenarioKind, SweepConfig};
use super::fit::{fit_rate, FitStatus};
use crate::analytic::{erfc, AnalyticShear, EulerTrace};
use crate::corrector::{build_corrector, CorrectorParams};
use crate::diagnostics::{
    analytic_shear_trajectory, bt_boundary_vorticity, cells_in_layer, ckv_functional,
    energy_breakdown, equicontinuity_modulus, identity_audit, kato_functional,
    kelliher_functional, mixed_variants, temam_wang_functional, thm13_functionals,
    uniform_integrability, EnergyBreakdown, EulerData, TrajectorySample,
};
use crate::error::{Error, Result};
use crate::fields::{lp_norm, Grid, TopBc};
use crate::io::{fnv1a_hex, load_snapshot};
use crate::solver::{Model, Scenario, Solver, SolverConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Hard cap on vertical cells under the nu-refined policy; finer demands
/// are a config error, not a silent coarse run.
const MAX_REFINED_NY: usize = 4097;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionRow {
    pub nu: f64,
    pub rho: f64,
    pub modulus: f64,
    pub uniform_integrability: f64,
    pub boundedness: f64,
    pub mixed_integrability: f64,
    pub mixed_boundedness: f64,
}

/// Everything measured for one viscosity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuOutcome {
    pub nu: f64,
    pub quarantined: bool,
    pub error: Option<String>,
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub grid_grading: f64,
    pub sup_v_l2: f64,
    pub sup_diff_l2: f64,
    pub max_identity_residual: f64,
    pub kato: f64,
    pub kelliher: f64,
    pub temam_wang: f64,
    pub bt: f64,
    pub ckv: f64,
    pub wang_integral: f64,
    pub layer_sup_integral: f64,
    pub layer_clipped: bool,
    /// whole cells inside the Kato layer C nu; < 2 means under-resolved
    pub kato_layer_cells: usize,
    /// truncation estimate: erfc(height / delta(nu T)), the relative mass
    /// of the corrector profile cut off by the finite strip
    pub tail_erfc: f64,
    pub energy: Vec<EnergyBreakdown>,
    pub assumptions: Vec<AssumptionRow>,
}

impl NuOutcome {
    fn failed(nu: f64, err: &Error) -> NuOutcome {
        NuOutcome {
            nu,
            quarantined: true,
            error: Some(format!("{err}")),
            grid_nx: 0,
            grid_ny: 0,
            grid_grading: 0.0,
            sup_v_l2: 0.0,
            sup_diff_l2: 0.0,
            max_identity_residual: 0.0,
            kato: 0.0,
            kelliher: 0.0,
            temam_wang: 0.0,
            bt: 0.0,
            ckv: 0.0,
            wang_integral: 0.0,
            layer_sup_integral: 0.0,
            layer_clipped: false,
            kato_layer_cells: 0,
            tail_erfc: 0.0,
            energy: vec![],
            assumptions: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRate {
    pub name: String,
    pub fit: FitStatus,
    /// the (nu, value) pairs the fit saw, for plotting and traceability
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config_text: String,
    pub config_hash: String,
    pub outcomes: Vec<NuOutcome>,
    pub rates: Vec<NamedRate>,
}

fn build_grid(c: &SweepConfig, nu: f64) -> Result<Arc<Grid>> {
    match c.grid_policy {
        GridPolicy::Fixed => {
            if c.scenario.is_numeric() || (c.grid_ratio - 1.0).abs() < 1e-14 {
                Grid::new(c.nx, c.ny, c.length_x1, c.height_x2, TopBc::FreeSlip)
            } else {
                Grid::graded(c.nx, c.ny, c.length_x1, c.height_x2, TopBc::FreeSlip, c.grid_ratio)
            }
        }
        GridPolicy::NuRefined => {
            let layer = (nu * c.t_min).sqrt();
            if c.scenario.is_numeric() {
                // the solver needs uniform spacing; refine globally
                let h = layer / c.cells_per_layer as f64;
                let ny = (c.height_x2 / h).ceil() as usize + 1;
                if ny > MAX_REFINED_NY {
                    return Err(Error::invalid(format!(
                        "nu-refined uniform grid needs ny = {ny} > {MAX_REFINED_NY} at nu = {nu}; \
                         use grid.policy = fixed or a larger nu"
                    )));
                }
                Grid::new(c.nx, ny.max(8), c.length_x1, c.height_x2, TopBc::FreeSlip)
            } else {
                Grid::wall_resolved(
                    c.nx,
                    c.length_x1,
                    c.height_x2,
                    TopBc::FreeSlip,
                    layer,
                    c.cells_per_layer,
                    c.grid_ratio.max(1.0 + 1e-12),
                )
            }
        }
    }
}

fn numeric_trajectory(
    c: &SweepConfig,
    nu: f64,
    grid: &Arc<Grid>,
    times: &[f64],
) -> Result<Vec<TrajectorySample>> {
    let scenario = match c.scenario {
        ScenarioKind::ShearNumeric => Scenario::Shear { u0: c.u0, t0: times[0] },
        ScenarioKind::PerturbedShear => Scenario::PerturbedShear {
            u0: c.u0,
            t0: times[0],
            amplitude: c.amplitude,
            wavenumber: c.wavenumber as u32,
        },
        ScenarioKind::SnapshotReplay => {
            let (omega, meta) = load_snapshot(std::path::Path::new(&c.snapshot))?;
            Scenario::FromState { omega, u_top: meta.u_top, t: meta.t }
        }
        ScenarioKind::ShearAnalytic => unreachable!(),
    };
    let mut sc = SolverConfig::new(Model::NavierStokes { nu }, scenario, c.t_end);
    sc.cfl = c.cfl;
    let mut solver = Solver::new(Arc::clone(grid), sc)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < solver.state.t - 1e-12 {
            continue; // snapshot starts later than this sample
        }
        solver.advance_to(t, |_| {})?;
        out.push(TrajectorySample {
            t: solver.state.t,
            u: solver.state.u.clone(),
            omega: solver.state.omega.clone(),
        });
    }
    if out.len() < 3 {
        return Err(Error::invalid("fewer than 3 sample times reachable from the initial state"));
    }
    Ok(out)
}

fn run_one(c: &SweepConfig, nu: f64) -> Result<NuOutcome> {
    // snapshot replay must run on the grid the snapshot was written on
    let grid = if c.scenario == ScenarioKind::SnapshotReplay {
        let (omega, _) = load_snapshot(std::path::Path::new(&c.snapshot))?;
        Arc::clone(&omega.grid)
    } else {
        build_grid(c, nu)?
    };
    let times = c.sample_times();
    let traj = if c.scenario.is_numeric() {
        numeric_trajectory(c, nu, &grid, &times)?
    } else {
        let shear = AnalyticShear::new(c.u0, nu)?;
        analytic_shear_trajectory(&shear, &grid, &times)?
    };
    let grid = Arc::clone(traj[0].u.grid());
    let trace = if c.u0 == 0.0 { EulerTrace::Zero } else { EulerTrace::Constant { u0: c.u0 } };
    let scale = c.corrector_scale()?;
    let params = CorrectorParams::new(nu, trace, scale)?;
    let euler = EulerData::uniform(&grid, c.u0);

    let mut energy: Vec<EnergyBreakdown> = traj
        .iter()
        .map(|s| {
            let ck = build_corrector(&params, &grid, s.t)?;
            energy_breakdown(&s.u, &euler, &ck, &params)
        })
        .collect::<Result<_>>()?;
    let max_identity_residual = identity_audit(&mut energy)?;

    let mut sup_v_l2 = 0.0f64;
    let mut sup_diff_l2 = 0.0f64;
    for s in &traj {
        let d1 = s.u.u1.map(|v| v - c.u0);
        let n = lp_norm(&d1, 2.0)?.hypot(lp_norm(&s.u.u2, 2.0)?);
        sup_diff_l2 = sup_diff_l2.max(n);
    }
    for b in &energy {
        sup_v_l2 = sup_v_l2.max(b.v_l2_sq.max(0.0).sqrt());
    }

    let kato = kato_functional(&traj, nu, c.kato_c)?;
    let kelliher = kelliher_functional(&traj, nu, c.kato_c)?;
    let temam_wang = temam_wang_functional(&traj, nu, nu.powf(c.delta_a))?;
    let bt = bt_boundary_vorticity(&traj, nu)?;
    let ckv = ckv_functional(&traj, &trace, nu, &params.scale)?;
    let (wang_integral, layer_sup_integral, layer_clipped) = if nu < 1.0 {
        let rep = thm13_functionals(&traj, nu, c.delta_a, c.thm13_c)?;
        (rep.wang_integral, rep.layer_sup_integral, rep.layer_clipped)
    } else {
        (0.0, 0.0, false)
    };

    let modulus = equicontinuity_modulus(&traj, &c.rho_list)?;
    let mut assumptions = Vec::with_capacity(c.rho_list.len());
    for (&rho, &(_, e)) in c.rho_list.iter().zip(modulus.iter()) {
        let i = uniform_integrability(&traj, rho)?;
        let b = crate::diagnostics::boundedness(&traj, rho)?;
        let (mi, mb) = mixed_variants(&traj, rho)?;
        assumptions.push(AssumptionRow {
            nu,
            rho,
            modulus: e,
            uniform_integrability: i,
            boundedness: b,
            mixed_integrability: mi,
            mixed_boundedness: mb,
        });
    }

    Ok(NuOutcome {
        nu,
        quarantined: false,
        error: None,
        grid_nx: grid.nx,
        grid_ny: grid.ny,
        grid_grading: grid.grading,
        sup_v_l2,
        sup_diff_l2,
        max_identity_residual,
        kato,
        kelliher,
        temam_wang,
        bt,
        ckv,
        wang_integral,
        layer_sup_integral,
        layer_clipped,
        kato_layer_cells: cells_in_layer(&grid, c.kato_c * nu),
        tail_erfc: erfc(grid.height_x2 / params.scale.delta(nu * c.t_end)),
        energy,
        assumptions,
    })
}

fn fit_over(outcomes: &[NuOutcome], name: &str, get: impl Fn(&NuOutcome) -> f64) -> NamedRate {
    let points: Vec<(f64, f64)> = outcomes
        .iter()
        .filter(|o| !o.quarantined)
        .map(|o| (o.nu, get(o)))
        .collect();
    NamedRate { name: name.to_string(), fit: fit_rate(&points), points }
}

/// Run the whole sweep. `jobs` bounds the worker count (None = rayon's
/// default). Results are ordered by nu_list regardless of scheduling, so
/// output bytes do not depend on parallelism.
pub fn run_sweep(c: &SweepConfig, jobs: Option<usize>) -> Result<Report> {
    let config_text = super::config::emit_config(c);
    let config_hash = fnv1a_hex(config_text.as_bytes());
    let work = |&nu: &f64| run_one(c, nu).unwrap_or_else(|e| NuOutcome::failed(nu, &e));
    let outcomes: Vec<NuOutcome> = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
            pool.install(|| c.nu_list.par_iter().map(work).collect())
        }
        None => c.nu_list.par_iter().map(work).collect(),
    };
    let rates = vec![
        fit_over(&outcomes, "sup_diff_l2", |o| o.sup_diff_l2),
        fit_over(&outcomes, "sup_v_l2", |o| o.sup_v_l2),
        fit_over(&outcomes, "kato", |o| o.kato),
        fit_over(&outcomes, "kelliher", |o| o.kelliher),
        fit_over(&outcomes, "temam_wang", |o| o.temam_wang),
        fit_over(&outcomes, "bt", |o| o.bt),
        fit_over(&outcomes, "ckv", |o| o.ckv),
        fit_over(&outcomes, "wang_integral", |o| o.wang_integral),
    ];
    Ok(Report { config_text, config_hash, outcomes, rates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::parse_config;

    fn analytic_config(nu_list: &str) -> SweepConfig {
        parse_config(&format!(
            "scenario = shear_analytic\nsweep.nu = {nu_list}\ntime.t_min = 0.05\n\
             time.t_end = 1.0\ntime.samples = 9\ngrid.nx = 8\ngrid.cells_per_layer = 16\n\
             grid.ratio = 1.05\n"
        ))
        .unwrap()
    }

    #[test]
    fn analytic_shear_sweep_recovers_quarter_rate() {
        let c = analytic_config("[1e-2, 1e-3, 1e-4]");
        let report = run_sweep(&c, Some(2)).unwrap();
        assert!(report.outcomes.iter().all(|o| !o.quarantined));
        let rate = report.rates.iter().find(|r| r.name == "sup_diff_l2").unwrap();
        match &rate.fit {
            FitStatus::Fitted { fit, .. } => {
                assert!((fit.exponent - 0.25).abs() < 0.02, "exponent {}", fit.exponent);
            }
            other => panic!("unexpected {other:?}"),
        }
        // criteria decrease with nu
        for w in report.outcomes.windows(2) {
            assert!(w[1].kato < w[0].kato);
            assert!(w[1].bt < w[0].bt);
        }
    }

    #[test]
    fn zero_stream_scenario_is_all_zero() {
        let mut c = analytic_config("[1e-2, 1e-3, 1e-4]");
        c.u0 = 0.0;
        let report = run_sweep(&c, None).unwrap();
        for o in &report.outcomes {
            assert!(!o.quarantined);
            assert_eq!(o.sup_v_l2, 0.0);
            assert_eq!(o.sup_diff_l2, 0.0);
            assert_eq!(o.kato, 0.0);
            assert_eq!(o.bt, 0.0);
            for b in &o.energy {
                assert_eq!(b.terms_sum(), 0.0);
            }
        }
        let rate = report.rates.iter().find(|r| r.name == "kato").unwrap();
        assert_eq!(rate.fit, FitStatus::IdenticallyZero);
    }

    #[test]
    fn sweep_isolation_removing_one_nu() {
        let c_full = analytic_config("[1e-2, 1e-3, 1e-4]");
        let c_less = analytic_config("[1e-2, 1e-4]");
        let full = run_sweep(&c_full, None).unwrap();
        let less = run_sweep(&c_less, None).unwrap();
        for o in &less.outcomes {
            let twin = full.outcomes.iter().find(|p| p.nu == o.nu).unwrap();
            assert_eq!(o, twin);
        }
    }

    #[test]
    fn repeated_runs_are_identical() {
        let c = analytic_config("[1e-2, 1e-3]");
        let a = run_sweep(&c, Some(2)).unwrap();
        let b = run_sweep(&c, Some(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oversized_refined_grid_is_quarantined_not_fatal() {
        let c = parse_config(
            "scenario = shear_numeric\nsweep.nu = [1e-2, 1e-9]\ntime.t_min = 0.05\n\
             time.t_end = 0.1\ntime.samples = 3\ngrid.nx = 8\ngrid.cells_per_layer = 8\n",
        )
        .unwrap();
        let report = run_sweep(&c, None).unwrap();
        assert!(!report.outcomes[0].quarantined);
        assert!(report.outcomes[1].quarantined);
        assert!(report.outcomes[1].error.as_ref().unwrap().contains("nu-refined"));
    }

    #[test]
    fn numeric_shear_close_to_analytic_playback() {
        let numeric = parse_config(
            "scenario = shear_numeric\nsweep.nu = [1e-2]\ntime.t_min = 0.1\ntime.t_end = 0.3\n\
             time.samples = 4\ngrid.nx = 8\ngrid.policy = fixed\ngrid.ny = 257\n",
        )
        .unwrap();
        let analytic = parse_config(
            "scenario = shear_analytic\nsweep.nu = [1e-2]\ntime.t_min = 0.1\ntime.t_end = 0.3\n\
             time.samples = 4\ngrid.nx = 8\ngrid.policy = fixed\ngrid.ny = 257\n",
        )
        .unwrap();
        let rn = run_sweep(&numeric, None).unwrap();
        let ra = run_sweep(&analytic, None).unwrap();
        let (on, oa) = (&rn.outcomes[0], &ra.outcomes[0]);
        assert!(!on.quarantined && !oa.quarantined);
        assert!(
            (on.sup_diff_l2 - oa.sup_diff_l2).abs() < 0.02 * oa.sup_diff_l2,
            "{} vs {}",
            on.sup_diff_l2,
            oa.sup_diff_l2
        );
        assert!((on.bt - oa.bt).abs() < 0.05 * oa.bt, "{} vs {}", on.bt, oa.bt);
    }
}
