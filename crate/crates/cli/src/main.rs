//! katolab command line: corrector self-checks, single solves with
//! snapshot dumps, nu sweeps, snapshot diagnostics, and report re-rendering.

use clap::{Parser, Subcommand};
use katolab::analytic::{EulerTrace, TimeModulation};
use katolab::corrector::{
    zero_mean_check, scaling_exponents, CorrectorParams, CorrectorQuantity, CorrectorScale,
};
use katolab::fields::{Grid, TopBc};
use katolab::harness::{emit_outputs, load_config, run_sweep, Report, ScenarioKind, SweepConfig};
use katolab::io::{fnv1a_hex, save_snapshot, GridMeta, SnapshotMeta};
use katolab::solver::{Model, Scenario, Solver, SolverConfig};
use rand::{Rng, SeedableRng};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "katolab", version, about = "vanishing-viscosity boundary-layer laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corrector self-checks: scaling exponents, zero mean, residual norms
    CorrectorCheck {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the configured scenario for each nu and dump final snapshots
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full nu sweep with diagnostics, rate fits, and report emission
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_svg: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Diagnostics for an existing snapshot (snapshot_replay config)
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_svg: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Re-render CSV/SVG outputs from an existing summary.json
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_svg: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CorrectorCheck { config } => corrector_check(config),
        Command::Solve { config, out } => solve(&config, &out),
        Command::Sweep { config, out, no_svg, jobs } => sweep(&config, out, no_svg, jobs, false),
        Command::Diagnose { config, out, no_svg, jobs } => sweep(&config, out, no_svg, jobs, true),
        Command::Report { out, no_svg } => rerender(&out, no_svg),
    };
    match result {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn check_line(ok: bool, name: &str, detail: &str) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn corrector_check(config: Option<PathBuf>) -> anyhow::Result<bool> {
    let c = match config {
        Some(p) => load_config(&p)?,
        None => SweepConfig::default(),
    };
    let mut all_ok = true;
    let trace =
        EulerTrace::Cosine { amplitude: 1.0, wavenumber: 1, modulation: TimeModulation::Steady };
    let scales: [(&str, CorrectorScale); 2] = [
        ("prandtl", CorrectorScale::Prandtl),
        ("power", CorrectorScale::power(c.scale_a)?),
    ];

    // zero mean of the corrected profile at random (x1, t, nu)
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (name, scale) in &scales {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let nu = 10f64.powf(rng.gen_range(-6.0..-2.0));
            let t = rng.gen_range(0.05..1.0);
            let x1 = rng.gen_range(0.0..c.length_x1);
            let params = CorrectorParams::new(nu, trace, *scale)?;
            worst = worst.max(zero_mean_check(&params, x1, t)?.abs());
        }
        all_ok &= check_line(
            worst <= 1e-8,
            "zero-mean",
            &format!("{name}: worst |integral| = {worst:.3e} (tolerance 1e-8)"),
        );
    }

    // scaling exponents of the layer norms against nu t
    let nut: Vec<f64> = (0..9).map(|k| 10f64.powf(-6.0 + 0.5 * k as f64)).collect();
    let params = CorrectorParams::new(1e-4, trace, CorrectorScale::Prandtl)?;
    for q in CorrectorQuantity::ALL {
        let ps: &[f64] = match q {
            CorrectorQuantity::U1 | CorrectorQuantity::D1U1 => &[1.0, 2.0, 4.0],
            CorrectorQuantity::D2U1 | CorrectorQuantity::D12U1 => &[2.0, 4.0],
            CorrectorQuantity::U2 | CorrectorQuantity::D1U2 => &[2.0, f64::INFINITY],
        };
        for &p in ps {
            let expected = q.expected_exponent(p);
            let got = scaling_exponents(&params, p, q, &nut)?;
            all_ok &= check_line(
                (got - expected).abs() < 0.02,
                "scaling",
                &format!("{} at p = {p}: exponent {got:.4} (expected {expected:.4})", q.name()),
            );
        }
    }

    // residual norms stay bounded by the analytic envelope across a decade;
    // the envelope constant is the worst ratio over a time grid so it probes
    // the regime where each envelope term dominates
    let grid = Grid::wall_resolved(16, c.length_x1, c.height_x2, TopBc::FreeSlip, 2e-3, 48, 1.06)?;
    let mut ratios = Vec::new();
    for &nu in &[1e-3, 1e-4] {
        let params = CorrectorParams::new(nu, trace, CorrectorScale::Prandtl)?;
        let mut c1 = 0.0f64;
        let mut c2 = 0.0f64;
        for &t in &[0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0] {
            let (r1, r2) = katolab::corrector::heat_residual_norm(&params, &grid, t)?;
            let env1 = (nu * t).powf(0.25) + nu.sqrt() / t.sqrt();
            let env2 = nu.sqrt() / t.sqrt() + (nu * t).sqrt();
            c1 = c1.max(r1 / env1);
            c2 = c2.max(r2 / env2);
        }
        ratios.push((c1, c2));
    }
    let spread1 = (ratios[0].0 - ratios[1].0).abs() / ratios[0].0.max(ratios[1].0);
    let spread2 = (ratios[0].1 - ratios[1].1).abs() / ratios[0].1.max(ratios[1].1);
    all_ok &= check_line(
        spread1 < 0.2 && spread2 < 0.2,
        "residual-envelope",
        &format!("constant spread across a nu decade: {spread1:.3} / {spread2:.3} (< 0.2)"),
    );

    Ok(all_ok)
}

fn solve(config: &PathBuf, out: &PathBuf) -> anyhow::Result<bool> {
    let c = load_config(config)?;
    if !c.scenario.is_numeric() {
        anyhow::bail!("solve requires a numeric scenario (shear_numeric, perturbed_shear)");
    }
    std::fs::create_dir_all(out)?;
    let config_hash = fnv1a_hex(katolab::harness::emit_config(&c).as_bytes());
    for (idx, &nu) in c.nu_list.iter().enumerate() {
        let grid = Grid::new(c.nx, c.ny, c.length_x1, c.height_x2, TopBc::FreeSlip)?;
        let scenario = match c.scenario {
            ScenarioKind::PerturbedShear => Scenario::PerturbedShear {
                u0: c.u0,
                t0: c.t_min,
                amplitude: c.amplitude,
                wavenumber: c.wavenumber as u32,
            },
            _ => Scenario::Shear { u0: c.u0, t0: c.t_min },
        };
        let mut sc = SolverConfig::new(Model::NavierStokes { nu }, scenario, c.t_end);
        sc.cfl = c.cfl;
        let mut solver = Solver::new(Arc::clone(&grid), sc)?;
        solver.run()?;
        let meta = SnapshotMeta {
            grid: GridMeta::of(&grid),
            model: Model::NavierStokes { nu },
            t: solver.state.t,
            u_top: solver.state.u_top,
            config_hash: config_hash.clone(),
        };
        let base = out.join(format!("snapshot_{idx}"));
        save_snapshot(&base, &solver.state.omega, &meta)?;
        println!("wrote {} (nu = {nu}, t = {})", base.display(), solver.state.t);
    }
    Ok(true)
}

fn sweep(
    config: &PathBuf,
    out: Option<PathBuf>,
    no_svg: bool,
    jobs: Option<usize>,
    require_replay: bool,
) -> anyhow::Result<bool> {
    let c = load_config(config)?;
    if require_replay && c.scenario != ScenarioKind::SnapshotReplay {
        anyhow::bail!("diagnose requires scenario = snapshot_replay");
    }
    let report = run_sweep(&c, jobs)?;
    let dir = out.unwrap_or_else(|| PathBuf::from(&c.out_dir));
    emit_outputs(&report, &dir, c.svg && !no_svg)?;
    let mut ok = true;
    for o in &report.outcomes {
        if o.quarantined {
            ok = false;
            println!(
                "FAIL nu = {}: quarantined ({})",
                o.nu,
                o.error.as_deref().unwrap_or("unknown")
            );
        } else {
            println!(
                "PASS nu = {}: sup|v| = {:.6e}, kato = {:.6e}, identity residual = {:.3e}",
                o.nu, o.sup_v_l2, o.kato, o.max_identity_residual
            );
        }
    }
    println!("report written to {}", dir.display());
    Ok(ok)
}

fn rerender(out: &PathBuf, no_svg: bool) -> anyhow::Result<bool> {
    let path = out.join("summary.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let report: Report = serde_json::from_str(&text)?;
    emit_outputs(&report, out, !no_svg)?;
    println!("re-rendered outputs in {}", out.display());
    Ok(true)
}
