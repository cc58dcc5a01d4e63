//! Report emission: summary.json (the full report), three flat CSV tables,
//! and optional log-log SVG plots of each fitted rate. Output bytes are a
//! pure function of the report.

use super::fit::FitStatus;
use super::sweep::{NamedRate, Report};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub const ENERGY_HEADER: &str =
    "nu,t,v_l2_sq,dissipation,lin_stretch,lin_visc,t1,t2,t3,t4,t5,t6,t6_nu,identity_residual";
pub const CRITERIA_HEADER: &str = "nu,kato,kelliher,temam_wang,bt,ckv,wang_integral,\
layer_sup_integral,layer_clipped,kato_layer_cells,tail_erfc,sup_v_l2,sup_diff_l2,\
max_identity_residual,quarantined";
pub const ASSUMPTIONS_HEADER: &str =
    "nu,rho,modulus,uniform_integrability,boundedness,mixed_integrability,mixed_boundedness";

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), source: e })
}

pub fn energy_csv(report: &Report) -> String {
    let mut s = String::from(ENERGY_HEADER);
    s.push('\n');
    for o in &report.outcomes {
        for b in &o.energy {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                o.nu,
                b.t,
                b.v_l2_sq,
                b.dissipation,
                b.lin_stretch,
                b.lin_visc,
                b.t1,
                b.t2,
                b.t3,
                b.t4,
                b.t5,
                b.t6,
                b.t6_nu,
                b.identity_residual
            );
        }
    }
    s
}

pub fn criteria_csv(report: &Report) -> String {
    let mut s = String::from(CRITERIA_HEADER);
    s.push('\n');
    for o in &report.outcomes {
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            o.nu,
            o.kato,
            o.kelliher,
            o.temam_wang,
            o.bt,
            o.ckv,
            o.wang_integral,
            o.layer_sup_integral,
            o.layer_clipped,
            o.kato_layer_cells,
            o.tail_erfc,
            o.sup_v_l2,
            o.sup_diff_l2,
            o.max_identity_residual,
            o.quarantined
        );
    }
    s
}

pub fn assumptions_csv(report: &Report) -> String {
    let mut s = String::from(ASSUMPTIONS_HEADER);
    s.push('\n');
    for o in &report.outcomes {
        for a in &o.assumptions {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                a.nu,
                a.rho,
                a.modulus,
                a.uniform_integrability,
                a.boundedness,
                a.mixed_integrability,
                a.mixed_boundedness
            );
        }
    }
    s
}

/// Log-log scatter of (nu, value) with the fitted line, as a standalone SVG.
fn rate_svg(rate: &NamedRate) -> Option<String> {
    let fit = match &rate.fit {
        FitStatus::Fitted { fit, .. } => fit,
        _ => return None,
    };
    let pts: Vec<(f64, f64)> = rate
        .points
        .iter()
        .filter(|&&(nu, v)| nu > 0.0 && v > 0.0)
        .map(|&(nu, v)| (nu.log10(), v.log10()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = 0.5;
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let (w, h, m) = (480.0, 360.0, 50.0);
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "  <rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        w - 2.0 * m,
        h - 2.0 * m
    );
    let _ = writeln!(
        s,
        "  <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{} ~ nu^{:.4} (r2 = {:.6})</text>",
        w / 2.0,
        rate.name,
        fit.exponent,
        fit.r_squared
    );
    let _ = writeln!(
        s,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">log10(nu)</text>",
        w / 2.0,
        h - 12.0
    );
    // fitted line across the x range
    let ly0 = fit.log_prefactor + fit.exponent * x0;
    let ly1 = fit.log_prefactor + fit.exponent * x1;
    let _ = writeln!(
        s,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"steelblue\" stroke-width=\"1.5\"/>",
        sx(x0),
        sy(ly0),
        sx(x1),
        sy(ly1)
    );
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"firebrick\"/>",
            sx(x),
            sy(y)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

/// Write summary.json, energy.csv, criteria.csv, assumptions.csv, and (when
/// `svg` is set) one rate_<name>.svg per fitted rate into `dir`.
pub fn emit_outputs(report: &Report, dir: &Path, svg: bool) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), source: e })?;
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::invalid(format!("serialize report: {e}")))?;
    write_file(&dir.join("summary.json"), &(json + "\n"))?;
    write_file(&dir.join("energy.csv"), &energy_csv(report))?;
    write_file(&dir.join("criteria.csv"), &criteria_csv(report))?;
    write_file(&dir.join("assumptions.csv"), &assumptions_csv(report))?;
    if svg {
        for rate in &report.rates {
            if let Some(text) = rate_svg(rate) {
                write_file(&dir.join(format!("rate_{}.svg", rate.name)), &text)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::parse_config;
    use crate::harness::run_sweep;

    fn small_report() -> Report {
        let c = parse_config(
            "scenario = shear_analytic\nsweep.nu = [1e-2, 1e-3, 1e-4]\ntime.t_min = 0.1\n\
             time.t_end = 0.5\ntime.samples = 5\ngrid.nx = 8\ngrid.cells_per_layer = 8\n\
             grid.ratio = 1.1\n",
        )
        .unwrap();
        run_sweep(&c, None).unwrap()
    }

    #[test]
    fn empty_sweep_yields_valid_headers_only() {
        let c = parse_config("sweep.nu = []\n").unwrap();
        let report = run_sweep(&c, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&report, dir.path(), true).unwrap();
        let energy = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
        assert_eq!(energy.trim(), ENERGY_HEADER);
        let summary = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        let parsed: Report = serde_json::from_str(&summary).unwrap();
        assert!(parsed.outcomes.is_empty());
    }

    #[test]
    fn repeated_emission_is_byte_identical() {
        let report = small_report();
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        emit_outputs(&report, d1.path(), true).unwrap();
        emit_outputs(&report, d2.path(), true).unwrap();
        for name in ["summary.json", "energy.csv", "criteria.csv", "assumptions.csv"] {
            let a = std::fs::read(d1.path().join(name)).unwrap();
            let b = std::fs::read(d2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn svg_flag_controls_plot_files() {
        let report = small_report();
        let with = tempfile::tempdir().unwrap();
        let without = tempfile::tempdir().unwrap();
        emit_outputs(&report, with.path(), true).unwrap();
        emit_outputs(&report, without.path(), false).unwrap();
        let svgs = |d: &std::path::Path| {
            std::fs::read_dir(d)
                .unwrap()
                .filter(|e| {
                    e.as_ref().unwrap().path().extension().map(|x| x == "svg").unwrap_or(false)
                })
                .count()
        };
        assert!(svgs(with.path()) > 0);
        assert_eq!(svgs(without.path()), 0);
        let text =
            std::fs::read_to_string(with.path().join("rate_sup_diff_l2.svg")).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("circle"));
    }

    #[test]
    fn csv_schemas_are_fixed() {
        let report = small_report();
        let energy = energy_csv(&report);
        assert!(energy.starts_with(
            "nu,t,v_l2_sq,dissipation,lin_stretch,lin_visc,t1,t2,t3,t4,t5,t6,t6_nu,identity_residual\n"
        ));
        // one row per (nu, t)
        let rows = energy.lines().count() - 1;
        assert_eq!(rows, 3 * 5);
        let assumptions = assumptions_csv(&report);
        assert_eq!(assumptions.lines().count() - 1, 3 * 4); // default rho_list has 4 entries
        let criteria = criteria_csv(&report);
        assert_eq!(criteria.lines().count() - 1, 3);
    }
}
