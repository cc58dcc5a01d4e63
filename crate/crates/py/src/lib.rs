//! Python bindings: scalar corrector/shear evaluations, power-law fits,
//! config round-tripping, and whole sweeps returning the report as JSON.

use katolab::analytic::{EulerTrace, TimeModulation};
use katolab::corrector::{CorrectorParams, CorrectorQuantity, CorrectorScale};
use katolab::harness::{emit_config, emit_outputs, parse_config, run_sweep};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(format!("{e}"))
}

fn scale_of(scale: &str, a: f64) -> PyResult<CorrectorScale> {
    match scale {
        "prandtl" => Ok(CorrectorScale::Prandtl),
        "power" => CorrectorScale::power(a).map_err(err),
        other => Err(PyValueError::new_err(format!(
            "unknown scale {other:?}; expected \"prandtl\" or \"power\""
        ))),
    }
}

fn quantity_of(name: &str) -> PyResult<CorrectorQuantity> {
    CorrectorQuantity::ALL
        .into_iter()
        .find(|q| q.name() == name)
        .ok_or_else(|| {
            let names: Vec<&str> = CorrectorQuantity::ALL.iter().map(|q| q.name()).collect();
            PyValueError::new_err(format!("unknown quantity {name:?}; expected one of {names:?}"))
        })
}

fn cosine_params(nu: f64, scale: &str, a: f64) -> PyResult<CorrectorParams> {
    let trace =
        EulerTrace::Cosine { amplitude: 1.0, wavenumber: 1, modulation: TimeModulation::Steady };
    CorrectorParams::new(nu, trace, scale_of(scale, a)?).map_err(err)
}

/// Complementary error function.
#[pyfunction]
fn erfc(x: f64) -> f64 {
    katolab::analytic::erfc(x)
}

/// d/dx erfc(x) = -2 exp(-x^2) / sqrt(pi).
#[pyfunction]
fn erfc_prime(x: f64) -> f64 {
    katolab::analytic::erfc_prime(x)
}

/// Exact diffusing shear u1 = u0 erf(x2 / sqrt(4 nu t)).
#[pyfunction]
fn shear_exact(u0: f64, nu: f64, x2: f64, t: f64) -> PyResult<f64> {
    if t <= 0.0 {
        return Err(PyValueError::new_err("shear_exact requires t > 0"));
    }
    Ok(katolab::analytic::shear_exact(u0, nu, x2, t))
}

/// Residual of the corrector's zero-mean identity int_0^inf u1 dx2 = 0
/// for the unit cosine trace.
#[pyfunction]
#[pyo3(signature = (nu, x1, t, scale = "prandtl", a = 0.5))]
fn corrector_zero_mean(nu: f64, x1: f64, t: f64, scale: &str, a: f64) -> PyResult<f64> {
    let params = cosine_params(nu, scale, a)?;
    katolab::corrector::zero_mean_check(&params, x1, t).map_err(err)
}

/// L^p norm of one corrector quantity ("u1", "d1_u1", "d2_u1", "d12_u1",
/// "u2", "d1_u2") at the given nu*t, for the unit cosine trace.
#[pyfunction]
#[pyo3(signature = (quantity, p, nut, scale = "prandtl", a = 0.5))]
fn corrector_lp_norm(quantity: &str, p: f64, nut: f64, scale: &str, a: f64) -> PyResult<f64> {
    if nut <= 0.0 {
        return Err(PyValueError::new_err("corrector_lp_norm requires nu * t > 0"));
    }
    let params = cosine_params(nut, scale, a)?;
    Ok(katolab::corrector::quantity_lp_norm(&params, quantity_of(quantity)?, p, nut, 1.0))
}

/// Least-squares slope of log ||quantity||_p against log(nu t).
#[pyfunction]
#[pyo3(signature = (quantity, p, nut_samples, scale = "prandtl", a = 0.5))]
fn corrector_scaling_exponent(
    quantity: &str,
    p: f64,
    nut_samples: Vec<f64>,
    scale: &str,
    a: f64,
) -> PyResult<f64> {
    let params = cosine_params(1e-4, scale, a)?;
    katolab::corrector::scaling_exponents(&params, p, quantity_of(quantity)?, &nut_samples)
        .map_err(err)
}

/// Fit value ~ C nu^p to (nu, value) pairs. Returns a dict with a
/// "status" key ("fitted", "identically_zero", "too_few_points") and,
/// when fitted, exponent / prefactor / r_squared / points_used.
#[pyfunction]
fn fit_rate(py: Python<'_>, points: Vec<(f64, f64)>) -> PyResult<Py<PyAny>> {
    let status = katolab::harness::fit_rate(&points);
    let json = serde_json::to_string(&status).map_err(err)?;
    let loads = py.import("json")?.getattr("loads")?;
    Ok(loads.call1((json,))?.unbind())
}

/// Parse and validate a sweep config, returning its canonical text.
#[pyfunction]
fn canonical_config(text: &str) -> PyResult<String> {
    Ok(emit_config(&parse_config(text).map_err(err)?))
}

/// Run the full nu sweep described by the config text; returns the
/// report (outcomes, rates, per-sample energy budget) as a JSON string.
#[pyfunction]
#[pyo3(signature = (config_text, jobs = None))]
fn sweep_json(config_text: &str, jobs: Option<usize>) -> PyResult<String> {
    let c = parse_config(config_text).map_err(err)?;
    let report = run_sweep(&c, jobs).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Run the sweep and write summary.json, the CSV tables, and the rate
/// plots into `out_dir`. Returns True when no nu was quarantined.
#[pyfunction]
#[pyo3(signature = (config_text, out_dir, svg = true, jobs = None))]
fn sweep_to_dir(config_text: &str, out_dir: &str, svg: bool, jobs: Option<usize>) -> PyResult<bool> {
    let c = parse_config(config_text).map_err(err)?;
    let report = run_sweep(&c, jobs).map_err(err)?;
    emit_outputs(&report, std::path::Path::new(out_dir), svg).map_err(err)?;
    Ok(report.outcomes.iter().all(|o| !o.quarantined))
}

#[pymodule]
fn katolab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(erfc_prime, m)?)?;
    m.add_function(wrap_pyfunction!(shear_exact, m)?)?;
    m.add_function(wrap_pyfunction!(corrector_zero_mean, m)?)?;
    m.add_function(wrap_pyfunction!(corrector_lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(corrector_scaling_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(fit_rate, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_config, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_json, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_to_dir, m)?)?;
    Ok(())
}
