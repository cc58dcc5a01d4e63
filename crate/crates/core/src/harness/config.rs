//! Flat key-value sweep configuration.
//!
//! The format is deliberately dumb: one `key = value` per line, `#`
//! comments, dotted keys, no nesting, no interpolation. Values are numbers,
//! integers, booleans, bare strings, or bracketed number lists. Every key
//! has a default; `emit` writes the full resolved configuration back out in
//! a fixed order so that `load(emit(c)) == c`.

use crate::corrector::CorrectorScale;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    ShearAnalytic,
    ShearNumeric,
    PerturbedShear,
    SnapshotReplay,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::ShearAnalytic => "shear_analytic",
            ScenarioKind::ShearNumeric => "shear_numeric",
            ScenarioKind::PerturbedShear => "perturbed_shear",
            ScenarioKind::SnapshotReplay => "snapshot_replay",
        }
    }

    fn parse(s: &str) -> Option<ScenarioKind> {
        match s {
            "shear_analytic" => Some(ScenarioKind::ShearAnalytic),
            "shear_numeric" => Some(ScenarioKind::ShearNumeric),
            "perturbed_shear" => Some(ScenarioKind::PerturbedShear),
            "snapshot_replay" => Some(ScenarioKind::SnapshotReplay),
            _ => None,
        }
    }

    /// Scenarios that integrate the Navier-Stokes solver rather than
    /// playing back a closed-form solution.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, ScenarioKind::ShearAnalytic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPolicy {
    Fixed,
    NuRefined,
}

impl GridPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridPolicy::Fixed => "fixed",
            GridPolicy::NuRefined => "nu_refined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scenario: ScenarioKind,
    pub nu_list: Vec<f64>,
    pub t_min: f64,
    pub t_end: f64,
    pub samples: usize,
    pub nx: usize,
    pub length_x1: f64,
    pub height_x2: f64,
    pub grid_policy: GridPolicy,
    pub ny: usize,
    pub cells_per_layer: usize,
    pub grid_ratio: f64,
    pub scale_kind: String,
    pub scale_a: f64,
    pub u0: f64,
    pub amplitude: f64,
    pub wavenumber: usize,
    pub snapshot: String,
    pub kato_c: f64,
    pub delta_a: f64,
    pub thm13_c: f64,
    pub rho_list: Vec<f64>,
    pub cfl: f64,
    pub out_dir: String,
    pub svg: bool,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            scenario: ScenarioKind::ShearAnalytic,
            nu_list: vec![1e-2, 1e-3, 1e-4],
            t_min: 1e-3,
            t_end: 1.0,
            samples: 17,
            nx: 32,
            length_x1: 2.0 * std::f64::consts::PI,
            height_x2: 4.0,
            grid_policy: GridPolicy::NuRefined,
            ny: 129,
            cells_per_layer: 8,
            grid_ratio: 1.08,
            scale_kind: "prandtl".into(),
            scale_a: 0.5,
            u0: 1.0,
            amplitude: 0.1,
            wavenumber: 2,
            snapshot: String::new(),
            kato_c: 1.0,
            delta_a: 0.5,
            thm13_c: 0.5,
            rho_list: vec![0.05, 0.1, 0.2, 0.4],
            cfl: 0.4,
            out_dir: "out".into(),
            svg: true,
        }
    }
}

pub const VALID_KEYS: &[&str] = &[
    "scenario",
    "sweep.nu",
    "time.t_min",
    "time.t_end",
    "time.samples",
    "grid.nx",
    "grid.length_x1",
    "grid.height_x2",
    "grid.policy",
    "grid.ny",
    "grid.cells_per_layer",
    "grid.ratio",
    "corrector.scale",
    "corrector.a",
    "scenario.u0",
    "scenario.amplitude",
    "scenario.wavenumber",
    "scenario.snapshot",
    "criteria.kato_c",
    "criteria.delta_a",
    "criteria.c",
    "criteria.rho_list",
    "solver.cfl",
    "output.dir",
    "output.svg",
];

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| cfg_err(line, format!("{key}: expected a number, got {v:?}")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| cfg_err(line, format!("{key}: expected a non-negative integer, got {v:?}")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(cfg_err(line, format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| cfg_err(line, format!("{key}: expected a bracketed list, got {v:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| cfg_err(line, format!("{key}: bad list element {tok:?}")))
        })
        .collect()
}

/// Parse configuration text. Unknown keys are rejected with the full list
/// of valid keys; malformed values are rejected with their line number.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut c = SweepConfig::default();
    let mut t_min_given = false;
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| cfg_err(lineno, format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();
        if !VALID_KEYS.contains(&key) {
            return Err(cfg_err(
                lineno,
                format!("unknown key {key:?}; valid keys: {}", VALID_KEYS.join(", ")),
            ));
        }
        if seen.iter().any(|k| k == key) {
            return Err(cfg_err(lineno, format!("duplicate key {key:?}")));
        }
        seen.push(key.to_string());
        match key {
            "scenario" => {
                c.scenario = ScenarioKind::parse(value).ok_or_else(|| {
                    cfg_err(
                        lineno,
                        format!(
                            "scenario: expected one of shear_analytic, shear_numeric, \
                             perturbed_shear, snapshot_replay; got {value:?}"
                        ),
                    )
                })?;
            }
            "sweep.nu" => c.nu_list = parse_list(lineno, key, value)?,
            "time.t_min" => {
                c.t_min = parse_f64(lineno, key, value)?;
                t_min_given = true;
            }
            "time.t_end" => c.t_end = parse_f64(lineno, key, value)?,
            "time.samples" => c.samples = parse_usize(lineno, key, value)?,
            "grid.nx" => c.nx = parse_usize(lineno, key, value)?,
            "grid.length_x1" => c.length_x1 = parse_f64(lineno, key, value)?,
            "grid.height_x2" => c.height_x2 = parse_f64(lineno, key, value)?,
            "grid.policy" => {
                c.grid_policy = match value {
                    "fixed" => GridPolicy::Fixed,
                    "nu_refined" => GridPolicy::NuRefined,
                    _ => {
                        return Err(cfg_err(
                            lineno,
                            format!("grid.policy: expected fixed or nu_refined, got {value:?}"),
                        ))
                    }
                };
            }
            "grid.ny" => c.ny = parse_usize(lineno, key, value)?,
            "grid.cells_per_layer" => c.cells_per_layer = parse_usize(lineno, key, value)?,
            "grid.ratio" => c.grid_ratio = parse_f64(lineno, key, value)?,
            "corrector.scale" => {
                if value != "prandtl" && value != "power" {
                    return Err(cfg_err(
                        lineno,
                        format!("corrector.scale: expected prandtl or power, got {value:?}"),
                    ));
                }
                c.scale_kind = value.to_string();
            }
            "corrector.a" => c.scale_a = parse_f64(lineno, key, value)?,
            "scenario.u0" => c.u0 = parse_f64(lineno, key, value)?,
            "scenario.amplitude" => c.amplitude = parse_f64(lineno, key, value)?,
            "scenario.wavenumber" => c.wavenumber = parse_usize(lineno, key, value)?,
            "scenario.snapshot" => c.snapshot = value.to_string(),
            "criteria.kato_c" => c.kato_c = parse_f64(lineno, key, value)?,
            "criteria.delta_a" => c.delta_a = parse_f64(lineno, key, value)?,
            "criteria.c" => c.thm13_c = parse_f64(lineno, key, value)?,
            "criteria.rho_list" => c.rho_list = parse_list(lineno, key, value)?,
            "solver.cfl" => c.cfl = parse_f64(lineno, key, value)?,
            "output.dir" => c.out_dir = value.to_string(),
            "output.svg" => c.svg = parse_bool(lineno, key, value)?,
            _ => unreachable!(),
        }
    }
    if !t_min_given {
        c.t_min = 1e-3 * c.t_end;
    }
    validate(&c)?;
    Ok(c)
}

pub fn load_config(path: &std::path::Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    parse_config(&text)
}

fn validate(c: &SweepConfig) -> Result<()> {
    for w in c.nu_list.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::invalid(format!(
                "sweep.nu must be strictly decreasing, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    if c.nu_list.iter().any(|&nu| nu <= 0.0) {
        return Err(Error::invalid("sweep.nu entries must be positive"));
    }
    if !(c.t_min > 0.0 && c.t_min < c.t_end) {
        return Err(Error::invalid(format!(
            "need 0 < time.t_min < time.t_end, got t_min = {}, t_end = {}",
            c.t_min, c.t_end
        )));
    }
    if c.samples < 3 {
        return Err(Error::invalid("time.samples must be at least 3 (identity audit)"));
    }
    if c.scale_kind == "power" && !(c.scale_a > 0.0 && c.scale_a < 1.0) {
        return Err(Error::invalid(format!("corrector.a must be in (0, 1), got {}", c.scale_a)));
    }
    if c.scenario == ScenarioKind::SnapshotReplay && c.snapshot.is_empty() {
        return Err(Error::invalid("snapshot_replay requires scenario.snapshot"));
    }
    if c.rho_list.iter().any(|&r| r <= 0.0) {
        return Err(Error::invalid("criteria.rho_list entries must be positive"));
    }
    if c.kato_c <= 0.0 || c.cfl <= 0.0 || c.grid_ratio < 1.0 {
        return Err(Error::invalid("criteria.kato_c and solver.cfl must be positive, grid.ratio >= 1"));
    }
    if !(c.delta_a > 0.0 && c.delta_a < 1.0) {
        return Err(Error::invalid(format!("criteria.delta_a must be in (0, 1), got {}", c.delta_a)));
    }
    Ok(())
}

fn fmt_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", items.join(", "))
}

/// Canonical text form: every key, fixed order, shortest round-trip float
/// formatting, so emitted configs reload to an equal value.
pub fn emit_config(c: &SweepConfig) -> String {
    let mut s = String::new();
    let mut push = |k: &str, v: String| {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(&v);
        s.push('\n');
    };
    push("scenario", c.scenario.as_str().into());
    push("sweep.nu", fmt_list(&c.nu_list));
    push("time.t_min", format!("{}", c.t_min));
    push("time.t_end", format!("{}", c.t_end));
    push("time.samples", format!("{}", c.samples));
    push("grid.nx", format!("{}", c.nx));
    push("grid.length_x1", format!("{}", c.length_x1));
    push("grid.height_x2", format!("{}", c.height_x2));
    push("grid.policy", c.grid_policy.as_str().into());
    push("grid.ny", format!("{}", c.ny));
    push("grid.cells_per_layer", format!("{}", c.cells_per_layer));
    push("grid.ratio", format!("{}", c.grid_ratio));
    push("corrector.scale", c.scale_kind.clone());
    push("corrector.a", format!("{}", c.scale_a));
    push("scenario.u0", format!("{}", c.u0));
    push("scenario.amplitude", format!("{}", c.amplitude));
    push("scenario.wavenumber", format!("{}", c.wavenumber));
    push("scenario.snapshot", c.snapshot.clone());
    push("criteria.kato_c", format!("{}", c.kato_c));
    push("criteria.delta_a", format!("{}", c.delta_a));
    push("criteria.c", format!("{}", c.thm13_c));
    push("criteria.rho_list", fmt_list(&c.rho_list));
    push("solver.cfl", format!("{}", c.cfl));
    push("output.dir", c.out_dir.clone());
    push("output.svg", format!("{}", c.svg));
    s
}

impl SweepConfig {
    pub fn corrector_scale(&self) -> Result<CorrectorScale> {
        if self.scale_kind == "power" {
            CorrectorScale::power(self.scale_a)
        } else {
            Ok(CorrectorScale::Prandtl)
        }
    }

    /// Sample times: `samples` equally spaced points on [t_min, t_end].
    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|k| self.t_min + (self.t_end - self.t_min) * k as f64 / (n - 1) as f64)
            .collect()
    }
}
