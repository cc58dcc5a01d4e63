//! Sweep orchestration: flat-text configuration, per-viscosity runs with
//! isolated workers, power-law rate fitting, and deterministic report
//! emission (JSON, CSV, optional SVG).

mod config;
mod fit;
mod output;
mod sweep;

pub use config::{emit_config, load_config, parse_config, GridPolicy, ScenarioKind, SweepConfig, VALID_KEYS};
pub use fit::{fit_rate, FitStatus, RateFit};
pub use output::{assumptions_csv, criteria_csv, emit_outputs, energy_csv};
pub use sweep::{run_sweep, AssumptionRow, NamedRate, NuOutcome, Report};
