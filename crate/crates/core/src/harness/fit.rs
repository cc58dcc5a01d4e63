//! Least-squares power-law fits value ~ C * nu^p on log10-log10 axes.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// slope p of log10(value) against log10(nu)
    pub exponent: f64,
    /// intercept: log10 of the prefactor C
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

impl RateFit {
    pub fn prefactor(&self) -> f64 {
        10f64.powf(self.log_prefactor)
    }
}

/// Outcome of a fit attempt. Zero values cannot enter a log fit; they are
/// dropped, and a sweep whose values are all zero is reported as such
/// rather than fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitStatus {
    Fitted { fit: RateFit, zeros_excluded: usize },
    IdenticallyZero,
    TooFewPoints { available: usize },
}

/// Fit a decay exponent to (nu, value) pairs. Requires at least 3 strictly
/// positive values after excluding zeros.
pub fn fit_rate(points: &[(f64, f64)]) -> FitStatus {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(nu, v)| nu > 0.0 && v > 0.0)
        .map(|&(nu, v)| (nu.log10(), v.log10()))
        .collect();
    if !points.is_empty() && points.iter().all(|&(_, v)| v == 0.0) {
        return FitStatus::IdenticallyZero;
    }
    if usable.len() < 3 {
        return FitStatus::TooFewPoints { available: usable.len() };
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    let sxy = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    if sxx == 0.0 {
        return FitStatus::TooFewPoints { available: 1 };
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot = usable.iter().map(|p| (p.1 - my) * (p.1 - my)).sum::<f64>();
    let ss_res = usable
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum::<f64>();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    FitStatus::Fitted {
        fit: RateFit { exponent: slope, log_prefactor: intercept, r_squared, points_used: usable.len() },
        zeros_excluded: points.len() - usable.len(),
    }
}
