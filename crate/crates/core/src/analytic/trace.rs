//! Wall traces of the tangential Euler flow, with analytic tangential
//! derivatives up to third order and an analytic time derivative.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeModulation {
    Steady,
    ExpDecay,
}

impl TimeModulation {
    fn g(&self, t: f64) -> f64 {
        match self {
            TimeModulation::Steady => 1.0,
            TimeModulation::ExpDecay => (-t).exp(),
        }
    }

    fn g_dot(&self, t: f64) -> f64 {
        match self {
            TimeModulation::Steady => 0.0,
            TimeModulation::ExpDecay => -(-t).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant")]
pub enum EulerTrace {
    Zero,
    Constant { u0: f64 },
    Cosine { amplitude: f64, wavenumber: u32, modulation: TimeModulation },
}

impl EulerTrace {
    pub fn eval(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero => 0.0,
            EulerTrace::Constant { u0 } => u0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                amplitude * (wavenumber as f64 * x1).cos() * modulation.g(t)
            }
        }
    }

    pub fn d1(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero | EulerTrace::Constant { .. } => 0.0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                let k = wavenumber as f64;
                -amplitude * k * (k * x1).sin() * modulation.g(t)
            }
        }
    }

    pub fn d11(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero | EulerTrace::Constant { .. } => 0.0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                let k = wavenumber as f64;
                -amplitude * k * k * (k * x1).cos() * modulation.g(t)
            }
        }
    }

    pub fn d111(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero | EulerTrace::Constant { .. } => 0.0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                let k = wavenumber as f64;
                amplitude * k * k * k * (k * x1).sin() * modulation.g(t)
            }
        }
    }

    pub fn dt(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero | EulerTrace::Constant { .. } => 0.0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                amplitude * (wavenumber as f64 * x1).cos() * modulation.g_dot(t)
            }
        }
    }

    /// Mixed derivative d/dt d/dx1 of the trace.
    pub fn d1t(&self, x1: f64, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero | EulerTrace::Constant { .. } => 0.0,
            EulerTrace::Cosine { amplitude, wavenumber, modulation } => {
                let k = wavenumber as f64;
                -amplitude * k * (k * x1).sin() * modulation.g_dot(t)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EulerTrace::Zero)
            || matches!(self, EulerTrace::Constant { u0 } if *u0 == 0.0)
            || matches!(self, EulerTrace::Cosine { amplitude, .. } if *amplitude == 0.0)
    }

    pub fn sup_abs(&self, t: f64) -> f64 {
        match *self {
            EulerTrace::Zero => 0.0,
            EulerTrace::Constant { u0 } => u0.abs(),
            EulerTrace::Cosine { amplitude, modulation, .. } => amplitude.abs() * modulation.g(t).abs(),
        }
    }

    /// L^p norm over one period in x1 of the k-th tangential derivative
    /// (order 0..=3), by rectangle-rule quadrature on a fine grid.
    pub fn lp_x1(&self, order: u32, p: f64, t: f64) -> f64 {
        let n = 4096usize;
        let h = 2.0 * PI / n as f64;
        let f = |x1: f64| match order {
            0 => self.eval(x1, t),
            1 => self.d1(x1, t),
            2 => self.d11(x1, t),
            _ => self.d111(x1, t),
        };
        if p.is_infinite() {
            (0..n).map(|i| f(i as f64 * h).abs()).fold(0.0f64, f64::max)
        } else {
            let s: f64 = (0..n).map(|i| h * f(i as f64 * h).abs().powf(p)).sum();
            s.powf(1.0 / p)
        }
    }
}
