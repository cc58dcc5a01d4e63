//! A desk-scale numerical laboratory for the vanishing-viscosity limit on a
//! periodic half strip: pseudo-caloric boundary-layer correctors, vorticity-
//! streamfunction solvers for Navier-Stokes and Euler, the energy
//! decomposition of the corrected difference flow, and the family of
//! boundary-layer criteria and assumption functionals that measure when the
//! inviscid limit holds in the energy norm.

pub mod analytic;
pub mod corrector;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod harness;
pub mod io;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
