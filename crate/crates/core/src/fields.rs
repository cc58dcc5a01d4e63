//! Grids and discrete fields on the periodic-in-x1 half strip
//! `[0, L1) x [0, L2]` with the wall at `x2 = 0`, together with the
//! quadrature-based norms and the differential operators used by the
//! diagnostics.
//!
//! Quadrature convention: rectangle rule in the periodic direction
//! (spectrally accurate for smooth periodic integrands) and trapezoid in
//! x2. The x2 grid is uniform by default; an optional geometric grading
//! packs points near the wall for thin-layer work.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopBc {
    FreeSlip,
    NoSlip,
}

/// Collocated node layout for the half strip. `x1_i = i * h1` for
/// `i in 0..nx` (periodic, right endpoint omitted); `x2_0 = 0` is the wall
/// row and `x2_{ny-1} = height_x2` the truncation top.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub length_x1: f64,
    pub height_x2: f64,
    pub top_bc: TopBc,
    /// Geometric spacing ratio in x2 (1.0 = uniform).
    pub grading: f64,
    x2: Vec<f64>,
    /// Trapezoid weights matching `x2`.
    w2: Vec<f64>,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, length_x1: f64, height_x2: f64, top_bc: TopBc) -> Result<Arc<Grid>> {
        Grid::graded(nx, ny, length_x1, height_x2, top_bc, 1.0)
    }

    /// Grid with geometric grading toward the wall: successive x2 spacings
    /// grow by `ratio` so that `h_j = h_0 * ratio^j`.
    pub fn graded(
        nx: usize,
        ny: usize,
        length_x1: f64,
        height_x2: f64,
        top_bc: TopBc,
        ratio: f64,
    ) -> Result<Arc<Grid>> {
        if nx < 8 || ny < 8 {
            return Err(Error::invalid(format!("grid too small: {nx}x{ny}, need nx >= 8 and ny >= 8")));
        }
        if length_x1 <= 0.0 || height_x2 <= 0.0 {
            return Err(Error::invalid("grid extents must be positive"));
        }
        if ratio <= 0.0 {
            return Err(Error::invalid("grading ratio must be positive"));
        }
        let n = ny - 1;
        let mut x2 = Vec::with_capacity(ny);
        if (ratio - 1.0).abs() < 1e-14 {
            let h2 = height_x2 / n as f64;
            for j in 0..ny {
                x2.push(j as f64 * h2);
            }
        } else {
            // h0 * (r^n - 1)/(r - 1) = height
            let h0 = height_x2 * (ratio - 1.0) / (ratio.powi(n as i32) - 1.0);
            let mut x = 0.0;
            let mut h = h0;
            x2.push(0.0);
            for _ in 0..n {
                x += h;
                h *= ratio;
                x2.push(x);
            }
            let last = x2[ny - 1];
            // absorb roundoff so the top row sits exactly at height_x2
            let scale = height_x2 / last;
            for v in x2.iter_mut() {
                *v *= scale;
            }
            x2[0] = 0.0;
            x2[ny - 1] = height_x2;
        }
        let mut w2 = vec![0.0; ny];
        for j in 0..n {
            let h = x2[j + 1] - x2[j];
            w2[j] += 0.5 * h;
            w2[j + 1] += 0.5 * h;
        }
        Ok(Arc::new(Grid { nx, ny, length_x1, height_x2, top_bc, grading: ratio, x2, w2 }))
    }

    /// Graded grid whose wall spacing resolves a layer of width `layer`
    /// with `cells_per_layer` cells, growing geometrically to `height_x2`.
    pub fn wall_resolved(
        nx: usize,
        length_x1: f64,
        height_x2: f64,
        top_bc: TopBc,
        layer: f64,
        cells_per_layer: usize,
        ratio: f64,
    ) -> Result<Arc<Grid>> {
        let h0 = layer / cells_per_layer as f64;
        // n such that h0 (r^n - 1)/(r-1) >= height
        let n = ((height_x2 * (ratio - 1.0) / h0 + 1.0).ln() / ratio.ln()).ceil() as usize + 1;
        Grid::graded(nx, n.max(8) + 1, length_x1, height_x2, top_bc, ratio)
    }

    #[inline]
    pub fn h1(&self) -> f64 {
        self.length_x1 / self.nx as f64
    }

    #[inline]
    pub fn x1(&self, i: usize) -> f64 {
        i as f64 * self.h1()
    }

    #[inline]
    pub fn x2(&self, j: usize) -> f64 {
        self.x2[j]
    }

    pub fn x2_nodes(&self) -> &[f64] {
        &self.x2
    }

    /// Trapezoid weight of row `j`.
    #[inline]
    pub fn w2(&self, j: usize) -> f64 {
        self.w2[j]
    }

    /// Smallest x2 spacing (the wall cell for graded grids).
    pub fn h2_min(&self) -> f64 {
        let mut h = f64::INFINITY;
        for j in 1..self.ny {
            h = h.min(self.x2[j] - self.x2[j - 1]);
        }
        h
    }

    pub fn is_uniform(&self) -> bool {
        (self.grading - 1.0).abs() < 1e-14
    }

    /// Uniform x2 spacing; errors on graded grids.
    pub fn h2_uniform(&self) -> Result<f64> {
        if !self.is_uniform() {
            return Err(Error::invalid("operation requires a uniform x2 grid"));
        }
        Ok(self.height_x2 / (self.ny - 1) as f64)
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && (self.length_x1 - other.length_x1).abs() < 1e-14
            && (self.height_x2 - other.height_x2).abs() < 1e-14
            && (self.grading - other.grading).abs() < 1e-14
    }
}

/// Scalar nodal field, row-major in `i` (index = i * ny + j).
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Arc<Grid>) -> ScalarField {
        ScalarField { grid: Arc::clone(grid), values: vec![0.0; grid.nx * grid.ny] }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        let mut values = Vec::with_capacity(grid.nx * grid.ny);
        for i in 0..grid.nx {
            let x1 = grid.x1(i);
            for j in 0..grid.ny {
                values.push(f(x1, grid.x2(j)));
            }
        }
        ScalarField { grid: Arc::clone(grid), values }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ny + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.grid.ny + j] = v;
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField { grid: Arc::clone(&self.grid), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        if !self.grid.same_layout(&other.grid) {
            return Err(Error::GridMismatch("zip of fields on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ScalarField { grid: Arc::clone(&self.grid), values })
    }
}

/// Collocated velocity components.
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub u1: ScalarField,
    pub u2: ScalarField,
}

impl VelocityField {
    pub fn zeros(grid: &Arc<Grid>) -> VelocityField {
        VelocityField { u1: ScalarField::zeros(grid), u2: ScalarField::zeros(grid) }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.u1.grid
    }
}

/// Domain quadrature of `|f|^p` with the p-th root; `p = inf` is the nodal max.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::invalid(format!("lp_norm requires p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let g = &f.grid;
    let h1 = g.h1();
    let mut sum = 0.0;
    for i in 0..g.nx {
        for j in 0..g.ny {
            sum += h1 * g.w2(j) * f.at(i, j).abs().powf(p);
        }
    }
    Ok(sum.powf(1.0 / p))
}

/// Mixed layer norm `L^{p_x1}_{x1} L^{p_x2}_{x2}(0 < x2 < rho)`: inner norm
/// in x2 over the layer first, outer norm in x1. `rho` is snapped to the
/// grid with a linear sub-cell trapezoid correction.
pub fn layer_norm(f: &ScalarField, rho: f64, p_x1: f64, p_x2: f64) -> Result<f64> {
    if rho <= 0.0 {
        return Err(Error::invalid(format!("layer_norm requires rho > 0, got {rho}")));
    }
    if p_x1 < 1.0 || p_x2 < 1.0 {
        return Err(Error::invalid("layer_norm requires p >= 1"));
    }
    let g = &f.grid;
    let rho = rho.min(g.height_x2);
    let h1 = g.h1();
    let mut outer = 0.0f64;
    for i in 0..g.nx {
        let inner = column_layer_norm(f, i, rho, p_x2);
        if p_x1.is_infinite() {
            outer = outer.max(inner);
        } else {
            outer += h1 * inner.powf(p_x1);
        }
    }
    if p_x1.is_infinite() {
        Ok(outer)
    } else {
        Ok(outer.powf(1.0 / p_x1))
    }
}

/// Inner x2 norm of column `i` over `(0, rho)`.
fn column_layer_norm(f: &ScalarField, i: usize, rho: f64, p: f64) -> f64 {
    let g = &f.grid;
    // last full node inside the layer
    let mut jtop = 0;
    while jtop + 1 < g.ny && g.x2(jtop + 1) <= rho {
        jtop += 1;
    }
    if p.is_infinite() {
        let mut m = 0.0f64;
        for j in 0..=jtop {
            m = m.max(f.at(i, j).abs());
        }
        if jtop + 1 < g.ny && rho > g.x2(jtop) {
            let a = g.x2(jtop);
            let b = g.x2(jtop + 1);
            let s = (rho - a) / (b - a);
            let v = (1.0 - s) * f.at(i, jtop) + s * f.at(i, jtop + 1);
            m = m.max(v.abs());
        }
        return m;
    }
    let mut sum = 0.0;
    for j in 1..=jtop {
        let h = g.x2(j) - g.x2(j - 1);
        sum += 0.5 * h * (f.at(i, j - 1).abs().powf(p) + f.at(i, j).abs().powf(p));
    }
    if jtop + 1 < g.ny && rho > g.x2(jtop) {
        let a = g.x2(jtop);
        let b = g.x2(jtop + 1);
        let s = (rho - a) / (b - a);
        let fa = f.at(i, jtop).abs().powf(p);
        let fb = f.at(i, jtop + 1).abs().powf(p);
        let frho = (1.0 - s) * fa + s * fb;
        sum += 0.5 * (rho - a) * (fa + frho);
    }
    sum.powf(1.0 / p)
}

/// Second-order first derivative in x1 (periodic, central).
pub fn d_x1(f: &ScalarField) -> ScalarField {
    let g = &f.grid;
    let inv2h = 1.0 / (2.0 * g.h1());
    let mut out = ScalarField::zeros(g);
    for i in 0..g.nx {
        let ip = (i + 1) % g.nx;
        let im = (i + g.nx - 1) % g.nx;
        for j in 0..g.ny {
            out.set(i, j, (f.at(ip, j) - f.at(im, j)) * inv2h);
        }
    }
    out
}

/// Second-order first derivative in x2: three-point nonuniform stencil in
/// the interior, one-sided second order at the wall and top rows.
pub fn d_x2(f: &ScalarField) -> ScalarField {
    let g = &f.grid;
    let ny = g.ny;
    let mut out = ScalarField::zeros(g);
    for i in 0..g.nx {
        for j in 0..ny {
            let d = if j == 0 {
                let a = g.x2(1) - g.x2(0);
                let b = g.x2(2) - g.x2(1);
                -(2.0 * a + b) / (a * (a + b)) * f.at(i, 0)
                    + (a + b) / (a * b) * f.at(i, 1)
                    - a / (b * (a + b)) * f.at(i, 2)
            } else if j == ny - 1 {
                let a = g.x2(ny - 1) - g.x2(ny - 2);
                let b = g.x2(ny - 2) - g.x2(ny - 3);
                (2.0 * a + b) / (a * (a + b)) * f.at(i, ny - 1)
                    - (a + b) / (a * b) * f.at(i, ny - 2)
                    + a / (b * (a + b)) * f.at(i, ny - 3)
            } else {
                let a = g.x2(j) - g.x2(j - 1);
                let b = g.x2(j + 1) - g.x2(j);
                -b / (a * (a + b)) * f.at(i, j - 1)
                    + (b - a) / (a * b) * f.at(i, j)
                    + a / (b * (a + b)) * f.at(i, j + 1)
            };
            out.set(i, j, d);
        }
    }
    out
}

/// Discrete divergence `d1 u1 + d2 u2`.
pub fn divergence(v: &VelocityField) -> Result<ScalarField> {
    if !v.u1.grid.same_layout(&v.u2.grid) {
        return Err(Error::GridMismatch("velocity components on different grids".into()));
    }
    d_x1(&v.u1).zip(&d_x2(&v.u2), |a, b| a + b)
}

/// Discrete vorticity `d2 u1 - d1 u2`.
pub fn vorticity(v: &VelocityField) -> Result<ScalarField> {
    if !v.u1.grid.same_layout(&v.u2.grid) {
        return Err(Error::GridMismatch("velocity components on different grids".into()));
    }
    d_x2(&v.u1).zip(&d_x1(&v.u2), |a, b| a - b)
}
