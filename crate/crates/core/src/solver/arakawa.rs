//! Arakawa's energy- and enstrophy-conserving Jacobian
//! J(psi, omega) = d1 psi d2 omega - d2 psi d1 omega on the uniform grid,
//! the average of the three second-order forms J++, J+x, Jx+. The advection
//! term of the vorticity equation is u . grad omega = -J(psi, omega).
//!
//! Only interior rows are filled; boundary rows are governed by the wall
//! and top closures of the stepper.

use crate::error::{Error, Result};
use crate::fields::ScalarField;

pub fn arakawa_jacobian(psi: &ScalarField, omega: &ScalarField) -> Result<ScalarField> {
    let g = &psi.grid;
    if !g.same_layout(&omega.grid) {
        return Err(Error::GridMismatch("jacobian arguments on different grids".into()));
    }
    if !g.is_uniform() {
        return Err(Error::invalid("arakawa_jacobian requires a uniform grid"));
    }
    let (nx, ny) = (g.nx, g.ny);
    let fac = 1.0 / (12.0 * g.h1() * g.h2_uniform()?);
    let mut out = ScalarField::zeros(g);
    let p = |i: usize, j: usize| psi.values[i * ny + j];
    let w = |i: usize, j: usize| omega.values[i * ny + j];
    for i in 0..nx {
        let ip = (i + 1) % nx;
        let im = (i + nx - 1) % nx;
        for j in 1..ny - 1 {
            let jp = j + 1;
            let jm = j - 1;
            let jpp = (p(ip, j) - p(im, j)) * (w(i, jp) - w(i, jm))
                - (p(i, jp) - p(i, jm)) * (w(ip, j) - w(im, j));
            let jpx = p(ip, j) * (w(ip, jp) - w(ip, jm)) - p(im, j) * (w(im, jp) - w(im, jm))
                - p(i, jp) * (w(ip, jp) - w(im, jp))
                + p(i, jm) * (w(ip, jm) - w(im, jm));
            let jxp = p(ip, jp) * (w(i, jp) - w(ip, j)) - p(im, jm) * (w(im, j) - w(i, jm))
                - p(im, jp) * (w(i, jp) - w(im, j))
                + p(ip, jm) * (w(ip, j) - w(i, jm));
            out.values[i * ny + j] = fac * (jpp + jpx + jxp);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Grid, TopBc};
    use std::f64::consts::PI;

    /// Smooth fields supported away from the wall and top, so the missing
    /// boundary rows cannot spoil the discrete conservation laws.
    fn bump_pair() -> (ScalarField, ScalarField) {
        let g = Grid::new(24, 25, 2.0 * PI, 1.0, TopBc::FreeSlip).unwrap();
        let window = |x2: f64| {
            let s = (x2 - 0.5) / 0.3;
            if s.abs() >= 1.0 { 0.0 } else { (1.0 - s * s).powi(4) }
        };
        let psi = ScalarField::from_fn(&g, move |x1, x2| (2.0 * x1).sin() * window(x2));
        let omega = ScalarField::from_fn(&g, move |x1, x2| (x1 + 0.3).cos() * window(x2));
        (psi, omega)
    }

    #[test]
    fn conserves_mean_energy_and_enstrophy() {
        let (psi, omega) = bump_pair();
        let jac = arakawa_jacobian(&psi, &omega).unwrap();
        let mut s0 = 0.0;
        let mut s_psi = 0.0;
        let mut s_omega = 0.0;
        for i in 0..psi.grid.nx {
            for j in 0..psi.grid.ny {
                s0 += jac.at(i, j);
                s_psi += psi.at(i, j) * jac.at(i, j);
                s_omega += omega.at(i, j) * jac.at(i, j);
            }
        }
        let scale = jac.max_abs() * (psi.grid.nx * psi.grid.ny) as f64;
        assert!(s0.abs() < 1e-13 * scale, "{s0}");
        assert!(s_psi.abs() < 1e-13 * scale, "{s_psi}");
        assert!(s_omega.abs() < 1e-13 * scale, "{s_omega}");
    }

    #[test]
    fn antisymmetric() {
        let (psi, omega) = bump_pair();
        let a = arakawa_jacobian(&psi, &omega).unwrap();
        let b = arakawa_jacobian(&omega, &psi).unwrap();
        for (x, y) in a.values.iter().zip(b.values.iter()) {
            assert!((x + y).abs() < 1e-14);
        }
    }

    #[test]
    fn second_order_accurate() {
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let g = Grid::new(n, n + 1, 2.0 * PI, PI, TopBc::FreeSlip).unwrap();
            let psi = ScalarField::from_fn(&g, |x1, x2| x1.sin() * x2.sin());
            let omega = ScalarField::from_fn(&g, |x1, x2| (2.0 * x1).cos() * (2.0 * x2).cos());
            let jac = arakawa_jacobian(&psi, &omega).unwrap();
            let mut e = 0.0f64;
            for i in 0..g.nx {
                let (x1, c1, s1) = (g.x1(i), g.x1(i).cos(), g.x1(i).sin());
                let _ = x1;
                for j in 1..g.ny - 1 {
                    let x2 = g.x2(j);
                    // J = d1psi d2omega - d2psi d1omega
                    let exact = c1 * x2.sin() * (-2.0 * (2.0 * x2).sin() * (2.0 * g.x1(i)).cos())
                        - s1 * x2.cos() * (-2.0 * (2.0 * g.x1(i)).sin() * (2.0 * x2).cos());
                    e = e.max((jac.at(i, j) - exact).abs());
                }
            }
            errs.push(e);
        }
        assert!((errs[0] / errs[1]).log2() > 1.9, "{errs:?}");
        assert!((errs[1] / errs[2]).log2() > 1.9, "{errs:?}");
    }

    #[test]
    fn vanishes_for_aligned_fields() {
        let g = Grid::new(16, 17, 2.0 * PI, 1.0, TopBc::FreeSlip).unwrap();
        let psi = ScalarField::from_fn(&g, |_, x2| x2 * x2);
        let omega = ScalarField::from_fn(&g, |_, x2| (3.0 * x2).sin());
        let jac = arakawa_jacobian(&psi, &omega).unwrap();
        assert!(jac.max_abs() < 1e-14);
    }
}
