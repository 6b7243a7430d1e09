use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{perturbed, PshFunction};
use crate::error::{Error, Result};
use crate::fields::{Coefficient, FourierField};
use crate::manifolds::{density, HermitianMetric};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub grid: usize,
    /// `∫_{u<v} (g + i∂∂̄v)^n`.
    pub lhs: f64,
    /// `∫_{u<v} (g + i∂∂̄u)^n`.
    pub rhs: f64,
    /// `rhs - lhs`; negative values violate the comparison inequality.
    pub margin: f64,
    /// Fraction of cells whose center lies within one cell diameter of `{u = v}`.
    pub boundary_fraction: f64,
    /// Fraction of cells with `u < v` at the center.
    pub domain_fraction: f64,
    /// Bound on `|f_u| + |f_v|` times the total volume.
    pub density_bound: f64,
}

impl ComparisonResult {
    /// Error allowance from misclassified boundary cells.
    pub fn allowance(&self) -> f64 {
        self.boundary_fraction * self.density_bound
    }

    pub fn violation(&self) -> f64 {
        (-self.margin).max(0.0)
    }

    pub fn within_allowance(&self) -> bool {
        self.margin >= -self.allowance()
    }
}

/// Dense separable evaluation of a Fourier field at cell centers
/// `(i + ½)/N`, one slab of fixed first coordinate at a time.
struct GridField {
    axes: usize,
    grid: usize,
    band: Vec<i32>,
    /// `phase[a][i * d_a + k] = e(k' x_i)` with `k' = k - band[a]`.
    phase: Vec<Vec<Complex64>>,
    modes: Vec<(Vec<i32>, Complex64)>,
}

impl GridField {
    fn new(f: &FourierField, grid: usize) -> Self {
        let axes = 2 * f.n();
        let modes: Vec<(Vec<i32>, Complex64)> = f
            .modes()
            .map(|(k, a)| (k[..axes].iter().map(|&v| v as i32).collect(), *a))
            .collect();
        let band: Vec<i32> = (0..axes)
            .map(|ax| modes.iter().map(|(k, _)| k[ax].abs()).max().unwrap_or(0))
            .collect();
        let phase = band
            .iter()
            .map(|&b| {
                let d = (2 * b + 1) as usize;
                let mut row = Vec::with_capacity(grid * d);
                for i in 0..grid {
                    let x = (i as f64 + 0.5) / grid as f64;
                    for k in 0..d {
                        let kk = k as i32 - b;
                        row.push(Complex64::from_polar(1.0, 2.0 * PI * kk as f64 * x));
                    }
                }
                row
            })
            .collect();
        GridField {
            axes,
            grid,
            band,
            phase,
            modes,
        }
    }

    fn dim(&self, ax: usize) -> usize {
        (2 * self.band[ax] + 1) as usize
    }

    /// Values on the slab `x_0 = (i0 + ½)/N`, row-major over axes `1..2n`.
    fn slab(&self, i0: usize) -> Vec<Complex64> {
        let dims: Vec<usize> = (1..self.axes).map(|ax| self.dim(ax)).collect();
        let total: usize = dims.iter().product();
        let mut t = vec![Complex64::new(0.0, 0.0); total];
        let d0 = self.dim(0);
        for (k, a) in &self.modes {
            let mut flat = 0;
            for ax in 1..self.axes {
                flat = flat * self.dim(ax) + (k[ax] + self.band[ax]) as usize;
            }
            t[flat] += a * self.phase[0][i0 * d0 + (k[0] + self.band[0]) as usize];
        }
        // contract the leading k-axis, appending the grid axis at the end
        for (step, &d) in dims.iter().enumerate() {
            let ax = step + 1;
            let rest = t.len() / d;
            let mut out = vec![Complex64::new(0.0, 0.0); rest * self.grid];
            for kk in 0..d {
                let src = &t[kk * rest..(kk + 1) * rest];
                for i in 0..self.grid {
                    let e = self.phase[ax][i * d + kk];
                    for (r, &s) in src.iter().enumerate() {
                        out[r * self.grid + i] += s * e;
                    }
                }
            }
            t = out;
        }
        t
    }
}

/// Integrates both Monge-Ampère densities over the cells with `u < v` at the
/// center of an `N^{2n}` grid.
pub fn comparison_integrals(
    g: &HermitianMetric<FourierField>,
    u: &PshFunction<FourierField>,
    v: &PshFunction<FourierField>,
    grid: usize,
) -> Result<ComparisonResult> {
    if !g.model().is_torus() {
        return Err(Error::Capability(format!(
            "sublevel-set integration needs a torus model, got {}",
            g.model()
        )));
    }
    if grid == 0 {
        return Err(Error::InvalidArgument(
            "grid resolution must be positive".into(),
        ));
    }
    let n = g.n();
    let fu = density(&perturbed(g, u.field())?.power(n)?)?.real_part();
    let fv = density(&perturbed(g, v.field())?.power(n)?)?.real_part();
    let w = v.field().try_sub(u.field())?;
    let diam = (2.0 * n as f64).sqrt() / grid as f64;
    let near = w.gradient_bound() * diam;

    let gw = GridField::new(&w, grid);
    let gu = GridField::new(&fu, grid);
    let gv = GridField::new(&fv, grid);
    // per slab: (lhs, rhs, boundary cells, domain cells), reduced in slab order
    let slabs: Vec<(f64, f64, usize, usize)> = (0..grid)
        .into_par_iter()
        .map(|i0| {
            let ws = gw.slab(i0);
            let us = gu.slab(i0);
            let vs = gv.slab(i0);
            let mut acc = (0.0, 0.0, 0, 0);
            for idx in 0..ws.len() {
                let wv = ws[idx].re;
                if wv.abs() <= near {
                    acc.2 += 1;
                }
                if wv > 0.0 {
                    acc.0 += vs[idx].re;
                    acc.1 += us[idx].re;
                    acc.3 += 1;
                }
            }
            acc
        })
        .collect();
    let cells = (grid as f64).powi(2 * n as i32);
    let vol = g.model().std_volume();
    let (mut lhs, mut rhs, mut boundary, mut domain) = (0.0, 0.0, 0usize, 0usize);
    for s in slabs {
        lhs += s.0;
        rhs += s.1;
        boundary += s.2;
        domain += s.3;
    }
    let lhs = lhs * vol / cells;
    let rhs = rhs * vol / cells;
    Ok(ComparisonResult {
        grid,
        lhs,
        rhs,
        margin: rhs - lhs,
        boundary_fraction: boundary as f64 / cells,
        domain_fraction: domain as f64 / cells,
        density_bound: (fu.magnitude() + fv.magnitude()) * vol,
    })
}

#[cfg(test)]
pub(super) fn grid_values(f: &FourierField, grid: usize) -> Vec<f64> {
    let gf = GridField::new(f, grid);
    (0..grid)
        .flat_map(|i0| gf.slab(i0).into_iter().map(|c| c.re))
        .collect()
}
