use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{ma_volume, mixed_term, psh_epsilon0};
use crate::error::{Error, Result};
use crate::fields::Coefficient;
use crate::manifolds::{HermitianMetric, SamplingSpec};

/// Relative least-squares residual above which a fit is rejected.
pub const FIT_RESIDUAL_TOL: f64 = 1e-9;

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// The polynomial `ε ↦ ∫(g + ε i∂∂̄u)^n`, sampled and fitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionProbe {
    pub epsilon0: f64,
    pub capped: bool,
    pub epsilons: Vec<f64>,
    pub volumes: Vec<f64>,
    /// Least-squares coefficients `c_0..c_n` in powers of `ε`.
    pub fitted: Vec<f64>,
    /// `binom(n,k) · ∫ g^{n-k} ∧ (i∂∂̄u)^k` by direct wedge.
    pub direct: Vec<f64>,
    /// RMS fit residual over the largest sampled volume.
    pub fit_residual: f64,
    /// Per-coefficient error, each term `|c_k| ε₀^k` measured against the largest.
    pub relative_errors: Vec<f64>,
}

impl ExpansionProbe {
    pub fn max_relative_error(&self) -> f64 {
        self.relative_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Samples `num_eps` evenly spaced values of `ε` in `[-0.9ε₀, 0.9ε₀]` and
/// fits a degree-`n` polynomial by least squares in `t = ε/ε₀`.
pub fn epsilon_expansion<C: Coefficient>(
    g: &HermitianMetric<C>,
    u: &C,
    num_eps: usize,
    spec: &SamplingSpec,
    eps_max: f64,
) -> Result<ExpansionProbe> {
    let n = g.n();
    if num_eps < n + 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} ε samples, got {num_eps}",
            n + 3
        )));
    }
    let eps0 = psh_epsilon0(g, u, spec, eps_max)?;
    let e0 = eps0.value;
    let ts: Vec<f64> = (0..num_eps)
        .map(|j| 0.9 * (2.0 * j as f64 / (num_eps - 1) as f64 - 1.0))
        .collect();
    let epsilons: Vec<f64> = ts.iter().map(|t| t * e0).collect();
    let volumes: Vec<f64> = epsilons
        .par_iter()
        .map(|&eps| ma_volume(g, &u.scale(Complex64::new(eps, 0.0))))
        .collect::<Result<_>>()?;

    let vander = DMatrix::from_fn(num_eps, n + 1, |r, k| ts[r].powi(k as i32));
    let rhs = DVector::from_vec(volumes.clone());
    let svd = vander.clone().svd(true, true);
    let coef_t = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Numerical(format!("least-squares solve failed: {e}")))?;
    let resid = &vander * &coef_t - &rhs;
    let vol_scale = volumes
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let fit_residual = resid.norm() / (num_eps as f64).sqrt() / vol_scale;
    if fit_residual > FIT_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "ε-expansion fit residual {fit_residual:e} above {FIT_RESIDUAL_TOL:e}"
        )));
    }
    let fitted: Vec<f64> = (0..=n).map(|k| coef_t[k] / e0.powi(k as i32)).collect();
    let direct: Vec<f64> = (0..=n)
        .map(|k| Ok(binomial(n, k) * mixed_term(g, u, n - k)?))
        .collect::<Result<_>>()?;
    let term_scale = direct
        .iter()
        .enumerate()
        .map(|(k, d)| d.abs() * e0.powi(k as i32))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let relative_errors = (0..=n)
        .map(|k| (fitted[k] - direct[k]).abs() * e0.powi(k as i32) / term_scale)
        .collect();
    Ok(ExpansionProbe {
        epsilon0: e0,
        capped: eps0.capped,
        epsilons,
        volumes,
        fitted,
        direct,
        fit_residual,
        relative_errors,
    })
}
