//! Perturbed metrics `g + i∂∂̄u`, their total volumes and the mixed terms
//! `∫ g^k ∧ (i∂∂̄u)^{n-k}`.

mod comparison;
mod expansion;
mod threefold;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::fields::{Coefficient, FourierField};
use crate::manifolds::{
    hermitian_matrix_at, is_positive_11, HermitianMetric, SamplingSpec, PSD_TOL_REL,
};
use crate::random::random_real_fourier;

pub use comparison::{comparison_integrals, ComparisonResult};
pub use expansion::{binomial, epsilon_expansion, ExpansionProbe};
pub use threefold::{
    threefold_decomposition, ThreefoldReport, THREEFOLD_REL_TOL, THREEFOLD_STOKES_TOL,
};

/// Default upper bound reported for `ε₀` when `i∂∂̄u` vanishes.
pub const DEFAULT_EPS_MAX: f64 = 1e6;

fn check_field<C: Coefficient>(g: &HermitianMetric<C>, u: &C) -> Result<()> {
    match u.dim() {
        Some(m) if m != g.n() => Err(Error::DimensionMismatch(g.n(), m)),
        _ => Ok(()),
    }
}

/// `i∂∂̄u` in the metric's frame.
pub fn i_ddbar<C: Coefficient>(g: &HermitianMetric<C>, u: &C) -> Result<Form<C>> {
    check_field(g, u)?;
    g.model().frame().i_ddbar(g.n(), u)
}

/// `g + i∂∂̄u`.
pub fn perturbed<C: Coefficient>(g: &HermitianMetric<C>, u: &C) -> Result<Form<C>> {
    g.form().try_add(&i_ddbar(g, u)?)
}

/// `∫ (g + i∂∂̄u)^n`.
pub fn ma_volume<C: Coefficient>(g: &HermitianMetric<C>, u: &C) -> Result<f64> {
    let top = perturbed(g, u)?.power(g.n())?;
    Ok(g.model().integrate_top(&top)?.re)
}

/// `∫ g^k ∧ (i∂∂̄u)^{n-k}`.
pub fn mixed_term<C: Coefficient>(g: &HermitianMetric<C>, u: &C, k: usize) -> Result<f64> {
    let n = g.n();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "mixed term index {k} exceeds dimension {n}"
        )));
    }
    let h = i_ddbar(g, u)?;
    let top = g.form().power(k)?.wedge(&h.power(n - k)?)?;
    Ok(g.model().integrate_top(&top)?.re)
}

/// `∫ g^k ∧ i∂∂̄u_1 ∧ … ∧ i∂∂̄u_{n-k}`.
pub fn polarized_mixed_term<C: Coefficient>(
    g: &HermitianMetric<C>,
    us: &[C],
    k: usize,
) -> Result<f64> {
    let n = g.n();
    if k > n || us.len() != n - k {
        return Err(Error::InvalidArgument(format!(
            "polarized term with k = {k} needs {} fields, got {}",
            n.saturating_sub(k),
            us.len()
        )));
    }
    let mut top = g.form().power(k)?;
    for u in us {
        top = top.wedge(&i_ddbar(g, u)?)?;
    }
    Ok(g.model().integrate_top(&top)?.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Epsilon0 {
    pub value: f64,
    /// `i∂∂̄u` never constrains `ε`; `value` is the configured cap.
    pub capped: bool,
}

fn psd_ok(m: &DMatrix<Complex64>) -> bool {
    let ev = crate::manifolds::eigenvalues(m);
    let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let trace_norm: f64 = ev.iter().map(|v| v.abs()).sum();
    min >= -PSD_TOL_REL * trace_norm
}

/// Largest `ε` such that `g ± ε i∂∂̄u ≥ 0` at every sample point.
///
/// The candidate is the smallest pointwise `1/ρ(A⁻¹B)` for `A = g`,
/// `B = i∂∂̄u`; it is then confirmed with the same semi-positivity test used
/// by [`is_positive_11`], shrinking by halving and bisection if the
/// confirmation fails.
pub fn psh_epsilon0<C: Coefficient>(
    g: &HermitianMetric<C>,
    u: &C,
    spec: &SamplingSpec,
    eps_max: f64,
) -> Result<Epsilon0> {
    if !u.is_real() {
        return Err(Error::NotReal("scalar field for ε₀"));
    }
    let h = i_ddbar(g, u)?;
    if h.is_zero() {
        return Ok(Epsilon0 {
            value: eps_max,
            capped: true,
        });
    }
    let points = spec.points_for::<C>(g.n());
    let mats: Vec<(DMatrix<Complex64>, DMatrix<Complex64>)> = points
        .par_iter()
        .map(|x| {
            Ok((
                hermitian_matrix_at(g.form(), x)?,
                hermitian_matrix_at(&h, x)?,
            ))
        })
        .collect::<Result<_>>()?;
    let rho: Vec<f64> = mats
        .par_iter()
        .map(|(a, b)| {
            let chol = a.clone().cholesky().ok_or_else(|| {
                Error::InvalidMetric(
                    "metric matrix lost positive definiteness at a sample point".into(),
                )
            })?;
            let l_inv = chol
                .l()
                .try_inverse()
                .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
            let m = &l_inv * b * l_inv.adjoint();
            let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
            Ok(crate::manifolds::eigenvalues(&m)
                .into_iter()
                .map(f64::abs)
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let rho_max = rho.into_iter().fold(0.0, f64::max);
    if rho_max == 0.0 || 1.0 / rho_max >= eps_max {
        return Ok(Epsilon0 {
            value: eps_max,
            capped: true,
        });
    }
    let admissible = |eps: f64| {
        mats.par_iter().all(|(a, b)| {
            let s = Complex64::new(eps, 0.0);
            psd_ok(&(a + b * s)) && psd_ok(&(a - b * s))
        })
    };
    let candidate = 1.0 / rho_max;
    if admissible(candidate) {
        return Ok(Epsilon0 {
            value: candidate,
            capped: false,
        });
    }
    let mut hi = candidate;
    let mut lo = candidate / 2.0;
    while !admissible(lo) {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-300 {
            return Err(Error::Numerical("ε₀ line search collapsed to zero".into()));
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Epsilon0 {
        value: lo,
        capped: false,
    })
}

/// A real field `u` with `g + i∂∂̄u ≥ 0` certified on a sampling spec.
#[derive(Debug, Clone, PartialEq)]
pub struct PshFunction<C> {
    u: C,
    certificate: f64,
}

impl<C: Coefficient> PshFunction<C> {
    pub fn new(g: &HermitianMetric<C>, u: C, spec: &SamplingSpec) -> Result<Self> {
        if !u.is_real() {
            return Err(Error::NotReal("plurisubharmonic candidate"));
        }
        let report = is_positive_11(&perturbed(g, &u)?, g.model(), spec, 0.0)?;
        if !report.semi_positive {
            return Err(Error::InvalidArgument(format!(
                "g + i∂∂̄u is not semi-positive (min eigenvalue {:e})",
                report.min_eigenvalue
            )));
        }
        Ok(PshFunction {
            u,
            certificate: report.min_eigenvalue,
        })
    }

    pub fn field(&self) -> &C {
        &self.u
    }

    /// Minimum sampled eigenvalue of `g + i∂∂̄u`.
    pub fn certificate(&self) -> f64 {
        self.certificate
    }
}

/// Seeded random real fields of band at most `band`, each scaled to `0.8·ε₀`.
pub fn psh_family(
    g: &HermitianMetric<FourierField>,
    count: usize,
    band: u32,
    seed: u64,
    spec: &SamplingSpec,
) -> Result<Vec<PshFunction<FourierField>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let raw: Vec<FourierField> = (0..count)
        .map(|_| random_real_fourier(&mut rng, n, band, 3, 1.0))
        .collect();
    raw.into_iter()
        .map(|u| {
            let eps = psh_epsilon0(g, &u, spec, DEFAULT_EPS_MAX)?;
            let u = u.scale(Complex64::new(0.8 * eps.value, 0.0));
            PshFunction::new(g, u, spec)
        })
        .collect()
}

#[cfg(test)]
mod tests;
