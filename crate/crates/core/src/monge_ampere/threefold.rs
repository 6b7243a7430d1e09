use num_complex::Complex64;
use serde::Serialize;

use super::{i_ddbar, ma_volume};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::fields::Coefficient;
use crate::manifolds::{is_weakly_positive_kk, HermitianMetric, SamplingSpec, PSD_TOL_REL};

/// Bound on `|T3|` relative to the volume scale `∫g³`.
pub const THREEFOLD_STOKES_TOL: f64 = 1e-12;
/// Relative tolerance on the binomial reassembly and the integration-by-parts identity.
pub const THREEFOLD_REL_TOL: f64 = 1e-10;

const WEAK_TRIALS: usize = 32;

/// The four terms of `∫(g + i∂∂̄u)^3` on a threefold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreefoldReport {
    /// `∫ g³`.
    pub t0: f64,
    /// `∫ g² ∧ i∂∂̄u`.
    pub t1: f64,
    /// `∫ g ∧ (i∂∂̄u)²`.
    pub t2: f64,
    /// `∫ (i∂∂̄u)³`.
    pub t3: f64,
    pub volume: f64,
    /// `-∫ i∂∂̄g ∧ i∂u ∧ ∂̄u`.
    pub t2_by_parts: f64,
    /// `|T3| / |T0|`.
    pub stokes_residual: f64,
    /// `|volume - (T0 + 3T1 + 3T2 + T3)|`, relative.
    pub reassembly_residual: f64,
    /// `|T2 - t2_by_parts|`, relative.
    pub by_parts_residual: f64,
    /// Whether `i∂∂̄g` passed the weak positivity test; if so `T2` must not be positive.
    pub ddbar_g_weakly_positive: bool,
    pub t2_sign_consistent: bool,
}

impl ThreefoldReport {
    pub fn passes(&self) -> bool {
        self.stokes_residual <= THREEFOLD_STOKES_TOL
            && self.reassembly_residual <= THREEFOLD_REL_TOL
            && self.by_parts_residual <= THREEFOLD_REL_TOL
            && self.t2_sign_consistent
    }
}

fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

pub fn threefold_decomposition<C: Coefficient>(
    g: &HermitianMetric<C>,
    u: &C,
    spec: &SamplingSpec,
) -> Result<ThreefoldReport> {
    if g.n() != 3 {
        return Err(Error::InvalidArgument(format!(
            "threefold decomposition needs n = 3, got {}",
            g.n()
        )));
    }
    let model = g.model();
    let frame = model.frame();
    let n = 3;
    let gf = g.form();
    let h = i_ddbar(g, u)?;
    let int = |a: &Form<C>| -> Result<f64> { Ok(model.integrate_top(a)?.re) };
    let t0 = int(&gf.power(3)?)?;
    let t1 = int(&gf.power(2)?.wedge(&h)?)?;
    let t2 = int(&gf.wedge(&h.power(2)?)?)?;
    let t3 = int(&h.power(3)?)?;
    let volume = ma_volume(g, u)?;

    let ddg = frame
        .del(&frame.delbar(gf)?)?
        .scale(Complex64::new(0.0, 1.0));
    let uf = Form::scalar(n, u.clone())?;
    let du = frame.del(&uf)?;
    let dbu = frame.delbar(&uf)?;
    let i_du_dbu = du.wedge(&dbu)?.scale(Complex64::new(0.0, 1.0));
    let t2_by_parts = -int(&ddg.wedge(&i_du_dbu)?)?;

    let floor = 1e-12 * t0.abs();
    let positivity = is_weakly_positive_kk(&ddg, model, WEAK_TRIALS, spec.seed, spec, 0.0)?;
    let slack = PSD_TOL_REL * t0.abs();
    Ok(ThreefoldReport {
        t0,
        t1,
        t2,
        t3,
        volume,
        t2_by_parts,
        stokes_residual: t3.abs() / t0.abs(),
        reassembly_residual: rel(volume, t0 + 3.0 * t1 + 3.0 * t2 + t3, floor),
        by_parts_residual: rel(t2, t2_by_parts, floor),
        ddbar_g_weakly_positive: positivity.weakly_positive,
        t2_sign_consistent: !positivity.weakly_positive || t2 <= slack,
    })
}
