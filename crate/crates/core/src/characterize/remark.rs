use num_complex::Complex64;
use serde::Serialize;

use super::{ddbar_power, defect_scale, i_dg_dbarg, Tolerances};
use crate::error::{Error, Result};
use crate::exterior::GradedForm;
use crate::fields::Coefficient;
use crate::manifolds::HermitianMetric;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Remark2Report {
    /// Max coefficient of `d(i g^{n-2}∧∂̄g) − (n−2)g^{n−3}∧i∂g∧∂̄g − g^{n−2}∧i∂∂̄g`.
    pub pointwise_residual: f64,
    pub pointwise_tolerance: f64,
    /// `(n−2)∫g^{n−3}∧i∂g∧∂̄g`.
    pub torsion_integral: f64,
    /// `∫g^{n−2}∧i∂∂̄g`.
    pub ddbar_integral: f64,
    pub integral_sum: f64,
    pub integral_tolerance: f64,
}

impl Remark2Report {
    pub fn passes(&self) -> bool {
        self.pointwise_residual <= self.pointwise_tolerance
            && self.integral_sum.abs() <= self.integral_tolerance
    }
}

/// Checks `d(i g^{n-2}∧∂̄g) = (n−2)g^{n−3}∧i∂g∧∂̄g + g^{n−2}∧i∂∂̄g` as forms
/// and the vanishing of the integrated right-hand side.
pub fn remark2_identity<C: Coefficient>(
    g: &HermitianMetric<C>,
    tol: &Tolerances,
) -> Result<Remark2Report> {
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "identity needs n >= 3, got {n}"
        )));
    }
    let frame = g.model().frame();
    let form = g.form();
    let inner = form.power(n - 2)?.wedge(&frame.delbar(form)?)?.scale(I);
    let lhs = frame.exterior_d(&inner)?;
    let torsion = form.power(n - 3)?.wedge(&i_dg_dbarg(frame, form)?)?;
    let ddbar = form.power(n - 2)?.wedge(&ddbar_power(frame, form, 1)?)?;
    let mut rhs = GradedForm::zero(n);
    rhs.add_form(torsion.scale(Complex64::new((n - 2) as f64, 0.0)))?;
    rhs.add_form(ddbar.clone())?;
    let pointwise_residual = lhs.try_sub(&rhs)?.magnitude();
    let torsion_integral = (n - 2) as f64 * g.model().integrate_top(&torsion)?.re;
    let ddbar_integral = g.model().integrate_top(&ddbar)?.re;
    let scale = defect_scale(form);
    Ok(Remark2Report {
        pointwise_residual,
        pointwise_tolerance: tol.defect_rel * scale,
        torsion_integral,
        ddbar_integral,
        integral_sum: torsion_integral + ddbar_integral,
        integral_tolerance: tol.defect_rel,
    })
}
