use num_complex::Complex64;

use super::positivity::{hermitian_matrix_at, min_eigenvalue, SamplingSpec};
use super::ManifoldModel;
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, MultiIndex};
use crate::fields::Coefficient;

/// Minimum eigenvalue a metric's coefficient matrix must exceed everywhere sampled.
pub const PD_TOL: f64 = 1e-8;

/// `i Σ_{j,k} a_{jk̄} dz_j ∧ dz̄_k` from the matrix entries `a(j, k)` (1-based).
pub fn hermitian_form<C, F>(n: usize, mut entry: F) -> Result<Form<C>>
where
    C: Coefficient,
    F: FnMut(usize, usize) -> Result<C>,
{
    let mut terms = Vec::with_capacity(n * n);
    for j in 1..=n {
        for k in 1..=n {
            let a = entry(j, k)?;
            terms.push((
                MultiIndex::single(j),
                MultiIndex::single(k),
                a.scale(Complex64::new(0.0, 1.0)),
            ));
        }
    }
    Form::from_terms(n, Bidegree::new(1, 1), terms)
}

/// A positive real `(1,1)`-form on a model.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric<C> {
    form: Form<C>,
    model: ManifoldModel,
}

impl<C: Coefficient> HermitianMetric<C> {
    /// Validates reality and positive definiteness on the default sampling spec.
    pub fn new(form: Form<C>, model: ManifoldModel) -> Result<Self> {
        Self::with_sampling(form, model, &SamplingSpec::default())
    }

    pub fn with_sampling(form: Form<C>, model: ManifoldModel, spec: &SamplingSpec) -> Result<Self> {
        if form.n() != model.n() {
            return Err(Error::DimensionMismatch(model.n(), form.n()));
        }
        if C::BACKEND != model.backend() {
            return Err(Error::Capability(format!(
                "model {model} expects {} coefficients, got {}",
                model.backend(),
                C::BACKEND
            )));
        }
        if form.bidegree() != Bidegree::new(1, 1) {
            return Err(Error::InvalidMetric(format!(
                "bidegree {} is not (1,1)",
                form.bidegree()
            )));
        }
        if !form.is_real()? {
            return Err(Error::InvalidMetric(
                "fundamental form is not real (matrix not Hermitian)".into(),
            ));
        }
        let points = spec.points_for::<C>(model.n());
        let worst = points
            .iter()
            .map(|x| {
                let m = hermitian_matrix_at(&form, x)?;
                Ok(min_eigenvalue(&m))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(worst > PD_TOL) {
            return Err(Error::InvalidMetric(format!(
                "coefficient matrix not positive definite (min eigenvalue {worst:e})"
            )));
        }
        Ok(HermitianMetric { form, model })
    }

    pub fn form(&self) -> &Form<C> {
        &self.form
    }

    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    /// `∫ g^n`.
    pub fn volume(&self) -> Result<f64> {
        Ok(self.model.integrate_top(&self.form.power(self.n())?)?.re)
    }
}
