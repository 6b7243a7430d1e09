use std::collections::BTreeMap;

use super::{Bidegree, Form};
use crate::error::{Error, Result};
use crate::fields::Coefficient;

/// A sum of homogeneous forms of possibly different bidegrees, such as `dα`
/// or the structure-constant expansion of `dφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedForm<C> {
    n: usize,
    parts: BTreeMap<Bidegree, Form<C>>,
}

impl<C: Coefficient> GradedForm<C> {
    pub fn zero(n: usize) -> Self {
        GradedForm {
            n,
            parts: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_form(&mut self, form: Form<C>) -> Result<()> {
        if form.n() != self.n {
            return Err(Error::DimensionMismatch(self.n, form.n()));
        }
        if form.is_zero() {
            return Ok(());
        }
        let b = form.bidegree();
        let merged = match self.parts.remove(&b) {
            Some(existing) => existing.try_add(&form)?,
            None => form,
        };
        if !merged.is_zero() {
            self.parts.insert(b, merged);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GradedForm<C>) -> Result<GradedForm<C>> {
        let mut out = self.clone();
        for f in other.parts.values() {
            out.add_form(f.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GradedForm<C>) -> Result<GradedForm<C>> {
        let mut out = self.clone();
        for f in other.parts.values() {
            out.add_form(f.scale(num_complex::Complex64::new(-1.0, 0.0)))?;
        }
        Ok(out)
    }

    /// The component of the given bidegree (zero if absent).
    pub fn component(&self, b: Bidegree) -> Form<C> {
        self.parts
            .get(&b)
            .cloned()
            .unwrap_or_else(|| Form::zero(self.n, b))
    }

    pub fn parts(&self) -> impl Iterator<Item = &Form<C>> {
        self.parts.values()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn magnitude(&self) -> f64 {
        self.parts.values().map(Form::magnitude).fold(0.0, f64::max)
    }

    pub fn wedge(&self, other: &GradedForm<C>) -> Result<GradedForm<C>> {
        let mut out = GradedForm::zero(self.n);
        for a in self.parts.values() {
            for b in other.parts.values() {
                out.add_form(a.wedge(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn wedge_form(&self, other: &Form<C>) -> Result<GradedForm<C>> {
        self.wedge(&GradedForm::from(other.clone()))
    }

    pub fn conjugate(&self) -> GradedForm<C> {
        let parts = self.parts.values().map(|f| {
            let c = f.conjugate();
            (c.bidegree(), c)
        });
        GradedForm {
            n: self.n,
            parts: parts.collect(),
        }
    }

    pub fn scale(&self, c: num_complex::Complex64) -> GradedForm<C> {
        let mut out = GradedForm::zero(self.n);
        for f in self.parts.values() {
            out.add_form(f.scale(c)).expect("same dimension");
        }
        out
    }
}

impl<C: Coefficient> From<Form<C>> for GradedForm<C> {
    fn from(form: Form<C>) -> Self {
        let mut g = GradedForm::zero(form.n());
        g.add_form(form).expect("same dimension");
        g
    }
}
