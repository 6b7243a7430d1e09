use num_complex::Complex64;

use super::{Axis, Backend, Coefficient};
use crate::error::Result;

/// A constant coefficient in front of an invariant coframe monomial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoframeConstant(pub Complex64);

impl CoframeConstant {
    pub fn new(re: f64, im: f64) -> Self {
        CoframeConstant(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<Complex64> for CoframeConstant {
    fn from(c: Complex64) -> Self {
        CoframeConstant(c)
    }
}

impl Coefficient for CoframeConstant {
    const BACKEND: Backend = Backend::Coframe;

    fn constant(_n: usize, value: Complex64) -> Self {
        CoframeConstant(value)
    }

    fn dim(&self) -> Option<usize> {
        None
    }

    fn is_zero(&self) -> bool {
        self.0 == Complex64::new(0.0, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(CoframeConstant(self.0 + other.0))
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(CoframeConstant(self.0 * other.0))
    }

    fn scale(&self, c: Complex64) -> Self {
        CoframeConstant(self.0 * c)
    }

    fn conj(&self) -> Self {
        CoframeConstant(self.0.conj())
    }

    fn deriv(&self, _axis: Axis) -> Result<Self> {
        Ok(CoframeConstant::default())
    }

    fn mean(&self) -> Result<Complex64> {
        Ok(self.0)
    }

    fn eval(&self, _point: &[f64]) -> Complex64 {
        self.0
    }

    fn is_real(&self) -> bool {
        self.0.im == 0.0
    }

    fn real_part(&self) -> Self {
        CoframeConstant::new(self.0.re, 0.0)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    fn embed(&self, _n_total: usize, _offset: usize) -> Result<Self> {
        Ok(*self)
    }
}
