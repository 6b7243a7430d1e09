//! Coefficient backends for forms.
//!
//! Every coefficient of a [`Form`](crate::exterior::Form) lives in one of three
//! backends:
//!
//! * [`FourierField`]: a finite Fourier series on the unit torus
//!   `[0,1)^{2n}`. Integration is zero-mode extraction, so it is exact.
//! * [`CoframeConstant`]: a complex scalar attached to an invariant coframe
//!   monomial. It never varies in space; all calculus comes from structure
//!   constants.
//! * [`PolyField`]: a polynomial in `z_1..z_n, z̄_1..z̄_n` on a single chart.
//!   It can be differentiated and evaluated but not integrated.
//!
//! Real coordinates are interleaved: torus axis `2(j-1)` is `x_j` and axis
//! `2(j-1)+1` is `y_j`, with `z_j = x_j + i y_j`.

mod coframe;
mod fourier;
pub mod literal;
mod poly;

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;

pub use coframe::CoframeConstant;
pub use fourier::{FourierField, Freq, DEFAULT_BANDWIDTH_CAP};
pub use poly::{Monomial, PolyField};

/// A Wirtinger direction `∂/∂z_j` or `∂/∂z̄_j`, with `j` counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Z(usize),
    ZBar(usize),
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::Z(j) | Axis::ZBar(j) => j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Fourier,
    Coframe,
    Poly,
}

impl Backend {
    /// Arithmetic on small integer data is bit-exact (no transcendental factors).
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Fourier)
    }

    pub fn is_position_dependent(self) -> bool {
        !matches!(self, Backend::Coframe)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Backend::Fourier => "fourier",
            Backend::Coframe => "coframe",
            Backend::Poly => "poly",
        };
        f.write_str(s)
    }
}

/// Scalar coefficient algebra shared by all backends.
///
/// Operations that can fail on mismatched dimensions or bandwidth budgets
/// return `Result`; the rest are infallible.
pub trait Coefficient: Clone + fmt::Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    /// Relative threshold below which whole form terms are pruned.
    const PRUNE_REL: f64 = 0.0;

    fn constant(n: usize, value: Complex64) -> Self;

    fn zero(n: usize) -> Self {
        Self::constant(n, Complex64::new(0.0, 0.0))
    }

    /// Complex dimension the field is defined over; `None` for constants.
    fn dim(&self) -> Option<usize>;

    fn is_zero(&self) -> bool;

    /// An upper bound on the sup-norm of the field (sum of absolute amplitudes).
    fn magnitude(&self) -> f64;

    fn try_add(&self, other: &Self) -> Result<Self>;

    fn try_mul(&self, other: &Self) -> Result<Self>;

    fn scale(&self, c: Complex64) -> Self;

    fn conj(&self) -> Self;

    fn deriv(&self, axis: Axis) -> Result<Self>;

    /// Integral over the fundamental domain with unit volume.
    fn mean(&self) -> Result<Complex64>;

    /// Point value; `point` holds interleaved real coordinates `(x_1, y_1, ...)`.
    fn eval(&self, point: &[f64]) -> Complex64;

    fn is_real(&self) -> bool;

    /// `(f + conj f) / 2`, flagged real.
    fn real_part(&self) -> Self;

    /// Max absolute coefficient difference.
    fn distance(&self, other: &Self) -> f64;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Re-expresses the field on a product with `n_total` complex axes, this
    /// factor occupying axes `offset+1 ..= offset+n`.
    fn embed(&self, n_total: usize, offset: usize) -> Result<Self>;

    fn as_fourier(&self) -> Option<&FourierField> {
        None
    }
}

pub(crate) fn check_axis(axis: Axis, n: usize) -> Result<()> {
    let j = axis.index();
    if j == 0 || j > n {
        return Err(crate::Error::InvalidIndex {
            indices: vec![j],
            n,
        });
    }
    Ok(())
}
