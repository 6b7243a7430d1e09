//! Compact models, top-form integration, the Stokes validator and positivity testers.
//!
//! Volume convention: the orientation form is `ω_std = ∧_j (i dz_j ∧ dz̄_j)`.
//! On the unit torus `i dz∧dz̄ = 2 dx∧dy`, so `∫ ω_std = 2^n`. On a nilmanifold
//! model the coframe analogue of `ω_std` has total volume 1.

mod metric;
mod positivity;

use std::fmt;

use num_complex::Complex64;

use crate::calculus::{Frame, StructureConstants};
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, GradedForm, MultiIndex};
use crate::fields::{Backend, Coefficient};
use crate::MAX_DIM;

pub use metric::{hermitian_form, HermitianMetric, PD_TOL};
pub(crate) use positivity::eigenvalues;
pub use positivity::{
    hermitian_matrix_at, is_positive_11, is_weakly_positive_kk, PositivityReport, SamplingSpec,
    WeakPositivityReport, PSD_TOL_REL,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// Unit torus `C^n / (Z^n + iZ^n)` with `2n` real axes.
    Torus,
    /// Compact quotient of a nilpotent group, total volume 1.
    Nilmanifold(StructureConstants),
    Product(Box<ManifoldModel>, Box<ManifoldModel>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldModel {
    n: usize,
    kind: ModelKind,
    frame: Frame,
}

impl ManifoldModel {
    pub fn torus(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(ManifoldModel {
            n,
            kind: ModelKind::Torus,
            frame: Frame::Coordinate,
        })
    }

    pub fn nilmanifold(sc: StructureConstants) -> Self {
        ManifoldModel {
            n: sc.n(),
            frame: Frame::Invariant(sc.clone()),
            kind: ModelKind::Nilmanifold(sc),
        }
    }

    pub fn iwasawa() -> Self {
        Self::nilmanifold(StructureConstants::iwasawa())
    }

    /// Product `X × Y`; both factors must use the same backend.
    pub fn product(x: ManifoldModel, y: ManifoldModel) -> Result<Self> {
        let n = x.n + y.n;
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let frame = match (&x.frame, &y.frame) {
            (Frame::Coordinate, Frame::Coordinate) => Frame::Coordinate,
            (Frame::Invariant(a), Frame::Invariant(b)) => Frame::Invariant(a.product(b)?),
            _ => {
                return Err(Error::Capability(format!(
                    "product of {} and {} mixes coefficient backends",
                    x, y
                )))
            }
        };
        Ok(ManifoldModel {
            n,
            frame,
            kind: ModelKind::Product(Box::new(x), Box::new(y)),
        })
    }

    /// Parses `torusN`, `iwasawa` or `product(<a>,<b>)`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(rest) = name.strip_prefix("torus") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Config(format!("bad torus dimension in '{name}'")))?;
            return Self::torus(n);
        }
        if name == "iwasawa" {
            return Ok(Self::iwasawa());
        }
        if let Some(inner) = name
            .strip_prefix("product(")
            .and_then(|s| s.strip_suffix(')'))
        {
            let (a, b) = split_top_level(inner)
                .ok_or_else(|| Error::Config(format!("product needs two factors: '{name}'")))?;
            return Self::product(Self::from_name(a)?, Self::from_name(b)?);
        }
        Err(Error::Config(format!("unknown model '{name}'")))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn backend(&self) -> Backend {
        match self.frame {
            Frame::Coordinate => Backend::Fourier,
            Frame::Invariant(_) => Backend::Coframe,
        }
    }

    /// Torus or product of tori: fields are pointwise evaluable on `[0,1)^{2n}`.
    pub fn is_torus(&self) -> bool {
        matches!(self.frame, Frame::Coordinate)
    }

    /// `∫ ω_std` in the frozen convention.
    pub fn std_volume(&self) -> f64 {
        match self.frame {
            Frame::Coordinate => 2f64.powi(self.n as i32),
            Frame::Invariant(_) => 1.0,
        }
    }

    fn check_backend<C: Coefficient>(&self) -> Result<()> {
        if C::BACKEND != self.backend() {
            return Err(Error::Capability(format!(
                "model {} expects {} coefficients, got {}",
                self,
                self.backend(),
                C::BACKEND
            )));
        }
        Ok(())
    }

    /// `∫_X a` for an `(n,n)` form.
    pub fn integrate_top<C: Coefficient>(&self, a: &Form<C>) -> Result<Complex64> {
        self.check_backend::<C>()?;
        if a.n() != self.n {
            return Err(Error::DimensionMismatch(self.n, a.n()));
        }
        let f = density(a)?;
        Ok(f.mean()? * self.std_volume())
    }

    /// Integrates the `(n,n)` component; other components of a degree-`2n`
    /// graded form vanish identically.
    pub fn integrate_graded<C: Coefficient>(&self, a: &GradedForm<C>) -> Result<Complex64> {
        self.integrate_top(&a.component(Bidegree::new(self.n, self.n)))
    }

    /// `|∫ dα|` for a form of total degree `2n-1`.
    pub fn stokes_residual<C: Coefficient>(&self, a: &GradedForm<C>) -> Result<f64> {
        if a.parts().any(|p| p.degree() != 2 * self.n - 1) {
            return Err(Error::Bidegree {
                expected: format!("total degree {}", 2 * self.n - 1),
                found: a
                    .parts()
                    .map(|p| p.bidegree().to_string())
                    .collect::<Vec<_>>()
                    .join("+"),
            });
        }
        let da = self.frame.exterior_d_graded(a)?;
        Ok(self.integrate_graded(&da)?.norm())
    }

    /// Pullback of a form on the first factor of a product model.
    pub fn pullback_first<C: Coefficient>(&self, a: &Form<C>) -> Result<Form<C>> {
        self.pullback(a, 0)
    }

    /// Pullback of a form on the second factor of a product model.
    pub fn pullback_second<C: Coefficient>(&self, a: &Form<C>) -> Result<Form<C>> {
        let ModelKind::Product(x, _) = &self.kind else {
            return Err(Error::Capability("pullback needs a product model".into()));
        };
        self.pullback(a, x.n)
    }

    fn pullback<C: Coefficient>(&self, a: &Form<C>, offset: usize) -> Result<Form<C>> {
        let ModelKind::Product(x, y) = &self.kind else {
            return Err(Error::Capability("pullback needs a product model".into()));
        };
        let factor_n = if offset == 0 { x.n } else { y.n };
        if a.n() != factor_n {
            return Err(Error::DimensionMismatch(factor_n, a.n()));
        }
        a.relabel(self.n, offset, |c| c.embed(self.n, offset))
    }
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..pos], &s[pos + 1..])),
            _ => {}
        }
    }
    None
}

impl fmt::Display for ManifoldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::Torus => write!(f, "torus{}", self.n),
            ModelKind::Nilmanifold(sc) => f.write_str(sc.name()),
            ModelKind::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// `ω_std = ∧_{j=1..n} (i dz_j ∧ dz̄_j)`.
pub fn omega_std<C: Coefficient>(n: usize) -> Result<Form<C>> {
    let mut out = Form::unit(n);
    for j in 1..=n {
        let idx = MultiIndex::single(j);
        out = out.wedge(&Form::basis(n, idx, idx, Complex64::new(0.0, 1.0))?)?;
    }
    Ok(out)
}

/// Stored coefficient of `ω_std` on `dz_{1..n} ∧ dz̄_{1..n}`: `i^n (-1)^{n(n-1)/2}`.
pub fn omega_std_coefficient(n: usize) -> Complex64 {
    let i_pow = Complex64::new(0.0, 1.0).powu(n as u32);
    if (n * (n - 1) / 2).is_multiple_of(2) {
        i_pow
    } else {
        -i_pow
    }
}

/// The scalar `f` with `a = f · ω_std` for an `(n,n)` form `a`.
pub fn density<C: Coefficient>(a: &Form<C>) -> Result<C> {
    let n = a.n();
    if a.bidegree() != Bidegree::new(n, n) {
        return Err(Error::Bidegree {
            expected: format!("({n},{n})"),
            found: a.bidegree().to_string(),
        });
    }
    let full = MultiIndex::full(n);
    Ok(match a.get(full, full) {
        Some(c) => c.scale(omega_std_coefficient(n).inv()),
        None => C::zero(n),
    })
}

#[cfg(test)]
mod tests;
