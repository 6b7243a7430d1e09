//! Dolbeault operators `∂`, `∂̄`, `d = ∂ + ∂̄` and `u ↦ i∂∂̄u`.
//!
//! In the coordinate frame the basis `dz_j, dz̄_j` is closed and all calculus
//! is coefficient differentiation. In an invariant coframe the coefficients
//! are constants and `d` acts on basis monomials through the stored
//! expansions of `dφ_m` (Leibniz with Koszul signs).
//!
//! The normalization is fixed by `i∂∂̄|z_1|² = i dz_1∧dz̄_1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{sign_c, Bidegree, Form, GradedForm, MultiIndex};
use crate::fields::{Axis, Coefficient, CoframeConstant};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exterior derivatives `dφ_m` of an invariant coframe `φ_1..φ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    name: String,
    dphi: Vec<GradedForm<CoframeConstant>>,
}

impl StructureConstants {
    /// Validates total degree 2 and `d² = 0` on every `φ_m` and `φ̄_m`.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        dphi: Vec<GradedForm<CoframeConstant>>,
    ) -> Result<Self> {
        if dphi.len() != n {
            return Err(Error::InvalidStructure(format!(
                "expected {n} differentials, got {}",
                dphi.len()
            )));
        }
        for (m, f) in dphi.iter().enumerate() {
            if f.n() != n {
                return Err(Error::DimensionMismatch(n, f.n()));
            }
            if f.parts().any(|p| p.degree() != 2) {
                return Err(Error::InvalidStructure(format!(
                    "dφ_{} is not a 2-form",
                    m + 1
                )));
            }
        }
        let sc = StructureConstants {
            n,
            name: name.into(),
            dphi,
        };
        for m in 1..=n {
            for conj in [false, true] {
                let d = sc.d_generator(m, conj);
                let dd = sc.d_graded(&d)?;
                if !dd.is_zero() {
                    let bar = if conj { "̄" } else { "" };
                    return Err(Error::InvalidStructure(format!(
                        "d² φ{bar}_{m} ≠ 0 (magnitude {:e})",
                        dd.magnitude()
                    )));
                }
            }
        }
        Ok(sc)
    }

    /// Iwasawa manifold: `dφ_1 = dφ_2 = 0`, `dφ_3 = −φ_1∧φ_2`.
    pub fn iwasawa() -> Self {
        let n = 3;
        let f12 = Form::basis(
            n,
            MultiIndex::new(n, &[1, 2]).unwrap(),
            MultiIndex::EMPTY,
            -Complex64::new(1.0, 0.0),
        )
        .expect("valid basis form");
        let dphi = vec![
            GradedForm::zero(n),
            GradedForm::zero(n),
            GradedForm::from(f12),
        ];
        Self::new("iwasawa", n, dphi).expect("Iwasawa structure equations satisfy d² = 0")
    }

    /// Flat torus seen through its coordinate coframe: every `dφ_m = 0`.
    pub fn abelian(n: usize) -> Self {
        StructureConstants {
            n,
            name: format!("abelian{n}"),
            dphi: vec![GradedForm::zero(n); n],
        }
    }

    pub fn from_literal(lit: &StructureLiteral) -> Result<Self> {
        let n = lit.n;
        if n == 0 || n > crate::MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut dphi = Vec::with_capacity(lit.dphi.len());
        for terms in &lit.dphi {
            let mut g = GradedForm::zero(n);
            for t in terms {
                let sorted_i = crate::exterior::sort_with_sign(n, &t.holo)?;
                let sorted_j = crate::exterior::sort_with_sign(n, &t.anti)?;
                let (Some((i, si)), Some((j, sj))) = (sorted_i, sorted_j) else {
                    continue;
                };
                let c = Complex64::new(t.c[0], t.c[1]) * (si * sj) as f64;
                g.add_form(Form::basis(n, i, j, c)?)?;
            }
            dphi.push(g);
        }
        Self::new(lit.name.clone().unwrap_or_else(|| "custom".into()), n, dphi)
    }

    /// Block-diagonal structure of a product, second factor relabelled after the first.
    pub fn product(&self, other: &StructureConstants) -> Result<Self> {
        let n = self.n + other.n;
        if n > crate::MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let lift = |g: &GradedForm<CoframeConstant>,
                    offset: usize|
         -> Result<GradedForm<CoframeConstant>> {
            let mut out = GradedForm::zero(n);
            for part in g.parts() {
                out.add_form(part.relabel(n, offset, |c| Ok(*c))?)?;
            }
            Ok(out)
        };
        let mut dphi = Vec::with_capacity(n);
        for g in &self.dphi {
            dphi.push(lift(g, 0)?);
        }
        for g in &other.dphi {
            dphi.push(lift(g, self.n)?);
        }
        Self::new(format!("{}x{}", self.name, other.name), n, dphi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dphi(&self, m: usize) -> &GradedForm<CoframeConstant> {
        &self.dphi[m - 1]
    }

    /// `dφ_m`, or `dφ̄_m = conj(dφ_m)`.
    fn d_generator(&self, m: usize, conj: bool) -> GradedForm<CoframeConstant> {
        if conj {
            self.dphi[m - 1].conjugate()
        } else {
            self.dphi[m - 1].clone()
        }
    }

    /// Full `d` of the basis monomial `φ_I ∧ φ̄_J` by the graded Leibniz rule.
    fn d_monomial(&self, i: MultiIndex, j: MultiIndex) -> Result<GradedForm<CoframeConstant>> {
        let n = self.n;
        let one = Complex64::new(1.0, 0.0);
        let factors: Vec<(usize, bool)> = i
            .iter()
            .map(|m| (m, false))
            .chain(j.iter().map(|m| (m, true)))
            .collect();
        let single = |&(m, conj): &(usize, bool)| -> Result<Form<CoframeConstant>> {
            let idx = MultiIndex::single(m);
            if conj {
                Form::basis(n, MultiIndex::EMPTY, idx, one)
            } else {
                Form::basis(n, idx, MultiIndex::EMPTY, one)
            }
        };
        let mut out = GradedForm::zero(n);
        for s in 0..factors.len() {
            let mut prefix = Form::unit(n);
            for f in &factors[..s] {
                prefix = prefix.wedge(&single(f)?)?;
            }
            let mut suffix = Form::unit(n);
            for f in &factors[s + 1..] {
                suffix = suffix.wedge(&single(f)?)?;
            }
            let (m, conj) = factors[s];
            let middle = self.d_generator(m, conj);
            let term = GradedForm::from(prefix)
                .wedge(&middle)?
                .wedge_form(&suffix)?;
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            out = out.try_add(&term.scale(Complex64::new(sign, 0.0)))?;
        }
        Ok(out)
    }

    /// Full `d` on a constant-coefficient graded form.
    fn d_graded(&self, a: &GradedForm<CoframeConstant>) -> Result<GradedForm<CoframeConstant>> {
        let mut out = GradedForm::zero(self.n);
        for part in a.parts() {
            for (i, j, c) in part.terms() {
                out = out.try_add(&self.d_monomial(i, j)?.scale(c.0))?;
            }
        }
        Ok(out)
    }
}

/// A user-supplied structure-constant table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureLiteral {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    /// `dphi[m-1]` lists the terms of `dφ_m`.
    pub dphi: Vec<Vec<StructureTerm>>,
}

/// `c · φ_holo ∧ φ̄_anti`, labels in any order (the permutation sign is applied).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureTerm {
    #[serde(default)]
    pub holo: Vec<usize>,
    #[serde(default)]
    pub anti: Vec<usize>,
    pub c: [f64; 2],
}

/// How `d` acts on the basis 1-forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Frame {
    /// Coordinate frame `dz_j`; coefficients carry all the variation.
    Coordinate,
    /// Invariant coframe with constant coefficients.
    Invariant(StructureConstants),
}

#[derive(Clone, Copy, PartialEq)]
enum Part {
    Del,
    Delbar,
}

impl Frame {
    pub fn del<C: Coefficient>(&self, a: &Form<C>) -> Result<Form<C>> {
        self.apply(a, Part::Del)
    }

    pub fn delbar<C: Coefficient>(&self, a: &Form<C>) -> Result<Form<C>> {
        self.apply(a, Part::Delbar)
    }

    /// `d a = ∂a + ∂̄a`.
    pub fn exterior_d<C: Coefficient>(&self, a: &Form<C>) -> Result<GradedForm<C>> {
        let mut out = GradedForm::from(self.del(a)?);
        out.add_form(self.delbar(a)?)?;
        Ok(out)
    }

    pub fn exterior_d_graded<C: Coefficient>(&self, a: &GradedForm<C>) -> Result<GradedForm<C>> {
        let mut out = GradedForm::zero(a.n());
        for part in a.parts() {
            out = out.try_add(&self.exterior_d(part)?)?;
        }
        Ok(out)
    }

    /// `i∂∂̄u` for a real scalar field.
    pub fn i_ddbar<C: Coefficient>(&self, n: usize, u: &C) -> Result<Form<C>> {
        if !u.is_real() {
            return Err(Error::NotReal("scalar field for i∂∂̄"));
        }
        self.i_ddbar_complex(n, u)
    }

    /// `i∂∂̄u` without the reality requirement (chart test functions like `z_l z̄_m`).
    pub fn i_ddbar_complex<C: Coefficient>(&self, n: usize, u: &C) -> Result<Form<C>> {
        let f = Form::scalar(n, u.clone())?;
        Ok(self.del(&self.delbar(&f)?)?.scale(I))
    }

    fn apply<C: Coefficient>(&self, a: &Form<C>, part: Part) -> Result<Form<C>> {
        let n = a.n();
        let b = a.bidegree();
        let target = match part {
            Part::Del => Bidegree::new(b.p + 1, b.q),
            Part::Delbar => Bidegree::new(b.p, b.q + 1),
        };
        match self {
            Frame::Coordinate => {
                let mut terms = Vec::new();
                for (i, j, c) in a.terms() {
                    for k in 1..=n {
                        let (axis, idx) = match part {
                            Part::Del => (Axis::Z(k), i),
                            Part::Delbar => (Axis::ZBar(k), j),
                        };
                        let Some((merged, s)) = MultiIndex::single(k).merge_sign(idx) else {
                            continue;
                        };
                        let dc = c.deriv(axis)?;
                        if dc.is_zero() {
                            continue;
                        }
                        // dz̄_k must hop over the p holomorphic factors
                        let hop = if part == Part::Delbar && b.p % 2 == 1 {
                            -1
                        } else {
                            1
                        };
                        let dc = dc.scale(sign_c(s * hop));
                        match part {
                            Part::Del => terms.push((merged, j, dc)),
                            Part::Delbar => terms.push((i, merged, dc)),
                        }
                    }
                }
                Form::from_terms(n, target, terms)
            }
            Frame::Invariant(sc) => {
                if C::BACKEND.is_position_dependent() {
                    return Err(Error::Capability(format!(
                        "invariant coframe calculus needs constant coefficients, got {} backend",
                        C::BACKEND
                    )));
                }
                if sc.n() != n {
                    return Err(Error::DimensionMismatch(sc.n(), n));
                }
                let mut out = Form::zero(n, target);
                for (i, j, c) in a.terms() {
                    let dm = sc.d_monomial(i, j)?.component(target);
                    let lifted = dm.relabel(n, 0, |k| Ok(c.scale(k.0)))?;
                    out = out.try_add(&lifted)?;
                }
                Ok(out)
            }
        }
    }
}
