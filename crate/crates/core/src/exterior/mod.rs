//! Exterior algebra of `(p,q)`-forms in `n` complex dimensions.
//!
//! A [`Form`] stores `Σ a_{I,J} dz_I ∧ dz̄_J` as a sparse map keyed on pairs of
//! strictly increasing multi-indices. Within every basis monomial all `dz`
//! factors come first, then all `dz̄` factors, each block ascending. Every sign
//! in the crate follows from this one ordering.

mod graded;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::Coefficient;
use crate::MAX_DIM;

pub use graded::GradedForm;
pub(crate) use table::sort_with_sign;
pub use table::CoefficientTable;

/// A strictly increasing set of axis labels in `1..=n`, stored as a bitmask
/// (bit `j-1` set iff `j` is present).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Validates a strictly increasing list of labels in `1..=n`.
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        let bad = || Error::InvalidIndex {
            indices: indices.to_vec(),
            n,
        };
        let mut bits = 0u32;
        let mut prev = 0usize;
        for &j in indices {
            if j == 0 || j > n || j > MAX_DIM || j <= prev {
                return Err(bad());
            }
            bits |= 1 << (j - 1);
            prev = j;
        }
        Ok(MultiIndex(bits))
    }

    pub fn single(j: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&j));
        MultiIndex(1 << (j - 1))
    }

    pub fn full(n: usize) -> Self {
        MultiIndex((1u32 << n) - 1)
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        j >= 1 && self.0 & (1 << (j - 1)) != 0
    }

    pub fn complement(self, n: usize) -> Self {
        MultiIndex(!self.0 & ((1u32 << n) - 1))
    }

    /// Labels in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_DIM).filter(move |&j| self.contains(j))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn max_label(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Shifts every label up by `offset`.
    pub fn shifted(self, offset: usize) -> Self {
        MultiIndex(self.0 << offset)
    }

    /// Sign of sorting the concatenation `self ++ other` into increasing order,
    /// or `None` if the two share a label.
    pub fn merge_sign(self, other: MultiIndex) -> Option<(MultiIndex, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for k in other.iter() {
            // elements of self that are larger than k must hop over it
            inversions += (self.0 >> k).count_ones();
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 | other.0), sign))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Self {
        Bidegree { p, q }
    }

    pub fn total(self) -> usize {
        self.p + self.q
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

pub(crate) fn sign_c(s: i32) -> Complex64 {
    Complex64::new(s as f64, 0.0)
}

/// A homogeneous `(p,q)`-form with coefficients in backend `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<C> {
    n: usize,
    bidegree: Bidegree,
    terms: BTreeMap<(MultiIndex, MultiIndex), C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(n: usize, bidegree: Bidegree) -> Self {
        Form {
            n,
            bidegree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn scalar(n: usize, f: C) -> Result<Self> {
        Self::from_terms(
            n,
            Bidegree::new(0, 0),
            [(MultiIndex::EMPTY, MultiIndex::EMPTY, f)],
        )
    }

    /// The constant 0-form 1.
    pub fn unit(n: usize) -> Self {
        Self::scalar(n, C::constant(n, Complex64::new(1.0, 0.0)))
            .expect("constant has no dimension")
    }

    /// `c · dz_I ∧ dz̄_J` with constant coefficient.
    pub fn basis(n: usize, i: MultiIndex, j: MultiIndex, c: Complex64) -> Result<Self> {
        Self::from_terms(
            n,
            Bidegree::new(i.len(), j.len()),
            [(i, j, C::constant(n, c))],
        )
    }

    pub fn dz(n: usize, j: usize) -> Result<Self> {
        let i = MultiIndex::new(n, &[j])?;
        Self::basis(n, i, MultiIndex::EMPTY, Complex64::new(1.0, 0.0))
    }

    pub fn dzbar(n: usize, j: usize) -> Result<Self> {
        let jj = MultiIndex::new(n, &[j])?;
        Self::basis(n, MultiIndex::EMPTY, jj, Complex64::new(1.0, 0.0))
    }

    /// Accumulates terms keyed on canonical multi-indices.
    pub fn from_terms<I>(n: usize, bidegree: Bidegree, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, C)>,
    {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut form = Form::zero(n, bidegree);
        for (i, j, c) in terms {
            if i.len() != bidegree.p
                || j.len() != bidegree.q
                || i.max_label() > n
                || j.max_label() > n
            {
                return Err(Error::InvalidIndex {
                    indices: [i.to_vec(), j.to_vec()].concat(),
                    n,
                });
            }
            form.check_coeff(&c)?;
            form.accumulate((i, j), c)?;
        }
        form.canonicalize();
        Ok(form)
    }

    fn check_coeff(&self, c: &C) -> Result<()> {
        match c.dim() {
            Some(m) if m != self.n => Err(Error::DimensionMismatch(self.n, m)),
            _ => Ok(()),
        }
    }

    fn accumulate(&mut self, key: (MultiIndex, MultiIndex), c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&key) {
            Some(existing) => *existing = existing.try_add(&c)?,
            None => {
                self.terms.insert(key, c);
            }
        }
        Ok(())
    }

    /// Drops zero coefficients and, for inexact backends, floating-point dust
    /// below `PRUNE_REL` times the largest term.
    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if C::PRUNE_REL > 0.0 {
            let max = self.magnitude();
            let floor = C::PRUNE_REL * max;
            self.terms.retain(|_, c| c.magnitude() >= floor);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn degree(&self) -> usize {
        self.bidegree.total()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, MultiIndex, &C)> {
        self.terms.iter().map(|((i, j), c)| (*i, *j, c))
    }

    /// Stored coefficient for canonical indices (no sign adjustment).
    pub fn get(&self, i: MultiIndex, j: MultiIndex) -> Option<&C> {
        self.terms.get(&(i, j))
    }

    pub fn table(&self) -> CoefficientTable<'_, C> {
        CoefficientTable::new(self)
    }

    /// Largest coefficient magnitude; the defect measure used throughout.
    pub fn magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Max coefficient distance to `other`, which must share `n` and bidegree.
    pub fn residual(&self, other: &Form<C>) -> Result<f64> {
        self.check_compatible(other)?;
        let mut d: f64 = 0.0;
        for (k, c) in &self.terms {
            d = d.max(match other.terms.get(k) {
                Some(o) => c.distance(o),
                None => c.magnitude_max(),
            });
        }
        for (k, o) in &other.terms {
            if !self.terms.contains_key(k) {
                d = d.max(o.magnitude_max());
            }
        }
        Ok(d)
    }

    fn check_compatible(&self, other: &Form<C>) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.bidegree != other.bidegree && !(self.is_zero() && other.is_zero()) {
            return Err(Error::Bidegree {
                expected: self.bidegree.to_string(),
                found: other.bidegree.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form<C>) -> Result<Form<C>> {
        if self.bidegree != other.bidegree {
            if other.is_zero() && self.n == other.n {
                return Ok(self.clone());
            }
            if self.is_zero() && self.n == other.n {
                return Ok(other.clone());
            }
        }
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone())?;
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form<C>) -> Result<Form<C>> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Form<C> {
        let mut out = Form::zero(self.n, self.bidegree);
        for (k, v) in &self.terms {
            out.terms.insert(*k, v.scale(c));
        }
        out.canonicalize();
        out
    }

    /// Multiplies every coefficient by the scalar field `f`.
    pub fn mul_field(&self, f: &C) -> Result<Form<C>> {
        self.check_coeff(f)?;
        let mut out = Form::zero(self.n, self.bidegree);
        for (k, v) in &self.terms {
            out.terms.insert(*k, v.try_mul(f)?);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Applies `op` to every coefficient, keeping keys.
    pub fn map_coefficients<F>(&self, mut op: F) -> Result<Form<C>>
    where
        F: FnMut(&C) -> Result<C>,
    {
        let mut out = Form::zero(self.n, self.bidegree);
        for (k, v) in &self.terms {
            out.terms.insert(*k, op(v)?);
        }
        out.canonicalize();
        Ok(out)
    }

    /// `a ∧ b` in the dz-before-dz̄ convention.
    ///
    /// For `dz_I dz̄_J ∧ dz_K dz̄_L` the `dz_K` block hops over `dz̄_J`
    /// (sign `(-1)^{|J||K|}`), then `I ∪ K` and `J ∪ L` are merged with their
    /// own sorting signs.
    pub fn wedge(&self, other: &Form<C>) -> Result<Form<C>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let bidegree = Bidegree::new(
            self.bidegree.p + other.bidegree.p,
            self.bidegree.q + other.bidegree.q,
        );
        let mut out = Form::zero(self.n, bidegree);
        if bidegree.p > self.n || bidegree.q > self.n {
            return Ok(out);
        }
        let hop = if (self.bidegree.q * other.bidegree.p).is_multiple_of(2) {
            1
        } else {
            -1
        };
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &other.terms {
                let Some((ik, s1)) = i.merge_sign(*k) else {
                    continue;
                };
                let Some((jl, s2)) = j.merge_sign(*l) else {
                    continue;
                };
                let c = a.try_mul(b)?.scale(sign_c(hop * s1 * s2));
                out.accumulate((ik, jl), c)?;
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// Complex conjugation: `a dz_I ∧ dz̄_J ↦ conj(a) (-1)^{|I||J|} dz_J ∧ dz̄_I`.
    pub fn conjugate(&self) -> Form<C> {
        let bidegree = Bidegree::new(self.bidegree.q, self.bidegree.p);
        let s = if (self.bidegree.p * self.bidegree.q).is_multiple_of(2) {
            1
        } else {
            -1
        };
        let mut out = Form::zero(self.n, bidegree);
        for ((i, j), a) in &self.terms {
            out.terms.insert((*j, *i), a.conj().scale(sign_c(s)));
        }
        out
    }

    /// Whether `conjugate(a) = a`; exact for exact backends, relative `1e-13`
    /// for Fourier fields.
    pub fn is_real(&self) -> Result<bool> {
        if self.bidegree.p != self.bidegree.q {
            return Err(Error::Bidegree {
                expected: "(p,p)".into(),
                found: self.bidegree.to_string(),
            });
        }
        let r = self.conjugate().residual(self)?;
        Ok(r <= equality_tolerance::<C>() * self.magnitude())
    }

    /// `k`-fold wedge power; `power(a, 0)` is the unit 0-form.
    pub fn power(&self, k: usize) -> Result<Form<C>> {
        if k >= 2 && self.degree() % 2 == 1 {
            return Err(Error::InvalidArgument(
                "wedge power of an odd-degree form with k >= 2".into(),
            ));
        }
        let mut out = Form::unit(self.n);
        for _ in 0..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Re-expresses the form on a larger space, shifting labels by `offset`
    /// and transforming coefficients with `lift`.
    pub fn relabel<D, F>(&self, n_total: usize, offset: usize, mut lift: F) -> Result<Form<D>>
    where
        D: Coefficient,
        F: FnMut(&C) -> Result<D>,
    {
        let terms = self
            .terms
            .iter()
            .map(|((i, j), c)| Ok((i.shifted(offset), j.shifted(offset), lift(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::from_terms(n_total, self.bidegree, terms)
    }
}

/// Relative tolerance for structural equality of floating backends.
pub fn equality_tolerance<C: Coefficient>() -> f64 {
    if C::BACKEND.is_exact() {
        0.0
    } else {
        1e-13
    }
}

trait MagnitudeMax {
    fn magnitude_max(&self) -> f64;
}

impl<C: Coefficient> MagnitudeMax for C {
    fn magnitude_max(&self) -> f64 {
        self.distance(&C::zero(self.dim().unwrap_or(1)))
    }
}

#[cfg(test)]
mod tests;
