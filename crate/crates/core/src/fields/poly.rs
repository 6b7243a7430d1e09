use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{check_axis, Axis, Backend, Coefficient};
use crate::error::{Error, Result};
use crate::{MAX_AXES, MAX_DIM};

/// Exponents of `z_1..z_MAX` in slots `0..MAX_DIM` and of `z̄_1..` in `MAX_DIM..`.
pub type Monomial = [u16; MAX_AXES];

/// Polynomial in `z, z̄` on a single chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl PolyField {
    pub fn new_zero(n: usize) -> Self {
        PolyField {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `c · z^a z̄^b` with exponent slices of length `n`.
    pub fn monomial(n: usize, z_exp: &[u16], zbar_exp: &[u16], c: Complex64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if z_exp.len() != n || zbar_exp.len() != n {
            return Err(Error::InvalidArgument(
                "exponent vector length must equal n".into(),
            ));
        }
        let mut m = [0; MAX_AXES];
        m[..n].copy_from_slice(z_exp);
        m[MAX_DIM..MAX_DIM + n].copy_from_slice(zbar_exp);
        let mut p = PolyField::new_zero(n);
        if c != Complex64::new(0.0, 0.0) {
            p.terms.insert(m, c);
        }
        Ok(p)
    }

    /// Terms given as `(exponents of length 2n: z then z̄, coefficient)`.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, Complex64)>,
    {
        let mut p = PolyField::new_zero(n);
        for (e, c) in terms {
            if e.len() != 2 * n {
                return Err(Error::InvalidArgument(
                    "exponent vector length must equal 2n".into(),
                ));
            }
            let q = PolyField::monomial(n, &e[..n], &e[n..], c)?;
            p = p.try_add(&q)?;
        }
        Ok(p)
    }

    pub fn z(n: usize, j: usize) -> Result<Self> {
        check_axis(Axis::Z(j), n)?;
        let mut e = vec![0; n];
        e[j - 1] = 1;
        PolyField::monomial(n, &e, &vec![0; n], Complex64::new(1.0, 0.0))
    }

    pub fn zbar(n: usize, j: usize) -> Result<Self> {
        check_axis(Axis::ZBar(j), n)?;
        let mut e = vec![0; n];
        e[j - 1] = 1;
        PolyField::monomial(n, &vec![0; n], &e, Complex64::new(1.0, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }
}

fn swap_bars(m: &Monomial) -> Monomial {
    let mut out = [0; MAX_AXES];
    out[..MAX_DIM].copy_from_slice(&m[MAX_DIM..]);
    out[MAX_DIM..].copy_from_slice(&m[..MAX_DIM]);
    out
}

impl Coefficient for PolyField {
    const BACKEND: Backend = Backend::Poly;

    fn constant(n: usize, value: Complex64) -> Self {
        let mut p = PolyField::new_zero(n);
        if value != Complex64::new(0.0, 0.0) {
            p.terms.insert([0; MAX_AXES], value);
        }
        p
    }

    fn dim(&self) -> Option<usize> {
        Some(self.n)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(*m).or_default() += c;
        }
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(PolyField { n: self.n, terms })
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for (a, b) in m.iter_mut().zip(m2.iter()) {
                    *a += b;
                }
                *terms.entry(m).or_default() += c1 * c2;
            }
        }
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(PolyField { n: self.n, terms })
    }

    fn scale(&self, c: Complex64) -> Self {
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        PolyField { n: self.n, terms }
    }

    fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (swap_bars(m), c.conj()))
            .collect();
        PolyField { n: self.n, terms }
    }

    fn deriv(&self, axis: Axis) -> Result<Self> {
        check_axis(axis, self.n)?;
        let slot = match axis {
            Axis::Z(j) => j - 1,
            Axis::ZBar(j) => MAX_DIM + j - 1,
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[slot];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[slot] -= 1;
            *terms.entry(m2).or_insert(Complex64::new(0.0, 0.0)) += c * e as f64;
        }
        Ok(PolyField { n: self.n, terms })
    }

    fn mean(&self) -> Result<Complex64> {
        Err(Error::NotIntegrable)
    }

    fn eval(&self, point: &[f64]) -> Complex64 {
        let zs: Vec<Complex64> = (0..self.n)
            .map(|j| Complex64::new(point[2 * j], point[2 * j + 1]))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = *c;
                for j in 0..self.n {
                    v *= zs[j].powu(m[j] as u32) * zs[j].conj().powu(m[MAX_DIM + j] as u32);
                }
                v
            })
            .sum()
    }

    fn is_real(&self) -> bool {
        self.conj() == *self
    }

    fn real_part(&self) -> Self {
        self.try_add(&self.conj())
            .expect("same dimension")
            .scale(Complex64::new(0.5, 0.0))
    }

    fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (m, a) in &self.terms {
            let b = other.terms.get(m).copied().unwrap_or_default();
            d = d.max((a - b).norm());
        }
        for (m, b) in &other.terms {
            if !self.terms.contains_key(m) {
                d = d.max(b.norm());
            }
        }
        d
    }

    fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        if n_total > MAX_DIM || offset + self.n > n_total {
            return Err(Error::DimensionMismatch(offset + self.n, n_total));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = [0; MAX_AXES];
                out[offset..offset + self.n].copy_from_slice(&m[..self.n]);
                out[MAX_DIM + offset..MAX_DIM + offset + self.n]
                    .copy_from_slice(&m[MAX_DIM..MAX_DIM + self.n]);
                (out, *c)
            })
            .collect();
        Ok(PolyField { n: n_total, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wirtinger_on_modulus_squared() {
        let u = PolyField::z(2, 1)
            .unwrap()
            .try_mul(&PolyField::zbar(2, 1).unwrap())
            .unwrap();
        let du = u.deriv(Axis::Z(1)).unwrap();
        assert_eq!(du, PolyField::zbar(2, 1).unwrap());
        let ddu = du.deriv(Axis::ZBar(1)).unwrap();
        assert_eq!(ddu, PolyField::constant(2, Complex64::new(1.0, 0.0)));
        assert!(u.is_real());
    }

    #[test]
    fn poly_not_integrable() {
        assert_eq!(
            PolyField::z(1, 1).unwrap().mean(),
            Err(Error::NotIntegrable)
        );
    }

    #[test]
    fn conj_swaps_variables() {
        let p = PolyField::monomial(2, &[2, 0], &[0, 1], Complex64::new(1.0, 2.0)).unwrap();
        let q = PolyField::monomial(2, &[0, 1], &[2, 0], Complex64::new(1.0, -2.0)).unwrap();
        assert_eq!(p.conj(), q);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn eval_matches_hand_value() {
        // z1 * conj(z1) at z1 = 3 + 4i is 25
        let u = PolyField::z(1, 1)
            .unwrap()
            .try_mul(&PolyField::zbar(1, 1).unwrap())
            .unwrap();
        assert_eq!(u.eval(&[3.0, 4.0]), Complex64::new(25.0, 0.0));
    }
}
