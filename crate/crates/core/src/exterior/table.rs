use num_complex::Complex64;

use super::{sign_c, Form, MultiIndex};
use crate::error::{Error, Result};
use crate::fields::Coefficient;

/// Coefficient view of a form with lookup by arbitrary index tuples.
///
/// `lookup(σ(I), τ(J))` returns `sgn σ · sgn τ · a_{I,J}`; a tuple with a
/// repeated label reads as zero.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientTable<'a, C> {
    form: &'a Form<C>,
}

/// Sorts `labels`, returning the canonical index and the permutation sign, or
/// `None` on a repeated label.
pub(crate) fn sort_with_sign(n: usize, labels: &[usize]) -> Result<Option<(MultiIndex, i32)>> {
    for &j in labels {
        if j == 0 || j > n {
            return Err(Error::InvalidIndex {
                indices: labels.to_vec(),
                n,
            });
        }
    }
    let mut inversions = 0;
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            if labels[a] == labels[b] {
                return Ok(None);
            }
            if labels[a] > labels[b] {
                inversions += 1;
            }
        }
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    let idx = MultiIndex::new(n, &sorted)?;
    Ok(Some((idx, if inversions % 2 == 0 { 1 } else { -1 })))
}

impl<'a, C: Coefficient> CoefficientTable<'a, C> {
    pub fn new(form: &'a Form<C>) -> Self {
        CoefficientTable { form }
    }

    pub fn form(&self) -> &'a Form<C> {
        self.form
    }

    pub fn lookup(&self, i: &[usize], j: &[usize]) -> Result<C> {
        let n = self.form.n();
        let b = self.form.bidegree();
        if i.len() != b.p || j.len() != b.q {
            return Err(Error::Bidegree {
                expected: b.to_string(),
                found: format!("({},{})", i.len(), j.len()),
            });
        }
        let zero = C::zero(n);
        let (Some((ii, si)), Some((jj, sj))) = (sort_with_sign(n, i)?, sort_with_sign(n, j)?)
        else {
            return Ok(zero);
        };
        Ok(match self.form.get(ii, jj) {
            Some(c) => c.scale(sign_c(si * sj)),
            None => zero,
        })
    }

    /// Canonical entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (MultiIndex, MultiIndex, &'a C)> {
        self.form.terms()
    }

    /// For a `(1,1)` form `i Σ a_{jk̄} dz_j ∧ dz̄_k`, the entry `a_{jk̄}`.
    pub fn hermitian_entry(&self, j: usize, k: usize) -> Result<C> {
        Ok(self.lookup(&[j], &[k])?.scale(Complex64::new(0.0, -1.0)))
    }
}
