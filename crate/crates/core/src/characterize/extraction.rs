use num_complex::Complex64;

use crate::calculus::Frame;
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, MultiIndex};
use crate::fields::{Coefficient, PolyField};

fn subsets(n: usize, size: usize) -> impl Iterator<Item = MultiIndex> {
    (0u32..1 << n)
        .filter(move |b| b.count_ones() as usize == size)
        .map(MultiIndex::from_bits)
}

/// Recovers every coefficient of a `(p,p)` chart form `F` by wedging with
/// `∧_s i∂∂̄(z_{l_s} z̄_{m_s})` over the complementary index sets and reading
/// the top-degree coefficient.
pub fn theorem1_extraction(f: &Form<PolyField>) -> Result<Form<PolyField>> {
    let n = f.n();
    let Bidegree { p, q } = f.bidegree();
    if p != q {
        return Err(Error::Bidegree {
            expected: "(k+1,k+1)".into(),
            found: f.bidegree().to_string(),
        });
    }
    if p == 0 || p > n {
        return Err(Error::InvalidArgument(format!(
            "extraction needs 1 <= k+1 <= n, got k+1 = {p}, n = {n}"
        )));
    }
    let frame = Frame::Coordinate;
    let full = MultiIndex::full(n);
    let one = Complex64::new(1.0, 0.0);
    let mut terms = Vec::new();
    for i in subsets(n, p) {
        for j in subsets(n, p) {
            let mut e = Form::<PolyField>::unit(n);
            for (l, m) in i.complement(n).iter().zip(j.complement(n).iter()) {
                let zl_zbm = PolyField::z(n, l)?.try_mul(&PolyField::zbar(n, m)?)?;
                e = e.wedge(&frame.i_ddbar_complex(n, &zl_zbm)?)?;
            }
            let normalizer = Form::<PolyField>::basis(n, i, j, one)?
                .wedge(&e)?
                .get(full, full)
                .map(|c| c.eval(&vec![0.0; 2 * n]))
                .ok_or_else(|| {
                    Error::Numerical("elementary forms do not complete the index sets".into())
                })?;
            if let Some(c) = f.wedge(&e)?.get(full, full) {
                terms.push((i, j, c.scale(normalizer.inv())));
            }
        }
    }
    Form::from_terms(n, f.bidegree(), terms)
}
