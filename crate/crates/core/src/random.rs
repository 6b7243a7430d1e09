//! Seeded generators for fields, forms and metrics.
//!
//! Exact backends get Gaussian-integer data so that identity checks can
//! demand a zero residual.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::exterior::{Bidegree, Form, MultiIndex};
use crate::fields::{Coefficient, CoframeConstant, FourierField, PolyField};
use crate::manifolds::hermitian_form;

fn random_freq<R: Rng>(rng: &mut R, n: usize, band: u32) -> Vec<i32> {
    let b = band as i32;
    loop {
        let k: Vec<i32> = (0..2 * n).map(|_| rng.gen_range(-b..=b)).collect();
        if k.iter().any(|&v| v != 0) {
            return k;
        }
    }
}

fn random_amp<R: Rng>(rng: &mut R, amp: f64) -> Complex64 {
    let r = amp * rng.gen_range(0.2..1.0);
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Real field with `pairs` conjugate mode pairs, band `band`, each amplitude at most `amp`.
pub fn random_real_fourier<R: Rng>(
    rng: &mut R,
    n: usize,
    band: u32,
    pairs: usize,
    amp: f64,
) -> FourierField {
    let mut modes = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        let k = random_freq(rng, n, band);
        let a = random_amp(rng, amp) * 0.5;
        let neg: Vec<i32> = k.iter().map(|v| -v).collect();
        modes.push((k, a));
        modes.push((neg, a.conj()));
    }
    FourierField::real_from_modes(n, modes).expect("conjugate-symmetric by construction")
}

/// Complex field with `count` random modes (zero mode allowed).
pub fn random_fourier<R: Rng>(
    rng: &mut R,
    n: usize,
    band: u32,
    count: usize,
    amp: f64,
) -> FourierField {
    let b = band as i32;
    let modes: Vec<_> = (0..count)
        .map(|_| {
            (
                (0..2 * n).map(|_| rng.gen_range(-b..=b)).collect(),
                random_amp(rng, amp),
            )
        })
        .collect();
    FourierField::from_modes(n, modes).expect("within default cap")
}

fn gaussian_int<R: Rng>(rng: &mut R, range: i32) -> Complex64 {
    loop {
        let c = Complex64::new(
            rng.gen_range(-range..=range) as f64,
            rng.gen_range(-range..=range) as f64,
        );
        if c != Complex64::new(0.0, 0.0) {
            return c;
        }
    }
}

/// Polynomial with `terms` random monomials of total degree at most `max_degree`
/// and Gaussian-integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_degree: u16, terms: usize) -> PolyField {
    let mut out = PolyField::new_zero(n);
    for _ in 0..terms {
        let mut exps = vec![0u16; 2 * n];
        let deg = rng.gen_range(0..=max_degree);
        for _ in 0..deg {
            let slot = rng.gen_range(0..2 * n);
            exps[slot] += 1;
        }
        let c = gaussian_int(rng, 3);
        let m = PolyField::monomial(n, &exps[..n], &exps[n..], c).expect("valid exponents");
        out = out.try_add(&m).expect("same dimension");
    }
    out
}

pub fn random_constant<R: Rng>(rng: &mut R) -> CoframeConstant {
    CoframeConstant(gaussian_int(rng, 3))
}

fn random_index<R: Rng>(rng: &mut R, n: usize, len: usize) -> MultiIndex {
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut chosen = labels[..len].to_vec();
    chosen.sort_unstable();
    MultiIndex::new(n, &chosen).expect("sorted distinct labels")
}

/// Sparse `(p,q)` form with up to `terms` entries from `coeff`.
pub fn random_form<C, R, F>(
    rng: &mut R,
    n: usize,
    bidegree: Bidegree,
    terms: usize,
    mut coeff: F,
) -> Form<C>
where
    C: Coefficient,
    R: Rng,
    F: FnMut(&mut R) -> C,
{
    if bidegree.p > n || bidegree.q > n {
        return Form::zero(n, bidegree);
    }
    let entries: Vec<_> = (0..terms)
        .map(|_| {
            let i = random_index(rng, n, bidegree.p);
            let j = random_index(rng, n, bidegree.q);
            (i, j, coeff(rng))
        })
        .collect();
    Form::from_terms(n, bidegree, entries).expect("valid random terms")
}

/// A real `(1,1)` form `i Σ a_{jk̄} dz_j∧dz̄_k` whose matrix is `I + H(x)` with
/// `H` Hermitian, every entry of sup-norm at most `amp`. For `amp · n < 1` the
/// matrix is positive definite everywhere (Gershgorin).
pub fn random_metric_form<R: Rng>(
    rng: &mut R,
    n: usize,
    band: u32,
    pairs: usize,
    amp: f64,
) -> Result<Form<FourierField>> {
    let mut entries = vec![vec![FourierField::new_zero(n); n]; n];
    for j in 0..n {
        let h = random_real_fourier(rng, n, band, pairs, amp / pairs.max(1) as f64);
        entries[j][j] = FourierField::constant(n, Complex64::new(1.0, 0.0)).try_add(&h)?;
        for k in j + 1..n {
            let f = random_fourier(rng, n, band, pairs, amp / pairs.max(1) as f64);
            entries[k][j] = f.conj();
            entries[j][k] = f;
        }
    }
    hermitian_form(n, |j, k| Ok(entries[j - 1][k - 1].clone()))
}

/// Real `(1,1)` polynomial form with Gaussian-integer entries (no positivity).
pub fn random_poly_metric_form<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: u16,
    terms: usize,
) -> Result<Form<PolyField>> {
    let mut entries = vec![vec![PolyField::new_zero(n); n]; n];
    for j in 0..n {
        let d = random_poly(rng, n, max_degree, terms);
        entries[j][j] = d
            .real_part()
            .try_add(&PolyField::constant(n, Complex64::new(4.0, 0.0)))?;
        for k in j + 1..n {
            let f = random_poly(rng, n, max_degree, terms);
            entries[k][j] = f.conj();
            entries[j][k] = f;
        }
    }
    hermitian_form(n, |j, k| Ok(entries[j - 1][k - 1].clone()))
}

/// Constant Hermitian positive definite matrix with integer data (diagonally dominant).
pub fn random_constant_metric_form<R: Rng>(rng: &mut R, n: usize) -> Result<Form<CoframeConstant>> {
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        entries[j][j] = Complex64::new(rng.gen_range(2 * n..=3 * n) as f64, 0.0);
        for k in j + 1..n {
            let c = Complex64::new(rng.gen_range(-1..=1) as f64, rng.gen_range(-1..=1) as f64);
            entries[j][k] = c;
            entries[k][j] = c.conj();
        }
    }
    hermitian_form(n, |j, k| Ok(CoframeConstant(entries[j - 1][k - 1])))
}
