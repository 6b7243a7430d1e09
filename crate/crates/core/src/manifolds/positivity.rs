use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{omega_std_coefficient, ManifoldModel};
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, MultiIndex};
use crate::fields::Coefficient;

/// `psd_tol = PSD_TOL_REL × pointwise trace norm`.
pub const PSD_TOL_REL: f64 = 1e-10;

/// Deterministic grid plus seeded random points on `[0,1)^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    pub grid: usize,
    pub random: usize,
    pub seed: u64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            grid: 5,
            random: 256,
            seed: 0x5eed,
        }
    }
}

impl SamplingSpec {
    pub fn points(&self, n: usize) -> Vec<Vec<f64>> {
        let axes = 2 * n;
        let total = self.grid.pow(axes as u32);
        let mut pts = Vec::with_capacity(total + self.random);
        for idx in 0..total {
            let mut rem = idx;
            let mut x = vec![0.0; axes];
            for xa in x.iter_mut() {
                *xa = (rem % self.grid) as f64 / self.grid as f64;
                rem /= self.grid;
            }
            pts.push(x);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            pts.push((0..axes).map(|_| rng.gen_range(0.0..1.0)).collect());
        }
        pts
    }

    /// Constant-coefficient backends need a single point.
    pub fn points_for<C: Coefficient>(&self, n: usize) -> Vec<Vec<f64>> {
        if C::BACKEND.is_position_dependent() {
            self.points(n)
        } else {
            vec![vec![0.0; 2 * n]]
        }
    }
}

/// Matrix `a_{jk̄}` of a `(1,1)` form `i Σ a_{jk̄} dz_j∧dz̄_k` at a point, Hermitian-symmetrized.
pub fn hermitian_matrix_at<C: Coefficient>(a: &Form<C>, x: &[f64]) -> Result<DMatrix<Complex64>> {
    let n = a.n();
    if a.bidegree() != Bidegree::new(1, 1) {
        return Err(Error::Bidegree {
            expected: "(1,1)".into(),
            found: a.bidegree().to_string(),
        });
    }
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (i, j, c) in a.terms() {
        let row = i.iter().next().expect("degree 1") - 1;
        let col = j.iter().next().expect("degree 1") - 1;
        m[(row, col)] = c.eval(x) * Complex64::new(0.0, -1.0);
    }
    Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

pub(crate) fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

pub(crate) fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub semi_positive: bool,
    pub min_eigenvalue: f64,
    pub worst_point: Vec<f64>,
    pub points: usize,
}

/// Sampled test of `a ≥ 0` for a real `(1,1)` form.
///
/// The tolerance at each point is `PSD_TOL_REL · max(Σ|λ|, scale_floor)`.
pub fn is_positive_11<C: Coefficient>(
    a: &Form<C>,
    model: &ManifoldModel,
    spec: &SamplingSpec,
    scale_floor: f64,
) -> Result<PositivityReport> {
    if a.n() != model.n() {
        return Err(Error::DimensionMismatch(model.n(), a.n()));
    }
    if a.bidegree() != Bidegree::new(1, 1) {
        return Err(Error::Bidegree {
            expected: "(1,1)".into(),
            found: a.bidegree().to_string(),
        });
    }
    if !a.is_real()? {
        return Err(Error::NotReal("(1,1)-form for positivity test"));
    }
    let points = spec.points_for::<C>(a.n());
    let per_point: Vec<(f64, bool)> = points
        .par_iter()
        .map(|x| {
            let m = hermitian_matrix_at(a, x).expect("bidegree checked");
            let ev = eigenvalues(&m);
            let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
            let trace_norm: f64 = ev.iter().map(|v| v.abs()).sum();
            let tol = PSD_TOL_REL * trace_norm.max(scale_floor);
            (min, min >= -tol)
        })
        .collect();
    let mut report = PositivityReport {
        semi_positive: true,
        min_eigenvalue: f64::INFINITY,
        worst_point: Vec::new(),
        points: points.len(),
    };
    for (x, (min, ok)) in points.iter().zip(per_point) {
        report.semi_positive &= ok;
        if min < report.min_eigenvalue {
            report.min_eigenvalue = min;
            report.worst_point = x.clone();
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakPositivityReport {
    pub weakly_positive: bool,
    pub worst_pairing: f64,
    pub worst_trial: usize,
    pub worst_point: Vec<f64>,
    pub trials: usize,
    pub points: usize,
    /// Acceptance is statistical: no negative pairing was found among the trials.
    pub statistical: bool,
}

/// Random simple positive form `∧_s (i σ_s ∧ σ̄_s)` with `m` factors.
fn simple_positive_form<C: Coefficient, R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<Form<C>> {
    let mut out = Form::unit(n);
    for _ in 0..m {
        let terms: Vec<_> = (1..=n)
            .map(|j| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (MultiIndex::single(j), MultiIndex::EMPTY, C::constant(n, c))
            })
            .collect();
        let sigma = Form::from_terms(n, Bidegree::new(1, 0), terms)?;
        let factor = sigma
            .wedge(&sigma.conjugate())?
            .scale(Complex64::new(0.0, 1.0));
        out = out.wedge(&factor)?;
    }
    Ok(out)
}

/// Randomized weak-positivity test of a real `(k,k)` form.
///
/// Each trial pairs `a` with a seeded simple positive `(n-k,n-k)` form and
/// reads the density against `ω_std` at every sample point. A negative pairing
/// is a certificate of non-positivity; passing all trials is only evidence.
pub fn is_weakly_positive_kk<C: Coefficient>(
    a: &Form<C>,
    model: &ManifoldModel,
    trials: usize,
    seed: u64,
    spec: &SamplingSpec,
    scale_floor: f64,
) -> Result<WeakPositivityReport> {
    let n = a.n();
    if n != model.n() {
        return Err(Error::DimensionMismatch(model.n(), n));
    }
    let k = a.bidegree().p;
    if a.bidegree().q != k {
        return Err(Error::Bidegree {
            expected: "(k,k)".into(),
            found: a.bidegree().to_string(),
        });
    }
    if !a.is_real()? {
        return Err(Error::NotReal("(k,k)-form for weak positivity test"));
    }
    let trials = if k == n { 1 } else { trials.max(1) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<(MultiIndex, MultiIndex)> = a.terms().map(|(i, j, _)| (i, j)).collect();
    let full = MultiIndex::full(n);
    let inv = omega_std_coefficient(n).inv();
    // weights[t][key] = density of (dz_I∧dz̄_J) ∧ P_t
    let mut weights = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p: Form<C> = simple_positive_form(&mut rng, n, n - k)?;
        let mut w = Vec::with_capacity(keys.len());
        for &(i, j) in &keys {
            let unit = Form::<C>::basis(n, i, j, Complex64::new(1.0, 0.0))?;
            let top = unit.wedge(&p)?;
            let c = top
                .get(full, full)
                .map(|c| c.eval(&vec![0.0; 2 * n]))
                .unwrap_or_default();
            w.push(c * inv);
        }
        weights.push(w);
    }
    let coeffs: Vec<&C> = a.terms().map(|(_, _, c)| c).collect();
    let points = spec.points_for::<C>(n);
    let per_point: Vec<(f64, usize, bool)> = points
        .par_iter()
        .map(|x| {
            let vals: Vec<Complex64> = coeffs.iter().map(|c| c.eval(x)).collect();
            let mut worst = (f64::INFINITY, 0, true);
            for (t, w) in weights.iter().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                let mut abs = 0.0;
                for (v, wk) in vals.iter().zip(w) {
                    let term = v * wk;
                    s += term;
                    abs += term.norm();
                }
                let ok = s.re >= -PSD_TOL_REL * abs.max(scale_floor);
                if s.re < worst.0 {
                    worst = (s.re, t, worst.2 && ok);
                } else {
                    worst.2 &= ok;
                }
            }
            worst
        })
        .collect();
    let mut report = WeakPositivityReport {
        weakly_positive: true,
        worst_pairing: f64::INFINITY,
        worst_trial: 0,
        worst_point: Vec::new(),
        trials,
        points: points.len(),
        statistical: k != n,
    };
    for (x, (v, t, ok)) in points.iter().zip(per_point) {
        report.weakly_positive &= ok;
        if v < report.worst_pairing {
            report.worst_pairing = v;
            report.worst_trial = t;
            report.worst_point = x.clone();
        }
    }
    if keys.is_empty() {
        report.worst_pairing = 0.0;
    }
    Ok(report)
}
