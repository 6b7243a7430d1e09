use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::comparison::grid_values;
use super::*;
use crate::manifolds::{hermitian_form, ManifoldModel};
use crate::random::{random_metric_form, random_real_fourier};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn flat(n: usize) -> HermitianMetric<FourierField> {
    let form = hermitian_form(n, |j, k| {
        Ok(FourierField::constant(n, c(if j == k { 1.0 } else { 0.0 })))
    })
    .unwrap();
    HermitianMetric::new(form, ManifoldModel::torus(n).unwrap()).unwrap()
}

fn cosine(n: usize, amp: f64) -> FourierField {
    let mut k = vec![0; 2 * n];
    k[0] = 1;
    FourierField::cosine(n, &k, amp).unwrap()
}

#[test]
fn epsilon0_closed_form_single_mode() {
    let g = flat(2);
    let e = psh_epsilon0(
        &g,
        &cosine(2, 0.1),
        &SamplingSpec::default(),
        DEFAULT_EPS_MAX,
    )
    .unwrap();
    let expected = 10.0 / std::f64::consts::PI.powi(2);
    assert!(!e.capped);
    assert!(
        (e.value - expected).abs() <= 1e-9 * expected,
        "{} vs {expected}",
        e.value
    );
}

#[test]
fn epsilon0_scales_inversely() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let g = flat(2);
    let spec = SamplingSpec::default();
    let u = random_real_fourier(&mut rng, 2, 2, 3, 1.0);
    let e1 = psh_epsilon0(&g, &u, &spec, DEFAULT_EPS_MAX).unwrap().value;
    let e2 = psh_epsilon0(&g, &u.scale(c(2.0)), &spec, DEFAULT_EPS_MAX)
        .unwrap()
        .value;
    assert!((e2 - e1 / 2.0).abs() <= 1e-9 * e1);
}

#[test]
fn epsilon0_capped_for_constants() {
    let g = flat(2);
    let e = psh_epsilon0(
        &g,
        &FourierField::constant(2, c(3.0)),
        &SamplingSpec::default(),
        50.0,
    )
    .unwrap();
    assert!(e.capped);
    assert_eq!(e.value, 50.0);
    let complex = FourierField::from_modes(2, [(vec![1, 0, 0, 0], c(1.0))]).unwrap();
    assert!(psh_epsilon0(&g, &complex, &SamplingSpec::default(), 50.0).is_err());
}

#[test]
fn perturbed_by_zero_or_constant_is_g() {
    let g = flat(2);
    assert_eq!(
        perturbed(&g, &FourierField::new_zero(2)).unwrap(),
        *g.form()
    );
    assert_eq!(
        perturbed(&g, &FourierField::constant(2, c(7.0))).unwrap(),
        *g.form()
    );
    assert!(perturbed(&g, &cosine(3, 0.1)).is_err());
}

#[test]
fn flat_volume_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let g = flat(2);
    for _ in 0..5 {
        let u = random_real_fourier(&mut rng, 2, 3, 4, 0.05);
        assert!((ma_volume(&g, &u).unwrap() - 8.0).abs() <= 1e-12 * 8.0);
        assert!(mixed_term(&g, &u, 0).unwrap().abs() <= 1e-12);
        assert!(mixed_term(&g, &u, 1).unwrap().abs() <= 1e-12);
        assert_eq!(mixed_term(&g, &u, 2).unwrap(), 8.0);
    }
    assert!(mixed_term(&g, &cosine(2, 0.1), 3).is_err());
}

#[test]
fn volume_shift_and_translation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let form = random_metric_form(&mut rng, 2, 1, 2, 0.3).unwrap();
    let g = HermitianMetric::new(form, ManifoldModel::torus(2).unwrap()).unwrap();
    let u = random_real_fourier(&mut rng, 2, 2, 3, 0.02);
    let v0 = ma_volume(&g, &u).unwrap();
    let shifted = u.try_add(&FourierField::constant(2, c(4.0))).unwrap();
    assert_eq!(ma_volume(&g, &shifted).unwrap(), v0);
    // translating both g and u leaves the integral unchanged
    let shift = [0.13, 0.71, 0.4, 0.05];
    let gt = g
        .form()
        .map_coefficients(|f| Ok(f.translate(&shift)))
        .unwrap();
    let gt = HermitianMetric::new(gt, ManifoldModel::torus(2).unwrap()).unwrap();
    let vt = ma_volume(&gt, &u.translate(&shift)).unwrap();
    assert!((vt - v0).abs() <= 1e-12 * v0.abs());
}

#[test]
fn polarization_is_symmetric_and_diagonal_matches_mixed_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let form = random_metric_form(&mut rng, 3, 1, 1, 0.3).unwrap();
    let g = HermitianMetric::new(form, ManifoldModel::torus(3).unwrap()).unwrap();
    let u1 = random_real_fourier(&mut rng, 3, 1, 2, 0.1);
    let u2 = random_real_fourier(&mut rng, 3, 1, 2, 0.1);
    let a = polarized_mixed_term(&g, &[u1.clone(), u2.clone()], 1).unwrap();
    let b = polarized_mixed_term(&g, &[u2.clone(), u1.clone()], 1).unwrap();
    assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-12));
    let d = polarized_mixed_term(&g, &[u1.clone(), u1.clone()], 1).unwrap();
    assert!((d - mixed_term(&g, &u1, 1).unwrap()).abs() <= 1e-12 * d.abs().max(1.0));
    assert!(polarized_mixed_term(&g, &[u1], 1).is_err());
}

#[test]
fn flat_expansion_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let g = flat(2);
    let u = random_real_fourier(&mut rng, 2, 2, 3, 1.0);
    let p = epsilon_expansion(&g, &u, 7, &SamplingSpec::default(), DEFAULT_EPS_MAX).unwrap();
    assert!((p.fitted[0] - 8.0).abs() <= 1e-12);
    for k in 1..=2 {
        assert!(p.fitted[k].abs() * p.epsilon0.powi(k as i32) <= 1e-12);
        assert!(p.direct[k].abs() <= 1e-12);
    }
    assert!(epsilon_expansion(&g, &u, 4, &SamplingSpec::default(), DEFAULT_EPS_MAX).is_err());
    assert!(p.epsilons.iter().all(|e| e.abs() < p.epsilon0));
}

#[test]
fn binomials() {
    assert_eq!(binomial(3, 0), 1.0);
    assert_eq!(binomial(3, 2), 3.0);
    assert_eq!(binomial(4, 2), 6.0);
    assert_eq!(binomial(2, 3), 0.0);
}

#[test]
fn grid_evaluation_matches_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let f = random_real_fourier(&mut rng, 2, 3, 4, 1.0);
    let m = 5;
    let vals = grid_values(&f, m);
    let mut idx = 0;
    for i0 in 0..m {
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    let x: Vec<f64> = [i0, i1, i2, i3]
                        .iter()
                        .map(|&i| (i as f64 + 0.5) / m as f64)
                        .collect();
                    assert!((vals[idx] - f.eval(&x).re).abs() < 1e-12);
                    idx += 1;
                }
            }
        }
    }
}

#[test]
fn comparison_trivial_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let g = flat(2);
    let spec = SamplingSpec::default();
    let u = random_real_fourier(&mut rng, 2, 2, 2, 1.0);
    let e = psh_epsilon0(&g, &u, &spec, DEFAULT_EPS_MAX).unwrap().value;
    let u = PshFunction::new(&g, u.scale(c(0.5 * e)), &spec).unwrap();
    let same = comparison_integrals(&g, &u, &u, 16).unwrap();
    assert_eq!((same.lhs, same.rhs, same.domain_fraction), (0.0, 0.0, 0.0));
    let up = PshFunction::new(
        &g,
        u.field()
            .try_add(&FourierField::constant(2, c(1.0)))
            .unwrap(),
        &spec,
    )
    .unwrap();
    let all = comparison_integrals(&g, &u, &up, 16).unwrap();
    assert_eq!(all.domain_fraction, 1.0);
    assert_eq!(all.boundary_fraction, 0.0);
    // midpoint sums of band-limited fields are exact once N exceeds the bandwidth
    assert!((all.lhs - 8.0).abs() < 1e-12 && (all.rhs - 8.0).abs() < 1e-12);
}

#[test]
fn comparison_rejects_non_torus() {
    let model = ManifoldModel::iwasawa();
    assert!(!model.is_torus());
}

#[test]
fn threefold_flat_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let g = flat(3);
    let u = random_real_fourier(&mut rng, 3, 1, 2, 0.1);
    let r = threefold_decomposition(
        &g,
        &u,
        &SamplingSpec {
            grid: 2,
            random: 16,
            seed: 1,
        },
    )
    .unwrap();
    assert_eq!(r.t0, 48.0);
    assert!(r.t1.abs() <= 1e-12 && r.t2.abs() <= 1e-12 && r.t3.abs() <= 1e-12);
    assert!(r.passes());
    assert!(threefold_decomposition(&flat(2), &cosine(2, 0.1), &SamplingSpec::default()).is_err());
}

#[test]
fn psh_family_is_admissible() {
    let g = flat(2);
    let spec = SamplingSpec::default();
    let fam = psh_family(&g, 3, 3, 5, &spec).unwrap();
    assert_eq!(fam.len(), 3);
    for u in &fam {
        assert!(u.certificate() > 0.0);
    }
}
