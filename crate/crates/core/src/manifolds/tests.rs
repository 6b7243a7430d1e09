use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::calculus::StructureConstants;
use crate::exterior::{Bidegree, Form, GradedForm, MultiIndex};
use crate::fields::{Coefficient, CoframeConstant, FourierField, PolyField};
use crate::random::{random_form, random_fourier, random_metric_form, random_real_fourier};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn flat<Cf: Coefficient>(n: usize) -> Form<Cf> {
    hermitian_form(n, |j, k| {
        Ok(Cf::constant(n, c(if j == k { 1.0 } else { 0.0 }, 0.0)))
    })
    .unwrap()
}

/// Riemann sum of the density over an `m^{2n}` grid.
fn grid_integral(f: &FourierField, n: usize, m: usize) -> Complex64 {
    let axes = 2 * n;
    let total = m.pow(axes as u32);
    let mut sum = c(0.0, 0.0);
    let mut x = vec![0.0; axes];
    for idx in 0..total {
        let mut rem = idx;
        for xa in x.iter_mut() {
            *xa = (rem % m) as f64 / m as f64;
            rem /= m;
        }
        sum += f.eval(&x);
    }
    sum / total as f64 * 2f64.powi(n as i32)
}

#[test]
fn std_volume_normalization() {
    for n in 1..=3 {
        let t = ManifoldModel::torus(n).unwrap();
        let v = t
            .integrate_top(&omega_std::<FourierField>(n).unwrap())
            .unwrap();
        assert_eq!(v, c(2f64.powi(n as i32), 0.0));
    }
    let iw = ManifoldModel::iwasawa();
    assert_eq!(
        iw.integrate_top(&omega_std::<CoframeConstant>(3).unwrap())
            .unwrap(),
        c(1.0, 0.0)
    );
}

#[test]
fn flat_volumes() {
    let t2 = ManifoldModel::torus(2).unwrap();
    let t3 = ManifoldModel::torus(3).unwrap();
    let g2 = HermitianMetric::new(flat::<FourierField>(2), t2).unwrap();
    let g3 = HermitianMetric::new(flat::<FourierField>(3), t3).unwrap();
    assert_eq!(g2.volume().unwrap(), 8.0);
    assert_eq!(g3.volume().unwrap(), 48.0);
}

#[test]
fn omega_coefficient_matches_wedge() {
    for n in 1..=4 {
        let w = omega_std::<CoframeConstant>(n).unwrap();
        let full = MultiIndex::full(n);
        assert_eq!(w.get(full, full).unwrap().0, omega_std_coefficient(n));
    }
}

#[test]
fn integration_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let n = 2;
    let model = ManifoldModel::torus(n).unwrap();
    let f = random_fourier(&mut rng, n, 4, 6, 1.0);
    let top = omega_std::<FourierField>(n).unwrap().mul_field(&f).unwrap();
    let exact = model.integrate_top(&top).unwrap();
    // band 4 is resolved exactly by any grid with at least 9 points per axis
    for m in [9, 11, 13] {
        let approx = grid_integral(&f, n, m);
        assert!(
            (approx - exact).norm() <= 1e-10 * exact.norm().max(1.0),
            "{m}: {approx} vs {exact}"
        );
    }
}

#[test]
fn integration_rejects_wrong_bidegree_and_poly() {
    let t2 = ManifoldModel::torus(2).unwrap();
    assert!(t2.integrate_top(&flat::<FourierField>(2)).is_err());
    let p = omega_std::<PolyField>(2).unwrap();
    assert!(t2.integrate_top(&p).is_err());
}

#[test]
fn real_forms_integrate_to_reals_and_conjugation_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let n = 2;
    let model = ManifoldModel::torus(n).unwrap();
    for _ in 0..10 {
        let g = random_metric_form(&mut rng, n, 2, 2, 0.3).unwrap();
        let vol = model.integrate_top(&g.power(2).unwrap()).unwrap();
        assert!(vol.im.abs() <= 1e-12);
        let a = random_form(&mut rng, n, Bidegree::new(2, 2), 1, |r| {
            random_fourier(r, n, 3, 4, 1.0)
        });
        let lhs = model.integrate_top(&a.conjugate()).unwrap();
        let rhs = model.integrate_top(&a).unwrap().conj();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }
}

#[test]
fn stokes_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [2, 3] {
        let model = ManifoldModel::torus(n).unwrap();
        for _ in 0..5 {
            let mut a = GradedForm::zero(n);
            for p in 0..=n {
                let q = 2 * n - 1 - p;
                if q > n {
                    continue;
                }
                a.add_form(random_form(&mut rng, n, Bidegree::new(p, q), 3, |r| {
                    random_fourier(r, n, 6, 4, 1.0)
                }))
                .unwrap();
            }
            let r = model.stokes_residual(&a).unwrap();
            assert!(r <= 1e-12 * a.magnitude().max(1.0), "residual {r}");
        }
    }
}

#[test]
fn stokes_rejects_wrong_degree() {
    let model = ManifoldModel::torus(2).unwrap();
    let a: GradedForm<FourierField> = flat::<FourierField>(2).into();
    assert!(model.stokes_residual(&a).is_err());
}

#[test]
fn fubini_on_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let x = ManifoldModel::torus(2).unwrap();
    let y = ManifoldModel::torus(1).unwrap();
    let p = ManifoldModel::product(x.clone(), y.clone()).unwrap();
    assert_eq!(p.n(), 3);
    assert_eq!(p.to_string(), "product(torus2,torus1)");
    for _ in 0..5 {
        let f = random_real_fourier(&mut rng, 2, 2, 3, 1.0)
            .try_add(&FourierField::constant(2, c(1.0, 0.0)))
            .unwrap();
        let h = random_real_fourier(&mut rng, 1, 2, 2, 1.0)
            .try_add(&FourierField::constant(1, c(0.5, 0.0)))
            .unwrap();
        let a = omega_std::<FourierField>(2).unwrap().mul_field(&f).unwrap();
        let b = omega_std::<FourierField>(1).unwrap().mul_field(&h).unwrap();
        let lhs = p
            .integrate_top(
                &p.pullback_first(&a)
                    .unwrap()
                    .wedge(&p.pullback_second(&b).unwrap())
                    .unwrap(),
            )
            .unwrap();
        let rhs = x.integrate_top(&a).unwrap() * y.integrate_top(&b).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }
}

#[test]
fn model_names_parse() {
    assert_eq!(ManifoldModel::from_name("torus3").unwrap().n(), 3);
    assert_eq!(ManifoldModel::from_name("iwasawa").unwrap().n(), 3);
    let p = ManifoldModel::from_name("product(torus2,product(torus1,torus1))").unwrap();
    assert_eq!(p.n(), 4);
    assert!(ManifoldModel::from_name("product(torus2,iwasawa)").is_err());
    assert!(ManifoldModel::from_name("sphere").is_err());
    let nil = ManifoldModel::from_name("product(iwasawa,iwasawa)").unwrap();
    assert_eq!(nil.n(), 6);
}

#[test]
fn metric_rejects_bad_matrices() {
    let t2 = ManifoldModel::torus(2).unwrap();
    let neg = flat::<FourierField>(2).scale(c(-1.0, 0.0));
    assert!(HermitianMetric::new(neg, t2.clone()).is_err());
    let skew = hermitian_form(2, |j, k| {
        Ok(FourierField::constant(
            2,
            if j == k {
                c(1.0, 0.0)
            } else if j < k {
                c(0.5, 0.0)
            } else {
                c(-0.5, 0.0)
            },
        ))
    })
    .unwrap();
    assert!(HermitianMetric::new(skew, t2.clone()).is_err());
    let degenerate = hermitian_form(2, |j, k| {
        Ok(FourierField::constant(
            2,
            c(if j == 1 && k == 1 { 1.0 } else { 0.0 }, 0.0),
        ))
    })
    .unwrap();
    assert!(HermitianMetric::new(degenerate, t2.clone()).is_err());
    // 1 + 1.5 cos changes sign somewhere on the grid
    let wobble = FourierField::cosine(2, &[1, 0, 0, 0], 1.5)
        .unwrap()
        .try_add(&FourierField::constant(2, c(1.0, 0.0)))
        .unwrap();
    let g = flat::<FourierField>(2).mul_field(&wobble).unwrap();
    assert!(HermitianMetric::new(g, t2).is_err());
    assert!(HermitianMetric::new(flat::<FourierField>(3), ManifoldModel::iwasawa()).is_err());
}

#[test]
fn positivity_examples() {
    let n = 2;
    let t2 = ManifoldModel::torus(n).unwrap();
    let spec = SamplingSpec::default();
    let one = MultiIndex::single(1);
    let e1 = Form::<FourierField>::basis(n, one, one, c(0.0, 1.0)).unwrap();
    let r = is_positive_11(&e1, &t2, &spec, 0.0).unwrap();
    assert!(r.semi_positive);
    assert_eq!(r.min_eigenvalue, 0.0);
    let r = is_positive_11(&flat::<FourierField>(n), &t2, &spec, 0.0).unwrap();
    assert!(r.semi_positive);
    assert!((r.min_eigenvalue - 1.0).abs() < 1e-15);
    let u = FourierField::cosine(n, &[1, 0, 0, 0], 0.1).unwrap();
    let h = crate::calculus::Frame::Coordinate.i_ddbar(n, &u).unwrap();
    let r = is_positive_11(&h, &t2, &spec, 0.0).unwrap();
    assert!(!r.semi_positive);
    // closed form: i∂∂̄u has a_{11} = ∂_1∂̄_1 u = -π²·0.1·cos(2πx_1)
    let expected = -std::f64::consts::PI.powi(2) * 0.1;
    assert!((r.min_eigenvalue - expected).abs() < 1e-12);
    assert!(is_positive_11(&Form::<FourierField>::dz(n, 1).unwrap(), &t2, &spec, 0.0).is_err());
}

#[test]
fn weak_positivity_examples() {
    let n = 3;
    let t3 = ManifoldModel::torus(n).unwrap();
    let spec = SamplingSpec {
        grid: 2,
        random: 16,
        seed: 3,
    };
    let e = |j| {
        Form::<FourierField>::basis(n, MultiIndex::single(j), MultiIndex::single(j), c(0.0, 1.0))
            .unwrap()
    };
    let a = e(1).wedge(&e(2)).unwrap();
    let r = is_weakly_positive_kk(&a, &t3, 32, 7, &spec, 0.0).unwrap();
    assert!(r.weakly_positive && r.statistical);
    let r = is_weakly_positive_kk(&a.scale(c(-1.0, 0.0)), &t3, 32, 7, &spec, 0.0).unwrap();
    assert!(!r.weakly_positive);
    assert!(r.worst_pairing < 0.0);
    assert!(is_weakly_positive_kk(
        &Form::<FourierField>::dz(n, 1).unwrap(),
        &t3,
        4,
        7,
        &spec,
        0.0
    )
    .is_err());
}

#[test]
fn top_degree_weak_positivity_matches_density_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let n = 3;
    let t3 = ManifoldModel::torus(n).unwrap();
    let spec = SamplingSpec {
        grid: 2,
        random: 64,
        seed: 9,
    };
    let frame = crate::calculus::Frame::Coordinate;
    for _ in 0..3 {
        let g = random_metric_form(&mut rng, n, 1, 1, 0.3).unwrap();
        let dg = frame.del(&g).unwrap();
        // i∂g∧∂̄g is a (3,3) form on a threefold
        let top = dg.wedge(&dg.conjugate()).unwrap().scale(c(0.0, 1.0));
        let f = density(&top).unwrap();
        let scan_ok = spec
            .points(n)
            .iter()
            .all(|x| f.eval(x).re >= -1e-10 * f.eval(x).norm());
        let r = is_weakly_positive_kk(&top, &t3, 1, 1, &spec, 0.0).unwrap();
        assert_eq!(r.weakly_positive, scan_ok);
        assert!(!r.statistical);
    }
}

#[test]
fn coframe_metric_and_integration() {
    let sc = StructureConstants::iwasawa();
    let model = ManifoldModel::nilmanifold(sc);
    let g = HermitianMetric::new(flat::<CoframeConstant>(3), model).unwrap();
    assert_eq!(g.volume().unwrap(), 6.0);
}
