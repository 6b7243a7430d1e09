use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fields::CoframeConstant;
use crate::random::{random_constant, random_form, random_poly};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn idx(n: usize, labels: &[usize]) -> MultiIndex {
    MultiIndex::new(n, labels).unwrap()
}

type K = CoframeConstant;

/// Factor list: `(label, barred)`. Sorts into dz-before-dz̄ order by adjacent
/// swaps and returns the sign, or `None` on a repeated factor.
fn brute_sort(mut f: Vec<(usize, bool)>) -> Option<(Vec<(usize, bool)>, i32)> {
    let key = |x: &(usize, bool)| (x.1, x.0);
    let mut sign = 1;
    for a in 0..f.len() {
        for b in 0..f.len() - 1 - a {
            if key(&f[b]) > key(&f[b + 1]) {
                f.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if f.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((f, sign))
}

fn factors(i: MultiIndex, j: MultiIndex) -> Vec<(usize, bool)> {
    i.iter()
        .map(|l| (l, false))
        .chain(j.iter().map(|l| (l, true)))
        .collect()
}

fn brute_wedge(a: &Form<K>, b: &Form<K>) -> Form<K> {
    let n = a.n();
    let bd = Bidegree::new(
        a.bidegree().p + b.bidegree().p,
        a.bidegree().q + b.bidegree().q,
    );
    let mut terms = Vec::new();
    for (i, j, x) in a.terms() {
        for (k, l, y) in b.terms() {
            let mut f = factors(i, j);
            f.extend(factors(k, l));
            let Some((sorted, s)) = brute_sort(f) else {
                continue;
            };
            let hol: Vec<usize> = sorted.iter().filter(|f| !f.1).map(|f| f.0).collect();
            let anti: Vec<usize> = sorted.iter().filter(|f| f.1).map(|f| f.0).collect();
            terms.push((
                idx(n, &hol),
                idx(n, &anti),
                CoframeConstant(x.0 * y.0 * s as f64),
            ));
        }
    }
    if bd.p > n || bd.q > n {
        return Form::zero(n, bd);
    }
    Form::from_terms(n, bd, terms).unwrap()
}

fn rand_bidegree<R: Rng>(rng: &mut R, n: usize) -> Bidegree {
    Bidegree::new(rng.gen_range(0..=n.min(2)), rng.gen_range(0..=n.min(2)))
}

#[test]
fn antisymmetry_of_dz() {
    let a: Form<K> = Form::dz(2, 2).unwrap();
    let b: Form<K> = Form::dz(2, 1).unwrap();
    let ab = a.wedge(&b).unwrap();
    assert_eq!(
        ab,
        Form::basis(2, idx(2, &[1, 2]), MultiIndex::EMPTY, c(-1.0, 0.0)).unwrap()
    );
}

#[test]
fn reblocking_sign_matches_brute_force() {
    let n = 2;
    let a: Form<K> = Form::basis(n, idx(n, &[1]), idx(n, &[1]), c(1.0, 0.0)).unwrap();
    let b: Form<K> = Form::basis(n, idx(n, &[2]), idx(n, &[2]), c(1.0, 0.0)).unwrap();
    let ab = a.wedge(&b).unwrap();
    let full = MultiIndex::full(2);
    assert_eq!(ab.get(full, full).unwrap().0, c(-1.0, 0.0));
    assert_eq!(ab, brute_wedge(&a, &b));
}

#[test]
fn wedge_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let bd = rand_bidegree(&mut rng, n);
        let a = random_form(&mut rng, n, bd, 4, random_constant);
        let bd = rand_bidegree(&mut rng, n);
        let b = random_form(&mut rng, n, bd, 4, random_constant);
        assert_eq!(a.wedge(&b).unwrap(), brute_wedge(&a, &b));
    }
}

#[test]
fn graded_commutativity_and_associativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let bd = rand_bidegree(&mut rng, n);
        let a = random_form(&mut rng, n, bd, 3, |r| random_poly(r, n, 2, 2));
        let bd = rand_bidegree(&mut rng, n);
        let b = random_form(&mut rng, n, bd, 3, |r| random_poly(r, n, 2, 2));
        let d = random_form(&mut rng, n, Bidegree::new(1, 0), 2, |r| {
            random_poly(r, n, 1, 2)
        });
        let s = if (a.degree() * b.degree()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(c(s, 0.0)));
        let left = a.wedge(&b).unwrap().wedge(&d).unwrap();
        let right = a.wedge(&b.wedge(&d).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn oversized_bidegree_is_zero() {
    let a: Form<K> = Form::dz(2, 1).unwrap();
    let b: Form<K> = Form::basis(2, idx(2, &[1, 2]), MultiIndex::EMPTY, c(1.0, 0.0)).unwrap();
    let ab = a.wedge(&b).unwrap();
    assert!(ab.is_zero());
    assert_eq!(ab.bidegree(), Bidegree::new(3, 0));
}

#[test]
fn conjugation_examples() {
    let n = 2;
    let one = idx(n, &[1]);
    let w: Form<K> = Form::basis(n, one, one, c(0.0, 1.0)).unwrap();
    assert_eq!(w.conjugate(), w);
    assert!(w.is_real().unwrap());
    let hol: Form<K> = Form::basis(n, idx(n, &[1, 2]), MultiIndex::EMPTY, c(1.0, 0.0)).unwrap();
    let bar = hol.conjugate();
    assert_eq!(bar.bidegree(), Bidegree::new(0, 2));
    assert_eq!(
        bar.get(MultiIndex::EMPTY, idx(n, &[1, 2])).unwrap().0,
        c(1.0, 0.0)
    );
    let off: Form<K> = Form::basis(n, one, idx(n, &[2]), c(1.0, 0.0)).unwrap();
    assert!(!off.is_real().unwrap());
    let herm = Form::<K>::basis(n, one, idx(n, &[2]), c(0.0, 1.0))
        .unwrap()
        .try_add(&Form::basis(n, idx(n, &[2]), one, c(0.0, 1.0)).unwrap())
        .unwrap();
    assert!(herm.is_real().unwrap());
    assert!(hol.is_real().is_err());
}

#[test]
fn conjugate_is_involution_and_antilinear_over_wedge() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let bd = rand_bidegree(&mut rng, n);
        let a = random_form(&mut rng, n, bd, 3, |r| random_poly(r, n, 2, 2));
        let bd = rand_bidegree(&mut rng, n);
        let b = random_form(&mut rng, n, bd, 3, |r| random_poly(r, n, 2, 2));
        assert_eq!(a.conjugate().conjugate(), a);
        assert_eq!(
            a.wedge(&b).unwrap().conjugate(),
            a.conjugate().wedge(&b.conjugate()).unwrap()
        );
    }
}

#[test]
fn power_examples() {
    let n = 2;
    let e1: Form<K> = Form::basis(n, idx(n, &[1]), idx(n, &[1]), c(0.0, 1.0)).unwrap();
    let e2: Form<K> = Form::basis(n, idx(n, &[2]), idx(n, &[2]), c(0.0, 1.0)).unwrap();
    let g = e1.try_add(&e2).unwrap();
    assert_eq!(
        g.power(2).unwrap(),
        e1.wedge(&e2).unwrap().scale(c(2.0, 0.0))
    );
    assert_eq!(g.power(1).unwrap(), g);
    assert_eq!(g.power(0).unwrap(), Form::unit(n));
    let odd: Form<K> = Form::dz(n, 1).unwrap();
    assert!(odd.power(2).is_err());
    assert_eq!(odd.power(1).unwrap(), odd);
}

#[test]
fn power_matches_repeated_wedge() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let g = random_form(&mut rng, 3, Bidegree::new(1, 1), 6, |r| {
            random_poly(r, 3, 1, 2)
        });
        assert_eq!(g.power(3).unwrap(), g.wedge(&g).unwrap().wedge(&g).unwrap());
    }
}

#[test]
fn basis_rejects_bad_indices() {
    assert!(MultiIndex::new(3, &[2, 1]).is_err());
    assert!(MultiIndex::new(3, &[1, 1]).is_err());
    assert!(MultiIndex::new(3, &[4]).is_err());
    assert!(Form::<K>::from_terms(
        2,
        Bidegree::new(1, 0),
        [(
            idx(2, &[1, 2]),
            MultiIndex::EMPTY,
            CoframeConstant(c(1.0, 0.0))
        )]
    )
    .is_err());
}

#[test]
fn wedge_dimension_mismatch_rejected() {
    let a: Form<K> = Form::dz(2, 1).unwrap();
    let b: Form<K> = Form::dz(3, 1).unwrap();
    assert!(a.wedge(&b).is_err());
}

#[test]
fn merge_sign_counts_inversions() {
    let a = idx(4, &[2, 4]);
    let b = idx(4, &[1, 3]);
    let (m, s) = a.merge_sign(b).unwrap();
    assert_eq!(m, idx(4, &[1, 2, 3, 4]));
    // (2,4,1,3) -> three inversions
    assert_eq!(s, -1);
    assert!(a.merge_sign(idx(4, &[2])).is_none());
}

fn permutations(v: &[usize]) -> Vec<(Vec<usize>, i32)> {
    if v.len() <= 1 {
        return vec![(v.to_vec(), 1)];
    }
    let mut out = Vec::new();
    for k in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(k);
        let s = if k % 2 == 0 { 1 } else { -1 };
        for (mut p, t) in permutations(&rest) {
            p.insert(0, head);
            out.push((p, s * t));
        }
    }
    out
}

#[test]
fn table_lookup_is_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let n = 4;
        let f = random_form(&mut rng, n, Bidegree::new(2, 3), 5, random_constant);
        let table = f.table();
        for (i, j, v) in f.terms() {
            for (pi, si) in permutations(&i.to_vec()) {
                for (pj, sj) in permutations(&j.to_vec()) {
                    let got = table.lookup(&pi, &pj).unwrap();
                    assert_eq!(got.0, v.0 * (si * sj) as f64);
                }
            }
        }
        assert!(table.lookup(&[1, 1], &[1, 2, 3]).unwrap().0 == c(0.0, 0.0));
    }
}

#[test]
fn wedge_with_fourier_coefficients_is_commutative_within_tolerance() {
    use crate::random::random_fourier;
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let a = random_form(&mut rng, n, Bidegree::new(1, 1), 3, |r| {
            random_fourier(r, n, 2, 3, 1.0)
        });
        let b = random_form(&mut rng, n, Bidegree::new(1, 0), 3, |r| {
            random_fourier(r, n, 2, 3, 1.0)
        });
        let r = a
            .wedge(&b)
            .unwrap()
            .residual(&b.wedge(&a).unwrap())
            .unwrap();
        assert!(r <= 1e-13 * a.wedge(&b).unwrap().magnitude().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn poly_wedge_is_bilinear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let a = random_form(&mut rng, n, Bidegree::new(1, 1), 3, |r| random_poly(r, n, 1, 2));
        let b = random_form(&mut rng, n, Bidegree::new(1, 1), 3, |r| random_poly(r, n, 1, 2));
        let d = random_form(&mut rng, n, Bidegree::new(1, 0), 3, |r| random_poly(r, n, 1, 2));
        let lhs = a.try_add(&b).unwrap().wedge(&d).unwrap();
        let rhs = a.wedge(&d).unwrap().try_add(&b.wedge(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
