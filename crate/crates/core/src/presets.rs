//! Named metrics and literal metric tables used by scenario configs.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characterize::product_metric;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::fields::literal::FourierLiteral;
use crate::fields::{Coefficient, CoframeConstant, FourierField};
use crate::manifolds::{hermitian_form, HermitianMetric, ManifoldModel, ModelKind, SamplingSpec};
use crate::monge_ampere::{psh_epsilon0, DEFAULT_EPS_MAX};
use crate::random::random_real_fourier;

/// A metric on either a torus-type model or a nilmanifold-type model.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMetric {
    Torus(HermitianMetric<FourierField>),
    Coframe(HermitianMetric<CoframeConstant>),
}

impl AnyMetric {
    pub fn n(&self) -> usize {
        self.model().n()
    }

    pub fn model(&self) -> &ManifoldModel {
        match self {
            AnyMetric::Torus(g) => g.model(),
            AnyMetric::Coframe(g) => g.model(),
        }
    }

    pub fn as_torus(&self) -> Option<&HermitianMetric<FourierField>> {
        match self {
            AnyMetric::Torus(g) => Some(g),
            AnyMetric::Coframe(_) => None,
        }
    }
}

fn default_seed() -> u64 {
    1
}
fn default_band() -> u32 {
    2
}
fn default_fraction() -> f64 {
    0.5
}
fn default_a() -> f64 {
    0.5
}

/// One upper-triangular entry `a_{jk̄}` of a literal metric; the lower
/// triangle is filled by Hermitian symmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub j: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FourierLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricSpec {
    /// `i Σ dz_j∧dz̄_j`, or `i Σ φ_j∧φ̄_j` on a nilmanifold.
    Flat {},
    /// `g_0 + i∂∂̄ρ` with a seeded band-limited `ρ` scaled to `fraction·ε₀(ρ)`.
    KahlerPerturbed {
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default = "default_band")]
        band: u32,
        #[serde(default = "default_fraction")]
        fraction: f64,
    },
    /// `(1 + a cos 2πx_1) g_0`.
    Conformal {
        #[serde(default = "default_a")]
        a: f64,
    },
    /// Surface metric with `a_{12̄} = ε e(x_2)`: pluriclosed but not closed.
    Gauduchon {
        #[serde(default = "default_a")]
        epsilon: f64,
    },
    /// `i Σ φ_j∧φ̄_j` on the Iwasawa manifold.
    IwasawaStandard {},
    /// `p_X^* g + p_Y^* h` on a product model.
    Product {
        first: Box<MetricSpec>,
        second: Box<MetricSpec>,
    },
    Literal {
        entries: Vec<MatrixEntry>,
    },
}

impl MetricSpec {
    /// Parses `flat`, `kahler-perturbed`, `conformal`, `gauduchon`,
    /// `iwasawa-standard` or `product(<a>,<b>)` with default parameters.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        Ok(match name {
            "flat" => MetricSpec::Flat {},
            "kahler-perturbed" => MetricSpec::KahlerPerturbed {
                seed: default_seed(),
                band: default_band(),
                fraction: default_fraction(),
            },
            "conformal" => MetricSpec::Conformal { a: default_a() },
            "gauduchon" => MetricSpec::Gauduchon {
                epsilon: default_a(),
            },
            "iwasawa-standard" => MetricSpec::IwasawaStandard {},
            _ => {
                let inner = name
                    .strip_prefix("product(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::Config(format!("unknown metric preset '{name}'")))?;
                let mut depth = 0i32;
                let mut split = None;
                for (pos, ch) in inner.char_indices() {
                    match ch {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        ',' if depth == 0 => {
                            split = Some(pos);
                            break;
                        }
                        _ => {}
                    }
                }
                let pos = split
                    .ok_or_else(|| Error::Config(format!("product needs two factors: '{name}'")))?;
                MetricSpec::Product {
                    first: Box::new(Self::from_name(&inner[..pos])?),
                    second: Box::new(Self::from_name(&inner[pos + 1..])?),
                }
            }
        })
    }

    pub fn build(&self, model: &ManifoldModel, spec: &SamplingSpec) -> Result<AnyMetric> {
        let n = model.n();
        let torus_only = |what: &str| {
            Error::Capability(format!(
                "metric preset '{what}' needs a torus model, got {model}"
            ))
        };
        match self {
            MetricSpec::Flat {} => {
                if model.is_torus() {
                    let g = HermitianMetric::with_sampling(identity_form(n)?, model.clone(), spec)?;
                    Ok(AnyMetric::Torus(g))
                } else {
                    let g = HermitianMetric::with_sampling(identity_form(n)?, model.clone(), spec)?;
                    Ok(AnyMetric::Coframe(g))
                }
            }
            MetricSpec::IwasawaStandard {} => {
                if !matches!(model.kind(), ModelKind::Nilmanifold(sc) if sc.name() == "iwasawa") {
                    return Err(Error::Capability(format!(
                        "iwasawa-standard needs the iwasawa model, got {model}"
                    )));
                }
                let g = HermitianMetric::with_sampling(identity_form(n)?, model.clone(), spec)?;
                Ok(AnyMetric::Coframe(g))
            }
            MetricSpec::KahlerPerturbed {
                seed,
                band,
                fraction,
            } => {
                if !model.is_torus() {
                    return Err(torus_only("kahler-perturbed"));
                }
                if !(0.0..1.0).contains(fraction) {
                    return Err(Error::Config(format!(
                        "kahler-perturbed fraction {fraction} outside [0,1)"
                    )));
                }
                let g0 = HermitianMetric::with_sampling(identity_form(n)?, model.clone(), spec)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let rho = random_real_fourier(&mut rng, n, *band, 3, 1.0);
                let eps = psh_epsilon0(&g0, &rho, spec, DEFAULT_EPS_MAX)?;
                let rho = rho.scale(Complex64::new(fraction * eps.value, 0.0));
                let form = g0.form().try_add(&model.frame().i_ddbar(n, &rho)?)?;
                Ok(AnyMetric::Torus(HermitianMetric::with_sampling(
                    form,
                    model.clone(),
                    spec,
                )?))
            }
            MetricSpec::Conformal { a } => {
                if !model.is_torus() {
                    return Err(torus_only("conformal"));
                }
                let mut k = vec![0; 2 * n];
                k[0] = 1;
                let phi = FourierField::cosine(n, &k, *a)?
                    .try_add(&FourierField::constant(n, Complex64::new(1.0, 0.0)))?;
                let form = identity_form::<FourierField>(n)?.mul_field(&phi)?;
                Ok(AnyMetric::Torus(HermitianMetric::with_sampling(
                    form,
                    model.clone(),
                    spec,
                )?))
            }
            MetricSpec::Gauduchon { epsilon } => {
                if !model.is_torus() || n != 2 {
                    return Err(Error::Capability(format!(
                        "gauduchon preset needs torus2, got {model}"
                    )));
                }
                let b = FourierField::from_modes(
                    n,
                    [(vec![0, 0, 1, 0], Complex64::new(*epsilon, 0.0))],
                )?;
                let form = hermitian_form(n, |j, k| {
                    Ok(match (j, k) {
                        (1, 2) => b.clone(),
                        (2, 1) => b.conj(),
                        _ if j == k => FourierField::constant(n, Complex64::new(1.0, 0.0)),
                        _ => FourierField::new_zero(n),
                    })
                })?;
                Ok(AnyMetric::Torus(HermitianMetric::with_sampling(
                    form,
                    model.clone(),
                    spec,
                )?))
            }
            MetricSpec::Product { first, second } => {
                let ModelKind::Product(x, y) = model.kind() else {
                    return Err(Error::Capability(format!(
                        "product metric needs a product model, got {model}"
                    )));
                };
                match (first.build(x, spec)?, second.build(y, spec)?) {
                    (AnyMetric::Torus(a), AnyMetric::Torus(b)) => {
                        Ok(AnyMetric::Torus(product_metric(&a, &b, spec)?))
                    }
                    (AnyMetric::Coframe(a), AnyMetric::Coframe(b)) => {
                        Ok(AnyMetric::Coframe(product_metric(&a, &b, spec)?))
                    }
                    _ => Err(Error::Capability(
                        "product factors use different backends".into(),
                    )),
                }
            }
            MetricSpec::Literal { entries } => {
                if model.is_torus() {
                    let form = literal_form(n, entries, |e| match (&e.field, e.constant) {
                        (Some(lit), None) => {
                            if lit.n != n {
                                return Err(Error::DimensionMismatch(n, lit.n));
                            }
                            lit.to_field()
                        }
                        (None, Some(c)) => {
                            Ok(FourierField::constant(n, Complex64::new(c[0], c[1])))
                        }
                        _ => Err(Error::Config(
                            "metric entry needs exactly one of 'field' or 'constant'".into(),
                        )),
                    })?;
                    Ok(AnyMetric::Torus(HermitianMetric::with_sampling(
                        form,
                        model.clone(),
                        spec,
                    )?))
                } else {
                    let form = literal_form(n, entries, |e| match (&e.field, e.constant) {
                        (None, Some(c)) => Ok(CoframeConstant(Complex64::new(c[0], c[1]))),
                        _ => Err(Error::Config(
                            "coframe metric entries take a 'constant' only".into(),
                        )),
                    })?;
                    Ok(AnyMetric::Coframe(HermitianMetric::with_sampling(
                        form,
                        model.clone(),
                        spec,
                    )?))
                }
            }
        }
    }
}

/// `i Σ_j dz_j∧dz̄_j` with constant coefficients.
pub fn identity_form<C: Coefficient>(n: usize) -> Result<Form<C>> {
    hermitian_form(n, |j, k| {
        Ok(C::constant(
            n,
            Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0),
        ))
    })
}

fn literal_form<C, F>(n: usize, entries: &[MatrixEntry], mut lift: F) -> Result<Form<C>>
where
    C: Coefficient,
    F: FnMut(&MatrixEntry) -> Result<C>,
{
    let mut table: Vec<Vec<Option<C>>> = vec![vec![None; n]; n];
    for e in entries {
        if e.j == 0 || e.k == 0 || e.j > n || e.k > n || e.j > e.k {
            return Err(Error::Config(format!(
                "metric entry ({}, {}) must satisfy 1 <= j <= k <= {n}",
                e.j, e.k
            )));
        }
        if table[e.j - 1][e.k - 1].is_some() {
            return Err(Error::Config(format!(
                "duplicate metric entry ({}, {})",
                e.j, e.k
            )));
        }
        table[e.j - 1][e.k - 1] = Some(lift(e)?);
    }
    hermitian_form(n, |j, k| {
        let (a, b, conj) = if j <= k { (j, k, false) } else { (k, j, true) };
        Ok(match &table[a - 1][b - 1] {
            Some(c) if conj => c.conj(),
            Some(c) => c.clone(),
            None => C::zero(n),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_parse() {
        assert_eq!(MetricSpec::from_name("flat").unwrap(), MetricSpec::Flat {});
        let p = MetricSpec::from_name("product(gauduchon,flat)").unwrap();
        assert!(matches!(p, MetricSpec::Product { .. }));
        assert!(MetricSpec::from_name("round").is_err());
    }

    #[test]
    fn presets_build_on_their_models() {
        let spec = SamplingSpec::default();
        let t2 = ManifoldModel::torus(2).unwrap();
        for name in ["flat", "kahler-perturbed", "conformal", "gauduchon"] {
            let g = MetricSpec::from_name(name)
                .unwrap()
                .build(&t2, &spec)
                .unwrap();
            assert_eq!(g.n(), 2);
        }
        let iw = ManifoldModel::iwasawa();
        assert!(matches!(
            MetricSpec::IwasawaStandard {}.build(&iw, &spec).unwrap(),
            AnyMetric::Coframe(_)
        ));
        assert!(MetricSpec::IwasawaStandard {}.build(&t2, &spec).is_err());
        assert!(MetricSpec::Conformal { a: 0.5 }.build(&iw, &spec).is_err());
        assert!(MetricSpec::Conformal { a: 1.5 }.build(&t2, &spec).is_err());
        let prod = ManifoldModel::from_name("product(torus2,torus1)").unwrap();
        let g = MetricSpec::from_name("product(gauduchon,flat)")
            .unwrap()
            .build(&prod, &spec)
            .unwrap();
        assert_eq!(g.n(), 3);
    }

    #[test]
    fn literal_metric_from_toml() {
        let text = r#"
            preset = "literal"
            [[entries]]
            j = 1
            k = 1
            constant = [2.0, 0.0]
            [[entries]]
            j = 1
            k = 2
            constant = [0.5, 0.5]
            [[entries]]
            j = 2
            k = 2
            field = { n = 2, real = true, modes = [[[0, 0, 0, 0], [1.0, 0.0]], [[1, 0, 0, 0], [0.1, 0.0]], [[-1, 0, 0, 0], [0.1, 0.0]]] }
        "#;
        let spec: MetricSpec = toml::from_str(text).unwrap();
        let g = spec
            .build(&ManifoldModel::torus(2).unwrap(), &SamplingSpec::default())
            .unwrap();
        let AnyMetric::Torus(g) = g else {
            panic!("torus metric expected")
        };
        let a12 = g.form().table().hermitian_entry(1, 2).unwrap();
        assert_eq!(a12.amplitude(&[0, 0, 0, 0]), Complex64::new(0.5, 0.5));
        let bad = "preset = \"literal\"\nentries = [{ j = 2, k = 1, constant = [1.0, 0.0] }]";
        let spec: MetricSpec = toml::from_str(bad).unwrap();
        assert!(spec
            .build(&ManifoldModel::torus(2).unwrap(), &SamplingSpec::default())
            .is_err());
        assert!(toml::from_str::<MetricSpec>("preset = \"flat\"\nextra = 1").is_err());
    }
}
