//! Three operations for the static page in `www/`: the condition report for a
//! conformal metric on `T²`, the curve `ε ↦ ∫(g + ε i∂∂̄u)²` and a heatmap of
//! the perturbed volume density.
//!
//! Each returns a JSON string. The plain functions are the tested surface;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use hermvol::characterize::{equivalence_report, CheckOptions};
use hermvol::fields::{Coefficient, FourierField};
use hermvol::manifolds::{density, HermitianMetric, ManifoldModel, SamplingSpec};
use hermvol::monge_ampere::{
    binomial, ma_volume, mixed_term, perturbed, psh_epsilon0, DEFAULT_EPS_MAX,
};
use hermvol::presets::{AnyMetric, MetricSpec};
use hermvol::{Error, Result};

/// Lighter sampling than the library default; the page recomputes on every input.
fn demo_sampling() -> SamplingSpec {
    SamplingSpec {
        grid: 4,
        random: 64,
        seed: 0x5eed,
    }
}

fn conformal(a: f64) -> Result<HermitianMetric<FourierField>> {
    let model = ManifoldModel::torus(2)?;
    match (MetricSpec::Conformal { a }).build(&model, &demo_sampling())? {
        AnyMetric::Torus(g) => Ok(g),
        AnyMetric::Coframe(_) => unreachable!("conformal preset lives on a torus"),
    }
}

fn cos_x1(amplitude: f64) -> Result<FourierField> {
    FourierField::cosine(2, &[1, 0, 0, 0], amplitude)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Numerical(e.to_string()))
}

pub fn conformal_report_json(a: f64) -> Result<String> {
    let g = conformal(a)?;
    let opts = CheckOptions {
        sampling: demo_sampling(),
        weak_trials: 16,
        comparison_pairs: 1,
        family_size: 2,
        comparison_grids: vec![12],
        ..CheckOptions::default()
    };
    to_json(&equivalence_report(&AnyMetric::Torus(g), &opts)?)
}

#[derive(Serialize)]
struct CurvePoint {
    epsilon: f64,
    volume: f64,
    /// `Σ_k binom(2,k) ε^k ∫g^{2-k}∧(i∂∂̄u)^k` from direct wedges.
    predicted: f64,
}

#[derive(Serialize)]
struct Curve {
    epsilon0: f64,
    base_volume: f64,
    coefficients: Vec<f64>,
    points: Vec<CurvePoint>,
}

/// `u = cos 2πx_1` on the conformal metric with parameter `a`, sampled at
/// `samples` values of `ε` across `[-0.95ε₀, 0.95ε₀]`.
pub fn epsilon_curve_json(a: f64, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let g = conformal(a)?;
    let u = cos_x1(1.0)?;
    let e0 = psh_epsilon0(&g, &u, &demo_sampling(), DEFAULT_EPS_MAX)?.value;
    let coefficients: Vec<f64> = (0..=2)
        .map(|k| Ok(binomial(2, k) * mixed_term(&g, &u, 2 - k)?))
        .collect::<Result<_>>()?;
    let points = (0..samples)
        .map(|j| {
            let epsilon = 0.95 * e0 * (2.0 * j as f64 / (samples - 1) as f64 - 1.0);
            let volume = ma_volume(&g, &u.scale(Complex64::new(epsilon, 0.0)))?;
            let predicted = coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * epsilon + c);
            Ok(CurvePoint {
                epsilon,
                volume,
                predicted,
            })
        })
        .collect::<Result<_>>()?;
    to_json(&Curve {
        epsilon0: e0,
        base_volume: g.volume()?,
        coefficients,
        points,
    })
}

#[derive(Serialize)]
struct Heatmap {
    resolution: usize,
    epsilon: f64,
    min: f64,
    max: f64,
    /// Row-major over `(x_2, x_1)` with `y_1 = y_2 = 0`.
    values: Vec<f64>,
}

/// Density of `(g + ε i∂∂̄u)²` against `ω_std` on the `(x_1, x_2)` slice,
/// with `u = cos 2πx_1` and `ε = t·ε₀`.
pub fn density_heatmap_json(a: f64, t: f64, resolution: usize) -> Result<String> {
    if !(1..=256).contains(&resolution) {
        return Err(Error::InvalidArgument(format!(
            "resolution {resolution} outside 1..=256"
        )));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [-1, 1]")));
    }
    let g = conformal(a)?;
    let u = cos_x1(1.0)?;
    let epsilon = t * psh_epsilon0(&g, &u, &demo_sampling(), DEFAULT_EPS_MAX)?.value;
    let f = density(&perturbed(&g, &u.scale(Complex64::new(epsilon, 0.0)))?.power(2)?)?;
    let step = 1.0 / resolution as f64;
    let values: Vec<f64> = (0..resolution * resolution)
        .map(|idx| {
            let (row, col) = (idx / resolution, idx % resolution);
            f.eval(&[col as f64 * step, 0.0, row as f64 * step, 0.0]).re
        })
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    to_json(&Heatmap {
        resolution,
        epsilon,
        min,
        max,
        values,
    })
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn conformal_report(a: f64) -> std::result::Result<String, JsValue> {
    js(conformal_report_json(a))
}

#[wasm_bindgen]
pub fn epsilon_curve(a: f64, samples: usize) -> std::result::Result<String, JsValue> {
    js(epsilon_curve_json(a, samples))
}

#[wasm_bindgen]
pub fn density_heatmap(a: f64, t: f64, resolution: usize) -> std::result::Result<String, JsValue> {
    js(density_heatmap_json(a, t, resolution))
}
