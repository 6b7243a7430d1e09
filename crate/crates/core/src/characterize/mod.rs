//! Conditions i)–vi) for volume invariance, their cross-checks and the
//! constructions used to exhibit failures.

mod extraction;
mod remark;
mod report;
mod witness;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::Frame;
use crate::error::Result;
use crate::exterior::Form;
use crate::fields::Coefficient;
use crate::manifolds::{is_weakly_positive_kk, HermitianMetric, ManifoldModel, SamplingSpec};
use crate::monge_ampere::DEFAULT_EPS_MAX;

pub use extraction::theorem1_extraction;
pub use remark::{remark2_identity, Remark2Report};
pub use report::{equivalence_report, ConditionReport, Conditions, ReportMetadata, REPORT_SCHEMA};
pub use witness::{
    comparison_pairs, condition_v, condition_vi, family_volumes, witness_search, Witness,
    WitnessOutcome,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    HoldsOnSamples,
    Fails,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
}

impl Measurement {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Measurement {
            label: label.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub verdict: Verdict,
    /// Largest defect: a coefficient norm, or the worst inequality violation.
    pub defect: f64,
    pub tolerance: f64,
    pub components: Vec<Measurement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Measurement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionResult {
    fn undecided(note: impl Into<String>) -> Self {
        ConditionResult {
            verdict: Verdict::Undecided,
            defect: 0.0,
            tolerance: 0.0,
            components: Vec::new(),
            evidence: Vec::new(),
            notes: vec![note.into()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Defects below `defect_rel · scale(g)` count as zero.
    pub defect_rel: f64,
    /// Smallest volume gap reported as a witness.
    pub witness: f64,
    /// Relative agreement required between a witness gap and its prediction.
    pub prediction_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            defect_rel: 1e-12,
            witness: 1e-6,
            prediction_rel: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            defect_rel: self.defect_rel * factor,
            witness: self.witness * factor,
            prediction_rel: self.prediction_rel * factor,
        }
    }
}

/// Knobs for the sampled parts of the harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckOptions {
    pub sampling: SamplingSpec,
    pub seed: u64,
    pub weak_trials: usize,
    pub tolerances: Tolerances,
    /// Comparison grids per real axis; empty picks a size by dimension.
    pub comparison_grids: Vec<usize>,
    pub comparison_pairs: usize,
    pub family_size: usize,
    pub family_band: u32,
    pub num_eps: usize,
    pub eps_max: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            sampling: SamplingSpec::default(),
            seed: 1,
            weak_trials: 64,
            tolerances: Tolerances::default(),
            comparison_grids: Vec::new(),
            comparison_pairs: 4,
            family_size: 4,
            family_band: 3,
            num_eps: 9,
            eps_max: DEFAULT_EPS_MAX,
        }
    }
}

impl CheckOptions {
    pub fn grids_for(&self, n: usize) -> Vec<usize> {
        if !self.comparison_grids.is_empty() {
            return self.comparison_grids.clone();
        }
        match n {
            1 => vec![64, 128],
            2 => vec![16, 32],
            3 => vec![4, 8],
            _ => Vec::new(),
        }
    }
}

/// Size of `g` for relative defect thresholds: `(1 + 2πB)² · max(1, M)^n`
/// with `M` the largest coefficient norm and `B` the largest Fourier bandwidth.
pub fn defect_scale<C: Coefficient>(g: &Form<C>) -> f64 {
    let m = g.magnitude().max(1.0);
    let b = g
        .terms()
        .filter_map(|(_, _, c)| c.as_fourier().map(|f| f.max_bandwidth()))
        .max()
        .unwrap_or(0) as f64;
    (1.0 + 2.0 * PI * b).powi(2) * m.powi(g.n() as i32)
}

/// `i∂∂̄(g^k)`.
pub fn ddbar_power<C: Coefficient>(frame: &Frame, g: &Form<C>, k: usize) -> Result<Form<C>> {
    let gk = g.power(k)?;
    Ok(frame.del(&frame.delbar(&gk)?)?.scale(I))
}

/// `i∂g ∧ ∂̄g`.
pub fn i_dg_dbarg<C: Coefficient>(frame: &Frame, g: &Form<C>) -> Result<Form<C>> {
    Ok(frame.del(g)?.wedge(&frame.delbar(g)?)?.scale(I))
}

fn algebraic_condition<C: Coefficient>(
    g: &HermitianMetric<C>,
    forms: Vec<(String, Form<C>)>,
    tol: &Tolerances,
) -> ConditionResult {
    let tolerance = tol.defect_rel * defect_scale(g.form());
    let components: Vec<Measurement> = forms
        .iter()
        .map(|(l, f)| Measurement::new(l.clone(), f.magnitude()))
        .collect();
    let defect = components.iter().map(|m| m.value).fold(0.0, f64::max);
    ConditionResult {
        verdict: if defect <= tolerance {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        defect,
        tolerance,
        components,
        evidence: Vec::new(),
        notes: Vec::new(),
    }
}

/// `i∂∂̄g = 0` and `i∂g∧∂̄g = 0`.
pub fn condition_i<C: Coefficient>(
    g: &HermitianMetric<C>,
    tol: &Tolerances,
) -> Result<ConditionResult> {
    let frame = g.model().frame();
    let forms = vec![
        ("i∂∂̄g".to_string(), ddbar_power(frame, g.form(), 1)?),
        ("i∂g∧∂̄g".to_string(), i_dg_dbarg(frame, g.form())?),
    ];
    Ok(algebraic_condition(g, forms, tol))
}

/// `i∂∂̄g = 0` and `i∂∂̄g² = 0`.
pub fn condition_ii<C: Coefficient>(
    g: &HermitianMetric<C>,
    tol: &Tolerances,
) -> Result<ConditionResult> {
    let frame = g.model().frame();
    let forms = vec![
        ("i∂∂̄g".to_string(), ddbar_power(frame, g.form(), 1)?),
        ("i∂∂̄g^2".to_string(), ddbar_power(frame, g.form(), 2)?),
    ];
    Ok(algebraic_condition(g, forms, tol))
}

/// `i∂∂̄g^k = 0` for `k = 1..n-1`.
pub fn condition_iii<C: Coefficient>(
    g: &HermitianMetric<C>,
    tol: &Tolerances,
) -> Result<ConditionResult> {
    let frame = g.model().frame();
    let forms = (1..g.n())
        .map(|k| Ok((format!("i∂∂̄g^{k}"), ddbar_power(frame, g.form(), k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(algebraic_condition(g, forms, tol))
}

/// `i∂∂̄g ≥ 0` and `i∂g∧∂̄g ≥ 0` in the weak sense.
///
/// A negative pairing is a certificate of failure. Forms that vanish within
/// tolerance hold exactly. Otherwise the randomized test found nothing and
/// the verdict stays undecided.
pub fn condition_iv<C: Coefficient>(
    g: &HermitianMetric<C>,
    opts: &CheckOptions,
) -> Result<ConditionResult> {
    let frame = g.model().frame();
    let tolerance = opts.tolerances.defect_rel * defect_scale(g.form());
    let forms = [
        ("i∂∂̄g", ddbar_power(frame, g.form(), 1)?),
        ("i∂g∧∂̄g", i_dg_dbarg(frame, g.form())?),
    ];
    let mut out = ConditionResult {
        verdict: Verdict::Holds,
        defect: 0.0,
        tolerance,
        components: Vec::new(),
        evidence: Vec::new(),
        notes: Vec::new(),
    };
    let mut all_zero = true;
    let mut rejected = false;
    for (t, (label, f)) in forms.iter().enumerate() {
        let mag = f.magnitude();
        out.evidence
            .push(Measurement::new(format!("{label} magnitude"), mag));
        if mag <= tolerance {
            out.components
                .push(Measurement::new(format!("{label} worst pairing"), 0.0));
            continue;
        }
        all_zero = false;
        let r = is_weakly_positive_kk(
            f,
            g.model(),
            opts.weak_trials,
            opts.seed.wrapping_add(t as u64),
            &opts.sampling,
            0.0,
        )?;
        out.components.push(Measurement::new(
            format!("{label} worst pairing"),
            r.worst_pairing,
        ));
        if !r.weakly_positive {
            rejected = true;
            out.defect = out.defect.max(-r.worst_pairing);
        } else if r.statistical {
            out.notes.push(format!(
                "{label}: no negative pairing in {} random trials",
                r.trials
            ));
        }
    }
    out.verdict = if rejected {
        Verdict::Fails
    } else if all_zero {
        Verdict::Holds
    } else {
        Verdict::Undecided
    };
    Ok(out)
}

/// Residual of `i∂∂̄g² = 2(g∧i∂∂̄g + i∂g∧∂̄g)` as a max coefficient norm.
pub fn bridge_identity<C: Coefficient>(frame: &Frame, g: &Form<C>) -> Result<f64> {
    let lhs = ddbar_power(frame, g, 2)?;
    let rhs = g
        .wedge(&ddbar_power(frame, g, 1)?)?
        .try_add(&i_dg_dbarg(frame, g)?)?
        .scale(Complex64::new(2.0, 0.0));
    lhs.residual(&rhs)
}

/// `p_X^* g + p_Y^* h` on `X × Y`.
pub fn product_metric<C: Coefficient>(
    g: &HermitianMetric<C>,
    h: &HermitianMetric<C>,
    spec: &SamplingSpec,
) -> Result<HermitianMetric<C>> {
    let model = ManifoldModel::product(g.model().clone(), h.model().clone())?;
    let form = model
        .pullback_first(g.form())?
        .try_add(&model.pullback_second(h.form())?)?;
    HermitianMetric::with_sampling(form, model, spec)
}
