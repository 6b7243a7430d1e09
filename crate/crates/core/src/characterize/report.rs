use serde::Serialize;

use super::witness::{
    comparison_pairs, condition_v, condition_vi, family_volumes, witness_search, WitnessOutcome,
};
use super::{
    condition_i, condition_ii, condition_iii, condition_iv, CheckOptions, ConditionResult,
    Tolerances, Verdict,
};
use crate::error::Result;
use crate::fields::Coefficient;
use crate::manifolds::{HermitianMetric, SamplingSpec};
use crate::monge_ampere::psh_family;
use crate::presets::AnyMetric;

pub const REPORT_SCHEMA: &str = "hermvol.condition-report/1";
pub const CONVENTION: &str =
    "omega_std = wedge_j(i dz_j ^ dzbar_j); integral 2^n on the unit torus, 1 on a nilmanifold";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conditions {
    pub i: ConditionResult,
    pub ii: ConditionResult,
    pub iii: ConditionResult,
    pub iv: ConditionResult,
    pub v: ConditionResult,
    pub vi: ConditionResult,
}

impl Conditions {
    pub fn labeled(&self) -> [(&'static str, &ConditionResult); 6] {
        [
            ("i", &self.i),
            ("ii", &self.ii),
            ("iii", &self.iii),
            ("iv", &self.iv),
            ("v", &self.v),
            ("vi", &self.vi),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub engine_version: &'static str,
    pub convention: &'static str,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub sampling: SamplingSpec,
    pub weak_trials: usize,
    pub comparison_grids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub schema: &'static str,
    pub model: String,
    pub n: usize,
    pub conditions: Conditions,
    pub witness: WitnessOutcome,
    /// No condition holds exactly while another fails.
    pub consistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inconsistencies: Vec<String>,
    pub metadata: ReportMetadata,
}

fn algebraic<C: Coefficient>(
    g: &HermitianMetric<C>,
    opts: &CheckOptions,
) -> Result<[ConditionResult; 4]> {
    Ok([
        condition_i(g, &opts.tolerances)?,
        condition_ii(g, &opts.tolerances)?,
        condition_iii(g, &opts.tolerances)?,
        condition_iv(g, opts)?,
    ])
}

fn consistency(c: &Conditions) -> Vec<String> {
    let labeled = c.labeled();
    let exact: Vec<&str> = labeled
        .iter()
        .filter(|(l, r)| *l != "v" && r.verdict == Verdict::Holds)
        .map(|(l, _)| *l)
        .collect();
    let fails: Vec<&str> = labeled
        .iter()
        .filter(|(_, r)| r.verdict == Verdict::Fails)
        .map(|(l, _)| *l)
        .collect();
    if exact.is_empty() || fails.is_empty() {
        return Vec::new();
    }
    vec![format!(
        "conditions {} hold exactly while {} fail",
        exact.join(", "),
        fails.join(", ")
    )]
}

/// Evaluates conditions i)–vi) and cross-checks the verdicts.
pub fn equivalence_report(g: &AnyMetric, opts: &CheckOptions) -> Result<ConditionReport> {
    let n = g.n();
    let grids = opts.grids_for(n);
    let (conditions, witness) = match g {
        AnyMetric::Torus(g) => {
            let [i, ii, iii, iv] = algebraic(g, opts)?;
            let witness = witness_search(g, opts)?;
            let family = psh_family(
                g,
                opts.family_size,
                opts.family_band,
                opts.seed,
                &opts.sampling,
            )?;
            let vi = condition_vi(&iii, &witness, family_volumes(g, &family)?);
            let v = if grids.is_empty() {
                ConditionResult::undecided("no comparison grid for this dimension")
            } else {
                let pairs = comparison_pairs(
                    g,
                    opts.comparison_pairs,
                    witness.witness().map(|w| &w.field),
                    opts,
                )?;
                condition_v(g, &pairs, &grids)?
            };
            (
                Conditions {
                    i,
                    ii,
                    iii,
                    iv,
                    v,
                    vi,
                },
                witness,
            )
        }
        AnyMetric::Coframe(g) => {
            let [i, ii, iii, iv] = algebraic(g, opts)?;
            let witness = if iii.verdict == Verdict::Holds {
                WitnessOutcome::NotNeeded
            } else {
                WitnessOutcome::Unsupported {
                    reason: format!("no chart functions on {}", g.model()),
                }
            };
            let vi = condition_vi(&iii, &witness, Vec::new());
            let v = ConditionResult::undecided(format!(
                "sublevel-set integrals need a torus model, got {}",
                g.model()
            ));
            (
                Conditions {
                    i,
                    ii,
                    iii,
                    iv,
                    v,
                    vi,
                },
                witness,
            )
        }
    };
    let inconsistencies = consistency(&conditions);
    Ok(ConditionReport {
        schema: REPORT_SCHEMA,
        model: g.model().to_string(),
        n,
        conditions,
        witness,
        consistent: inconsistencies.is_empty(),
        inconsistencies,
        metadata: ReportMetadata {
            engine_version: env!("CARGO_PKG_VERSION"),
            convention: CONVENTION,
            tolerances: opts.tolerances,
            seed: opts.seed,
            sampling: opts.sampling,
            weak_trials: opts.weak_trials,
            comparison_grids: grids,
        },
    })
}
