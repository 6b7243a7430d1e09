use num_complex::Complex64;
use serde::Serialize;

use super::{condition_iii, ddbar_power, CheckOptions, ConditionResult, Measurement, Verdict};
use crate::error::{Error, Result};
use crate::fields::literal::FourierLiteral;
use crate::fields::{Coefficient, FourierField};
use crate::manifolds::{density, HermitianMetric};
use crate::monge_ampere::{
    binomial, comparison_integrals, epsilon_expansion, ma_volume, mixed_term, psh_epsilon0,
    psh_family, ExpansionProbe, PshFunction,
};

/// Fraction of `ε₀` at which witnesses are evaluated.
const WITNESS_FRACTION: f64 = 0.8;

/// A field whose Monge-Ampère volume differs from `∫g^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub source: String,
    pub u: FourierLiteral,
    #[serde(skip)]
    pub field: FourierField,
    /// `ε₀` of the unscaled candidate; `u` is the candidate times `0.8·ε₀`.
    pub epsilon0: f64,
    pub volume: f64,
    pub base_volume: f64,
    /// `ma_volume(g, u) − ∫g^n`.
    pub gap: f64,
    /// `2∫u·i∂∂̄g` for surfaces; `Σ_{k≥1} binom(n,k)∫g^{n-k}∧(i∂∂̄u)^k` otherwise.
    pub predicted_gap: f64,
    pub prediction_rel_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessOutcome {
    /// Condition iii) holds; no witness can exist.
    NotNeeded,
    Found(Witness),
    SearchFailed {
        reason: String,
        best_gap: f64,
    },
    /// The model has no chart functions to search over.
    Unsupported {
        reason: String,
    },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

fn scaled_candidate(
    g: &HermitianMetric<FourierField>,
    u: &FourierField,
    opts: &CheckOptions,
) -> Result<Option<(f64, FourierField)>> {
    let eps = psh_epsilon0(g, u, &opts.sampling, opts.eps_max)?;
    if eps.capped {
        return Ok(None);
    }
    Ok(Some((
        eps.value,
        u.scale(Complex64::new(WITNESS_FRACTION * eps.value, 0.0)),
    )))
}

fn build_witness(
    g: &HermitianMetric<FourierField>,
    source: String,
    epsilon0: f64,
    u: FourierField,
    predicted_gap: f64,
    expansion: Option<ExpansionProbe>,
) -> Result<Witness> {
    let base_volume = g.volume()?;
    let volume = ma_volume(g, &u)?;
    let gap = volume - base_volume;
    let prediction_rel_error =
        (gap - predicted_gap).abs() / predicted_gap.abs().max(f64::MIN_POSITIVE);
    Ok(Witness {
        source,
        u: FourierLiteral::from_field(&u),
        field: u,
        epsilon0,
        volume,
        base_volume,
        gap,
        predicted_gap,
        prediction_rel_error,
        expansion,
    })
}

/// Real part of the `ω_std`-density of `i∂∂̄g^k ∧ g^{n-1-k}`.
fn defect_density(g: &HermitianMetric<FourierField>, k: usize) -> Result<FourierField> {
    let frame = g.model().frame();
    let n = g.n();
    let top = ddbar_power(frame, g.form(), k)?.wedge(&g.form().power(n - 1 - k)?)?;
    Ok(density(&top)?.real_part())
}

/// Looks for `u` with `∫(g + i∂∂̄u)^n ≠ ∫g^n`.
///
/// On surfaces `u` is the density of `i∂∂̄g` itself, so the first-order gap
/// `2∫u·i∂∂̄g` is a positive multiple of `∫u²`. In higher dimension the
/// candidates are the densities of `i∂∂̄g^k ∧ g^{n-1-k}` and a seeded family;
/// each is probed with an ε-expansion and the one with the largest fitted
/// coefficient wins.
pub fn witness_search(
    g: &HermitianMetric<FourierField>,
    opts: &CheckOptions,
) -> Result<WitnessOutcome> {
    if !g.model().is_torus() {
        return Err(Error::Capability(format!(
            "witness search needs a torus model, got {}",
            g.model()
        )));
    }
    let iii = condition_iii(g, &opts.tolerances)?;
    if iii.verdict == Verdict::Holds {
        return Ok(WitnessOutcome::NotNeeded);
    }
    let n = g.n();
    let tol = opts.tolerances.witness;
    if n == 2 {
        let u0 = defect_density(g, 1)?;
        let Some((e0, u)) = scaled_candidate(g, &u0, opts)? else {
            return Ok(WitnessOutcome::SearchFailed {
                reason: "defect density is pluriharmonic".into(),
                best_gap: 0.0,
            });
        };
        let h = ddbar_power(g.model().frame(), g.form(), 1)?;
        let predicted = 2.0 * g.model().integrate_top(&h.mul_field(&u)?)?.re;
        let w = build_witness(g, "defect density i∂∂̄g".into(), e0, u, predicted, None)?;
        return Ok(if w.gap.abs() > tol {
            WitnessOutcome::Found(w)
        } else {
            WitnessOutcome::SearchFailed {
                reason: format!("gap {:e} below witness tolerance", w.gap),
                best_gap: w.gap,
            }
        });
    }

    let mut candidates: Vec<(String, FourierField)> = (1..n)
        .rev()
        .map(|k| {
            Ok((
                format!("defect density i∂∂̄g^{k}∧g^{}", n - 1 - k),
                defect_density(g, k)?,
            ))
        })
        .collect::<Result<_>>()?;
    let family = psh_family(
        g,
        opts.family_size,
        opts.family_band,
        opts.seed,
        &opts.sampling,
    )?;
    candidates.extend(
        family
            .into_iter()
            .enumerate()
            .map(|(i, f)| (format!("family[{i}]"), f.field().clone())),
    );

    let mut best: Option<(f64, String, f64, FourierField, ExpansionProbe)> = None;
    for (label, u0) in candidates {
        let Some((e0, u)) = scaled_candidate(g, &u0, opts)? else {
            continue;
        };
        let probe = match epsilon_expansion(g, &u0, opts.num_eps, &opts.sampling, opts.eps_max) {
            Ok(p) => p,
            Err(Error::Numerical(_)) => continue,
            Err(e) => return Err(e),
        };
        let score = (1..=n)
            .map(|k| probe.fitted[k].abs() * e0.powi(k as i32))
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| score > b.0) {
            best = Some((score, label, e0, u, probe));
        }
    }
    let Some((_, label, e0, u, probe)) = best else {
        return Ok(WitnessOutcome::SearchFailed {
            reason: "no admissible candidate".into(),
            best_gap: 0.0,
        });
    };
    let predicted = (1..=n)
        .map(|k| Ok(binomial(n, k) * mixed_term(g, &u, n - k)?))
        .sum::<Result<f64>>()?;
    let w = build_witness(g, label, e0, u, predicted, Some(probe))?;
    Ok(if w.gap.abs() > tol {
        WitnessOutcome::Found(w)
    } else {
        WitnessOutcome::SearchFailed {
            reason: format!("gap {:e} below witness tolerance", w.gap),
            best_gap: w.gap,
        }
    })
}

/// Seeded pairs `(u, v)` for the comparison inequality, followed by the two
/// pairs `(0, d + C)` and `(d − C, 0)` with `C = max|d| + 1`, which turn the
/// inequality into the volume equality for `d`.
pub fn comparison_pairs(
    g: &HermitianMetric<FourierField>,
    count: usize,
    device: Option<&FourierField>,
    opts: &CheckOptions,
) -> Result<Vec<(String, PshFunction<FourierField>, PshFunction<FourierField>)>> {
    let n = g.n();
    let family = psh_family(
        g,
        2 * count.max(1),
        opts.family_band,
        opts.seed,
        &opts.sampling,
    )?;
    let mut pairs = Vec::new();
    for i in 0..count {
        pairs.push((
            format!("family[{}]<family[{}]", 2 * i, 2 * i + 1),
            family[2 * i].clone(),
            family[2 * i + 1].clone(),
        ));
    }
    let d = device.cloned().unwrap_or_else(|| family[0].field().clone());
    let c = d.magnitude() + 1.0;
    let shift = |s: f64| d.try_add(&FourierField::constant(n, Complex64::new(s, 0.0)));
    let zero = PshFunction::new(g, FourierField::new_zero(n), &opts.sampling)?;
    pairs.push((
        "0<d+C".into(),
        zero.clone(),
        PshFunction::new(g, shift(c)?, &opts.sampling)?,
    ));
    pairs.push((
        "d-C<0".into(),
        PshFunction::new(g, shift(-c)?, &opts.sampling)?,
        zero,
    ));
    Ok(pairs)
}

/// Sampled comparison inequality over `pairs` on each grid in `grids`.
///
/// Pairs with `v ≤ u` identically have an empty domain and hold vacuously.
pub fn condition_v(
    g: &HermitianMetric<FourierField>,
    pairs: &[(String, PshFunction<FourierField>, PshFunction<FourierField>)],
    grids: &[usize],
) -> Result<ConditionResult> {
    let Some(&finest) = grids.iter().max() else {
        return Ok(ConditionResult::undecided(
            "no comparison grid for this dimension",
        ));
    };
    let mut out = ConditionResult {
        verdict: Verdict::HoldsOnSamples,
        defect: 0.0,
        tolerance: 0.0,
        components: Vec::new(),
        evidence: Vec::new(),
        notes: Vec::new(),
    };
    let mut failed = false;
    let mut vacuous = true;
    for (label, u, v) in pairs {
        let w = v.field().try_sub(u.field())?;
        vacuous &= w
            .modes()
            .all(|(k, a)| k.iter().all(|&x| x == 0) && a.re <= 0.0);
        let mut last_violation = f64::INFINITY;
        for &grid in grids {
            let r = comparison_integrals(g, u, v, grid)?;
            if r.violation() > last_violation {
                out.notes.push(format!(
                    "{label}: violation grows from {last_violation:e} to {:e} at N = {grid}",
                    r.violation()
                ));
            }
            last_violation = r.violation();
            if grid == finest {
                let slack = r.allowance() + 1e-10 * r.density_bound;
                out.components
                    .push(Measurement::new(format!("{label} margin"), r.margin));
                out.evidence
                    .push(Measurement::new(format!("{label} allowance"), slack));
                out.defect = out.defect.max(r.violation());
                out.tolerance = out.tolerance.max(slack);
                if r.margin < -slack {
                    failed = true;
                }
            }
        }
    }
    out.verdict = if failed {
        Verdict::Fails
    } else if vacuous {
        Verdict::Holds
    } else {
        Verdict::HoldsOnSamples
    };
    Ok(out)
}

/// `∫(g + i∂∂̄u)^n` relative to `∫g^n` over a sample family.
pub fn family_volumes(
    g: &HermitianMetric<FourierField>,
    family: &[PshFunction<FourierField>],
) -> Result<Vec<Measurement>> {
    let base = g.volume()?;
    family
        .iter()
        .enumerate()
        .map(|(i, u)| {
            Ok(Measurement::new(
                format!("family[{i}] relative deviation"),
                (ma_volume(g, u.field())? - base) / base,
            ))
        })
        .collect()
}

/// Volume invariance: exact when iii) holds, refuted by a witness, and
/// otherwise undecided with the sampled family attached.
pub fn condition_vi(
    iii: &ConditionResult,
    witness: &WitnessOutcome,
    evidence: Vec<Measurement>,
) -> ConditionResult {
    let sampled = evidence.iter().map(|m| m.value.abs()).fold(0.0, f64::max);
    let mut out = ConditionResult {
        verdict: Verdict::Undecided,
        defect: sampled,
        tolerance: 0.0,
        components: Vec::new(),
        evidence,
        notes: Vec::new(),
    };
    if let Some(w) = witness.witness() {
        out.verdict = Verdict::Fails;
        out.defect = w.gap.abs();
        out.components.push(Measurement::new("witness gap", w.gap));
    } else if iii.verdict == Verdict::Holds {
        out.verdict = Verdict::Holds;
        out.notes.push("exact route through iii)".into());
    } else if let WitnessOutcome::SearchFailed { reason, .. } = witness {
        out.notes.push(format!("witness search failed: {reason}"));
    }
    out
}
