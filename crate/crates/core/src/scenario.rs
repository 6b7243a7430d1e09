//! Scenario configs, the check runner and CSV tables.
//!
//! A run is a pure function of the config: the JSON report carries no clock
//! readings, and wall-clock times are returned separately.

use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characterize::{
    comparison_pairs, condition_iii, condition_v, equivalence_report, remark2_identity,
    witness_search, CheckOptions, ConditionReport, ConditionResult, Remark2Report, Tolerances,
    Verdict, WitnessOutcome,
};
use crate::error::{Error, Result};
use crate::fields::literal::FourierLiteral;
use crate::fields::{Coefficient, FourierField};
use crate::manifolds::{HermitianMetric, ManifoldModel, ModelKind, SamplingSpec};
use crate::monge_ampere::{
    comparison_integrals, epsilon_expansion, mixed_term, polarized_mixed_term, psh_family,
    threefold_decomposition, ComparisonResult, ExpansionProbe, ThreefoldReport, DEFAULT_EPS_MAX,
};
use crate::presets::{AnyMetric, MetricSpec};

pub const SCENARIO_SCHEMA: &str = "hermvol.scenario/1";
pub const RUN_REPORT_SCHEMA: &str = "hermvol.run-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Conditions,
    Expansion,
    Polarization,
    Comparison,
    Threefold,
    Remark2,
    Witness,
    Product,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::Conditions,
        CheckName::Expansion,
        CheckName::Polarization,
        CheckName::Comparison,
        CheckName::Threefold,
        CheckName::Remark2,
        CheckName::Witness,
        CheckName::Product,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Conditions => "conditions",
            CheckName::Expansion => "expansion",
            CheckName::Polarization => "polarization",
            CheckName::Comparison => "comparison",
            CheckName::Threefold => "threefold",
            CheckName::Remark2 => "remark2",
            CheckName::Witness => "witness",
            CheckName::Product => "product",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == name)
            .ok_or_else(|| Error::Config(format!("unknown check '{name}'")))
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "both" => Ok(OutputFormat::Both),
            _ => Err(Error::Config(format!(
                "unknown output format '{s}' (json, csv or both)"
            ))),
        }
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub dir: Option<String>,
    pub format: OutputFormat,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            dir: None,
            format: OutputFormat::Json,
        }
    }
}

/// Settings for the sampled checks; every value is echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Harness {
    pub weak_trials: usize,
    /// Comparison grids per real axis; empty picks a size by dimension.
    pub comparison_grids: Vec<usize>,
    pub comparison_pairs: usize,
    pub family_size: usize,
    pub family_band: u32,
    pub num_eps: usize,
    pub eps_max: f64,
    pub bandwidth_cap: Option<u32>,
}

impl Default for Harness {
    fn default() -> Self {
        let d = CheckOptions::default();
        Harness {
            weak_trials: d.weak_trials,
            comparison_grids: d.comparison_grids,
            comparison_pairs: d.comparison_pairs,
            family_size: d.family_size,
            family_band: d.family_band,
            num_eps: d.num_eps,
            eps_max: DEFAULT_EPS_MAX,
            bandwidth_cap: None,
        }
    }
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: String,
    pub model: String,
    pub metric: MetricSpec,
    #[serde(default)]
    pub checks: Vec<CheckName>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub harness: Harness,
    /// Explicit test functions; when empty a seeded family is drawn.
    #[serde(default)]
    pub fields: Vec<FourierLiteral>,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ScenarioConfig {
    pub fn new(model: &str, metric: MetricSpec, checks: Vec<CheckName>) -> Self {
        ScenarioConfig {
            schema: SCENARIO_SCHEMA.into(),
            model: model.into(),
            metric,
            checks,
            seed: default_seed(),
            sampling: SamplingSpec::default(),
            tolerances: Tolerances::default(),
            harness: Harness::default(),
            fields: Vec::new(),
            outputs: Outputs::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::Config(format!(
                "schema '{}' is not '{SCENARIO_SCHEMA}'",
                self.schema
            )));
        }
        if self.sampling.grid == 0 && self.sampling.random == 0 {
            return Err(Error::Config("sampling spec has no points".into()));
        }
        if self.harness.comparison_grids.contains(&0) {
            return Err(Error::Config("comparison grids must be positive".into()));
        }
        Ok(())
    }

    pub fn options(&self) -> CheckOptions {
        let h = &self.harness;
        CheckOptions {
            sampling: self.sampling,
            seed: self.seed,
            weak_trials: h.weak_trials,
            tolerances: self.tolerances,
            comparison_grids: h.comparison_grids.clone(),
            comparison_pairs: h.comparison_pairs,
            family_size: h.family_size,
            family_band: h.family_band,
            num_eps: h.num_eps,
            eps_max: h.eps_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionRecord {
    pub field: usize,
    pub probe: ExpansionProbe,
    /// `∫ g^k ∧ (i∂∂̄u)^{n-k}` for `k = 0..n`.
    pub mixed_terms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarizationRecord {
    /// Power of `g`; the term takes `n - k` fields.
    pub k: usize,
    pub value: f64,
    pub reversed: f64,
    pub symmetry_residual: f64,
    pub linearity_residual: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub pair: String,
    pub results: Vec<ComparisonResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductRecord {
    pub first_iii: ConditionResult,
    /// Largest coefficient of `dh` for the second factor.
    pub second_closed_defect: f64,
    pub product_iii: ConditionResult,
    /// iii) for the first factor and a closed second factor give iii) on the product.
    pub implication_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CheckOutcome {
    Conditions {
        report: ConditionReport,
    },
    Expansion {
        records: Vec<ExpansionRecord>,
    },
    Polarization {
        records: Vec<PolarizationRecord>,
    },
    Comparison {
        condition: ConditionResult,
        records: Vec<ComparisonRecord>,
    },
    Threefold {
        records: Vec<ThreefoldReport>,
    },
    Remark2 {
        report: Remark2Report,
    },
    Witness {
        outcome: WitnessOutcome,
    },
    Product {
        record: ProductRecord,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub engine_version: &'static str,
    pub config: ScenarioConfig,
    pub results: Vec<CheckOutcome>,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inconsistencies: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Numerical(format!("report serialization: {e}")))
    }
}

/// Wall-clock seconds per check, kept out of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub checks: Vec<(String, f64)>,
}

fn capped(g: AnyMetric, cap: Option<u32>, spec: &SamplingSpec) -> Result<AnyMetric> {
    let (Some(cap), AnyMetric::Torus(g)) = (cap, &g) else {
        return Ok(g);
    };
    let form = g
        .form()
        .map_coefficients(|f: &FourierField| f.clone().with_cap(cap))?;
    Ok(AnyMetric::Torus(HermitianMetric::with_sampling(
        form,
        g.model().clone(),
        spec,
    )?))
}

fn torus_only(g: &AnyMetric, check: CheckName) -> Result<&HermitianMetric<FourierField>> {
    g.as_torus().ok_or_else(|| {
        Error::Capability(format!(
            "check '{check}' needs a torus model, got {}",
            g.model()
        ))
    })
}

fn test_fields(
    cfg: &ScenarioConfig,
    g: &HermitianMetric<FourierField>,
    opts: &CheckOptions,
) -> Result<Vec<FourierField>> {
    let n = g.n();
    let mut fields: Vec<FourierField> = if cfg.fields.is_empty() {
        psh_family(
            g,
            opts.family_size.max(1),
            opts.family_band,
            opts.seed,
            &opts.sampling,
        )?
        .into_iter()
        .map(|u| u.field().clone())
        .collect()
    } else {
        cfg.fields
            .iter()
            .map(|lit| {
                if lit.n != n {
                    return Err(Error::DimensionMismatch(n, lit.n));
                }
                lit.to_field()
            })
            .collect::<Result<_>>()?
    };
    if let Some(cap) = cfg.harness.bandwidth_cap {
        fields = fields
            .into_iter()
            .map(|f| f.with_cap(cap))
            .collect::<Result<_>>()?;
    }
    Ok(fields)
}

fn polarization(
    g: &HermitianMetric<FourierField>,
    fields: &[FourierField],
) -> Result<Vec<PolarizationRecord>> {
    let n = g.n();
    let pick = |i: usize| fields[i % fields.len()].clone();
    (0..n)
        .map(|k| {
            let m = n - k;
            let us: Vec<FourierField> = (0..m).map(pick).collect();
            let value = polarized_mixed_term(g, &us, k)?;
            let rev: Vec<FourierField> = us.iter().rev().cloned().collect();
            let reversed = polarized_mixed_term(g, &rev, k)?;
            let other = pick(m);
            let (a, b) = (Complex64::new(2.0, 0.0), Complex64::new(-3.0, 0.0));
            let mut mixed = us.clone();
            mixed[0] = us[0].scale(a).try_add(&other.scale(b))?;
            let mut swapped = us.clone();
            swapped[0] = other;
            let combined = polarized_mixed_term(g, &mixed, k)?;
            let separate = 2.0 * value - 3.0 * polarized_mixed_term(g, &swapped, k)?;
            let scale = value
                .abs()
                .max(reversed.abs())
                .max(combined.abs())
                .max(separate.abs());
            Ok(PolarizationRecord {
                k,
                value,
                reversed,
                symmetry_residual: (value - reversed).abs(),
                linearity_residual: (combined - separate).abs(),
                scale,
            })
        })
        .collect()
}

fn product_check(
    cfg: &ScenarioConfig,
    model: &ManifoldModel,
    opts: &CheckOptions,
) -> Result<ProductRecord> {
    let (MetricSpec::Product { first, second }, ModelKind::Product(x, y)) =
        (&cfg.metric, model.kind())
    else {
        return Err(Error::Capability(
            "check 'product' needs a product model and a product metric".into(),
        ));
    };
    let tol = &opts.tolerances;
    let a = first.build(x, &opts.sampling)?;
    let b = second.build(y, &opts.sampling)?;
    let (first_iii, second_closed_defect, product_iii) = match (&a, &b) {
        (AnyMetric::Torus(a), AnyMetric::Torus(b)) => {
            let p = crate::characterize::product_metric(a, b, &opts.sampling)?;
            (
                condition_iii(a, tol)?,
                b.model().frame().exterior_d(b.form())?.magnitude(),
                condition_iii(&p, tol)?,
            )
        }
        (AnyMetric::Coframe(a), AnyMetric::Coframe(b)) => {
            let p = crate::characterize::product_metric(a, b, &opts.sampling)?;
            (
                condition_iii(a, tol)?,
                b.model().frame().exterior_d(b.form())?.magnitude(),
                condition_iii(&p, tol)?,
            )
        }
        _ => {
            return Err(Error::Capability(
                "product factors use different backends".into(),
            ))
        }
    };
    let closed = second_closed_defect <= product_iii.tolerance;
    let implication_holds =
        !(first_iii.verdict == Verdict::Holds && closed) || product_iii.verdict == Verdict::Holds;
    Ok(ProductRecord {
        first_iii,
        second_closed_defect,
        product_iii,
        implication_holds,
    })
}

fn run_check(
    check: CheckName,
    cfg: &ScenarioConfig,
    g: &AnyMetric,
    opts: &CheckOptions,
) -> Result<(CheckOutcome, Vec<String>)> {
    let n = g.n();
    let mut issues = Vec::new();
    let outcome = match check {
        CheckName::Conditions => {
            let report = equivalence_report(g, opts)?;
            issues.extend(report.inconsistencies.iter().cloned());
            CheckOutcome::Conditions { report }
        }
        CheckName::Expansion => {
            let t = torus_only(g, check)?;
            let records = test_fields(cfg, t, opts)?
                .iter()
                .enumerate()
                .map(|(i, u)| {
                    let probe =
                        epsilon_expansion(t, u, opts.num_eps, &opts.sampling, opts.eps_max)?;
                    let mixed_terms = (0..=n)
                        .map(|k| mixed_term(t, u, k))
                        .collect::<Result<_>>()?;
                    Ok(ExpansionRecord {
                        field: i,
                        probe,
                        mixed_terms,
                    })
                })
                .collect::<Result<_>>()?;
            CheckOutcome::Expansion { records }
        }
        CheckName::Polarization => {
            let t = torus_only(g, check)?;
            CheckOutcome::Polarization {
                records: polarization(t, &test_fields(cfg, t, opts)?)?,
            }
        }
        CheckName::Comparison => {
            let t = torus_only(g, check)?;
            let grids = opts.grids_for(n);
            let pairs = comparison_pairs(t, opts.comparison_pairs, None, opts)?;
            let condition = condition_v(t, &pairs, &grids)?;
            let records = pairs
                .iter()
                .map(|(label, u, v)| {
                    let results = grids
                        .iter()
                        .map(|&m| comparison_integrals(t, u, v, m))
                        .collect::<Result<_>>()?;
                    Ok(ComparisonRecord {
                        pair: label.clone(),
                        results,
                    })
                })
                .collect::<Result<_>>()?;
            CheckOutcome::Comparison { condition, records }
        }
        CheckName::Threefold => {
            let t = torus_only(g, check)?;
            let records: Vec<ThreefoldReport> = test_fields(cfg, t, opts)?
                .iter()
                .map(|u| threefold_decomposition(t, u, &opts.sampling))
                .collect::<Result<_>>()?;
            for (i, r) in records.iter().enumerate() {
                if !r.passes() {
                    issues.push(format!("threefold decomposition {i} breaks an identity"));
                }
            }
            CheckOutcome::Threefold { records }
        }
        CheckName::Remark2 => {
            let report = match g {
                AnyMetric::Torus(t) => remark2_identity(t, &opts.tolerances)?,
                AnyMetric::Coframe(c) => remark2_identity(c, &opts.tolerances)?,
            };
            if !report.passes() {
                issues.push("d(i g^{n-2}∧∂̄g) identity violated".into());
            }
            CheckOutcome::Remark2 { report }
        }
        CheckName::Witness => {
            let t = torus_only(g, check)?;
            let outcome = witness_search(t, opts)?;
            if let WitnessOutcome::Found(w) = &outcome {
                if condition_iii(t, &opts.tolerances)?.verdict == Verdict::Holds {
                    issues.push("witness found although iii) holds".into());
                }
                if n == 2 && w.prediction_rel_error > opts.tolerances.prediction_rel {
                    issues.push(format!(
                        "witness gap misses 2∫u·i∂∂̄g by {:e}",
                        w.prediction_rel_error
                    ));
                }
            }
            CheckOutcome::Witness { outcome }
        }
        CheckName::Product => {
            let record = product_check(cfg, g.model(), opts)?;
            if !record.implication_holds {
                issues.push("product of iii) metric with a closed metric fails iii)".into());
            }
            CheckOutcome::Product { record }
        }
    };
    Ok((outcome, issues))
}

/// Executes the configured checks in order.
pub fn run(cfg: &ScenarioConfig) -> Result<(RunReport, Timings)> {
    cfg.validate()?;
    let opts = cfg.options();
    let model = ManifoldModel::from_name(&cfg.model)?;
    let g = capped(
        cfg.metric.build(&model, &opts.sampling)?,
        cfg.harness.bandwidth_cap,
        &opts.sampling,
    )?;
    let mut results = Vec::with_capacity(cfg.checks.len());
    let mut inconsistencies = Vec::new();
    let mut timings = Vec::with_capacity(cfg.checks.len());
    for &check in &cfg.checks {
        let start = Instant::now();
        let (outcome, issues) = run_check(check, cfg, &g, &opts)?;
        timings.push((check.to_string(), start.elapsed().as_secs_f64()));
        inconsistencies.extend(issues.into_iter().map(|s| format!("{check}: {s}")));
        results.push(outcome);
    }
    let report = RunReport {
        schema: RUN_REPORT_SCHEMA,
        engine_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        results,
        consistent: inconsistencies.is_empty(),
        inconsistencies,
    };
    Ok((report, Timings { checks: timings }))
}

pub const EXPANSION_HEADER: &str = "field,k,fitted,direct,relative_error";
pub const MIXED_TERMS_HEADER: &str = "field,k,value";
pub const THREEFOLD_HEADER: &str =
    "field,t0,t1,t2,t3,volume,t2_by_parts,stokes_residual,reassembly_residual,by_parts_residual";

/// CSV tables `(file name, contents)`; files without rows keep their header.
pub fn tables(report: &RunReport) -> Vec<(&'static str, String)> {
    let mut expansion = format!("{EXPANSION_HEADER}\n");
    let mut mixed = format!("{MIXED_TERMS_HEADER}\n");
    let mut threefold = format!("{THREEFOLD_HEADER}\n");
    for outcome in &report.results {
        match outcome {
            CheckOutcome::Expansion { records } => {
                for r in records {
                    for k in 0..r.probe.fitted.len() {
                        expansion.push_str(&format!(
                            "{},{k},{:?},{:?},{:?}\n",
                            r.field,
                            r.probe.fitted[k],
                            r.probe.direct[k],
                            r.probe.relative_errors[k]
                        ));
                    }
                    for (k, v) in r.mixed_terms.iter().enumerate() {
                        mixed.push_str(&format!("{},{k},{v:?}\n", r.field));
                    }
                }
            }
            CheckOutcome::Threefold { records } => {
                for (i, r) in records.iter().enumerate() {
                    threefold.push_str(&format!(
                        "{i},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}\n",
                        r.t0,
                        r.t1,
                        r.t2,
                        r.t3,
                        r.volume,
                        r.t2_by_parts,
                        r.stokes_residual,
                        r.reassembly_residual,
                        r.by_parts_residual
                    ));
                }
            }
            _ => {}
        }
    }
    vec![
        ("expansion.csv", expansion),
        ("mixed_terms.csv", mixed),
        ("threefold.csv", threefold),
    ]
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes `report.json`, `timings.json` and the CSV tables into `dir`.
pub fn emit(report: &RunReport, timings: &Timings, dir: &Path, format: OutputFormat) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    if format.json() {
        let path = dir.join("report.json");
        fs::write(&path, report.to_json()? + "\n").map_err(|e| io_error(&path, e))?;
        let path = dir.join("timings.json");
        let text =
            serde_json::to_string_pretty(timings).map_err(|e| Error::Numerical(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    }
    if format.csv() {
        for (name, text) in tables(report) {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        ScenarioConfig::from_toml(text).unwrap()
    }

    #[test]
    fn config_parsing_and_rejections() {
        let c = cfg(r#"
            schema = "hermvol.scenario/1"
            model = "torus2"
            metric = { preset = "conformal", a = 0.5 }
            checks = ["conditions", "witness"]
        "#);
        assert_eq!(c.checks, vec![CheckName::Conditions, CheckName::Witness]);
        assert_eq!(c.metric, MetricSpec::Conformal { a: 0.5 });
        let bad = [
            "schema = \"hermvol.scenario/1\"\nmodel = \"torus2\"\nmetric = { preset = \"flat\" }\ncolour = 1",
            "schema = \"hermvol.scenario/9\"\nmodel = \"torus2\"\nmetric = { preset = \"flat\" }",
            "schema = \"hermvol.scenario/1\"\nmodel = \"torus2\"\nmetric = { preset = \"flat\" }\nchecks = [\"bogus\"]",
            "schema = \"hermvol.scenario/1\"\nmodel = \"torus2\"\nmetric = { preset = \"flat\" }\n[harness]\nthreads = 2",
        ];
        for text in bad {
            assert!(
                matches!(ScenarioConfig::from_toml(text), Err(Error::Config(_))),
                "{text}"
            );
        }
        assert_eq!(CheckName::parse("remark2").unwrap(), CheckName::Remark2);
        assert!(CheckName::parse("nope").is_err());
    }

    #[test]
    fn flat_expansion_tables() {
        let mut c = ScenarioConfig::new("torus2", MetricSpec::Flat {}, vec![CheckName::Expansion]);
        c.harness.family_size = 1;
        let (report, _) = run(&c).unwrap();
        assert!(report.consistent);
        let t = tables(&report);
        let rows: Vec<Vec<f64>> = t[0]
            .1
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        assert!((rows[0][2] - 8.0).abs() < 1e-12);
        for r in &rows[1..] {
            assert!(r[2].abs() < 1e-9);
            assert_eq!(r[3], 0.0);
        }
    }

    #[test]
    fn empty_check_list_gives_headers_only() {
        let c = ScenarioConfig::new("torus2", MetricSpec::Flat {}, Vec::new());
        let (report, timings) = run(&c).unwrap();
        assert!(report.results.is_empty() && timings.checks.is_empty());
        for (_, text) in tables(&report) {
            assert_eq!(text.lines().count(), 1);
        }
    }

    #[test]
    fn capability_and_bandwidth_errors() {
        let c = ScenarioConfig::new(
            "iwasawa",
            MetricSpec::IwasawaStandard {},
            vec![CheckName::Expansion],
        );
        assert!(matches!(run(&c), Err(Error::Capability(_))));
        let mut c = ScenarioConfig::new(
            "torus3",
            MetricSpec::Conformal { a: 0.5 },
            vec![CheckName::Conditions],
        );
        c.harness.bandwidth_cap = Some(1);
        assert!(matches!(run(&c), Err(Error::BandwidthOverflow { .. })));
    }

    #[test]
    fn remark2_and_product_checks() {
        let c = ScenarioConfig::new(
            "iwasawa",
            MetricSpec::IwasawaStandard {},
            vec![CheckName::Remark2],
        );
        assert!(run(&c).unwrap().0.consistent);
        let c = ScenarioConfig::new(
            "product(torus2,torus1)",
            MetricSpec::from_name("product(gauduchon,flat)").unwrap(),
            vec![CheckName::Product],
        );
        let (report, _) = run(&c).unwrap();
        let CheckOutcome::Product { record } = &report.results[0] else {
            panic!()
        };
        assert_eq!(record.product_iii.verdict, Verdict::Holds);
        assert!(record.implication_holds);
    }
}
