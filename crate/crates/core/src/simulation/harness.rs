//! Operating characteristics over simulation replicates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::generate_dataset;
use super::scenario::ScenarioConfig;
use super::truth::{analytic_truth, true_value_oracle, OracleScale};
use crate::augmentation::{augmented_contrast, AugmentationOptions};
use crate::error::{Error, Result};
use crate::inference::{contrast, ContrastKind, ContrastOptions, ContrastResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Unadjusted,
    Adjusted,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Unadjusted => "unadjusted",
            Method::Adjusted => "adjusted",
        }
    }
}

/// Where the true contrast value for bias and coverage comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthSource {
    Analytic,
    MonteCarlo(OracleScale),
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessOptions {
    pub methods: Vec<Method>,
    pub kind: ContrastKind,
    pub truth: TruthSource,
    pub parallel: bool,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            methods: vec![Method::Unadjusted],
            kind: ContrastKind::Difference,
            truth: TruthSource::Analytic,
            parallel: true,
        }
    }
}

/// Summary of one method across replicates. Each statistic is paired with
/// its Monte Carlo standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub replicates: usize,
    /// Replicates where the method could not be computed.
    pub failures: usize,
    pub mean_estimate: f64,
    pub bias: f64,
    pub bias_mcse: f64,
    pub ese: f64,
    pub ese_mcse: f64,
    pub ase: f64,
    pub ase_mcse: f64,
    pub rejection_rate: f64,
    pub rejection_mcse: f64,
    pub coverage: f64,
    pub coverage_mcse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingCharacteristics {
    pub scenario: ScenarioConfig,
    pub kind: ContrastKind,
    pub truth: f64,
    pub truth_source: TruthSource,
    pub replicates: usize,
    pub methods: Vec<MethodSummary>,
}

impl OperatingCharacteristics {
    pub const CSV_HEADER: &'static str = "method,metric,value,mcse";

    pub fn method(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }

    /// `(ESE_unadj / ESE_adj)²`, when both methods were run.
    pub fn relative_efficiency(&self) -> Option<f64> {
        let u = self.method(Method::Unadjusted)?;
        let a = self.method(Method::Adjusted)?;
        Some((u.ese / a.ese).powi(2))
    }

    /// One row per method and metric.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for m in &self.methods {
            let rows: [(&str, f64, f64); 8] = [
                ("bias", m.bias, m.bias_mcse),
                ("ese", m.ese, m.ese_mcse),
                ("ase", m.ase, m.ase_mcse),
                ("rejection_rate", m.rejection_rate, m.rejection_mcse),
                ("coverage", m.coverage, m.coverage_mcse),
                ("mean_estimate", m.mean_estimate, m.bias_mcse),
                ("replicates", m.replicates as f64, 0.0),
                ("failures", m.failures as f64, 0.0),
            ];
            for (metric, value, mcse) in rows {
                out.push_str(&format!("{},{metric},{value},{mcse}\n", m.method.as_str()));
            }
        }
        out
    }
}

fn resolve_truth(config: &ScenarioConfig, kind: ContrastKind, source: TruthSource) -> f64 {
    let values = match source {
        TruthSource::Fixed(v) => return v,
        TruthSource::Analytic => analytic_truth(config),
        TruthSource::MonteCarlo(scale) => true_value_oracle(config, scale).0,
    };
    match kind {
        ContrastKind::Difference => values.difference(),
        ContrastKind::Ratio => values.ratio(),
    }
}

type ReplicateOutcome = Vec<Option<ContrastResult>>;

fn run_replicate(config: &ScenarioConfig, opts: &HarnessOptions, replicate: u64) -> ReplicateOutcome {
    let study = generate_dataset(config, replicate);
    let copts = ContrastOptions::with_alpha(config.alpha);
    let unadjusted = contrast(&study, opts.kind, &copts).ok();
    let adjusted = if opts.methods.contains(&Method::Adjusted) {
        let aopts = AugmentationOptions {
            contrast: copts,
            ridge: None,
        };
        augmented_contrast(&study, &aopts, &["w".to_string()])
            .ok()
            .map(|r| r.adjusted)
    } else {
        None
    };
    opts.methods
        .iter()
        .map(|m| match m {
            Method::Unadjusted => unadjusted.clone(),
            Method::Adjusted => adjusted.clone(),
        })
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn proportion(hits: usize, n: usize) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

fn summarize(method: Method, results: &[Option<&ContrastResult>], truth: f64) -> MethodSummary {
    let ok: Vec<&ContrastResult> = results.iter().flatten().copied().collect();
    let r = ok.len();
    let points: Vec<f64> = ok.iter().map(|c| c.point).collect();
    let ses: Vec<f64> = ok.iter().map(|c| c.se).collect();
    let mean_estimate = mean(&points);
    let ese = sample_sd(&points);
    let (rejection_rate, rejection_mcse) = proportion(ok.iter().filter(|c| c.rejects()).count(), r);
    let (coverage, coverage_mcse) = proportion(ok.iter().filter(|c| c.covers(truth)).count(), r);
    let rf = r as f64;
    MethodSummary {
        method,
        replicates: r,
        failures: results.len() - r,
        mean_estimate,
        bias: mean_estimate - truth,
        bias_mcse: ese / rf.sqrt(),
        ese,
        ese_mcse: if r > 1 { ese / (2.0 * (rf - 1.0)).sqrt() } else { 0.0 },
        ase: mean(&ses),
        ase_mcse: sample_sd(&ses) / rf.sqrt(),
        rejection_rate,
        rejection_mcse,
        coverage,
        coverage_mcse,
    }
}

/// Generates `config.replicates` datasets, applies each method, and
/// summarizes bias, ESE, ASE, rejection rate and coverage. Replicates may
/// run concurrently; results are aggregated in replicate order so the
/// output does not depend on scheduling.
pub fn run_operating_characteristics(
    config: &ScenarioConfig,
    opts: &HarnessOptions,
) -> Result<OperatingCharacteristics> {
    config.validate()?;
    if config.replicates < 2 {
        return Err(Error::Config("replicates: must be at least 2".into()));
    }
    if opts.methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    if opts.methods.contains(&Method::Adjusted) {
        if !config.has_covariate() {
            return Err(Error::Config(
                "the adjusted method needs a covariate (covariate.mode)".into(),
            ));
        }
        if opts.kind != ContrastKind::Difference {
            return Err(Error::Config(
                "the adjusted method is only defined for the difference contrast".into(),
            ));
        }
    }
    let truth = resolve_truth(config, opts.kind, opts.truth);
    let reps = config.replicates as u64;
    let outcomes: Vec<ReplicateOutcome> = if opts.parallel {
        (0..reps).into_par_iter().map(|r| run_replicate(config, opts, r)).collect()
    } else {
        (0..reps).map(|r| run_replicate(config, opts, r)).collect()
    };
    let methods = opts
        .methods
        .iter()
        .enumerate()
        .map(|(k, &m)| {
            let column: Vec<Option<&ContrastResult>> = outcomes.iter().map(|o| o[k].as_ref()).collect();
            summarize(m, &column, truth)
        })
        .collect();
    Ok(OperatingCharacteristics {
        scenario: config.clone(),
        kind: opts.kind,
        truth,
        truth_source: opts.truth,
        replicates: config.replicates,
        methods,
    })
}

/// Reruns the harness with arm 2's death rate set to each value of the
/// grid. Bias and coverage are measured against a null difference of 0, so
/// the reported bias is the distortion caused by unequal survival.
pub fn survival_bias_sensitivity(
    base: &ScenarioConfig,
    death_rates_arm2: &[f64],
    parallel: bool,
) -> Result<Vec<(f64, OperatingCharacteristics)>> {
    let opts = HarnessOptions {
        truth: TruthSource::Fixed(0.0),
        parallel,
        ..HarnessOptions::default()
    };
    death_rates_arm2
        .iter()
        .map(|&rate| {
            let mut cfg = base.clone();
            cfg.arm2.death_rate = rate;
            run_operating_characteristics(&cfg, &opts).map(|oc| (rate, oc))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::scenario::{CovariateMode, Hypothesis, ScenarioKind};

    fn small() -> ScenarioConfig {
        let mut cfg = ScenarioConfig::published(ScenarioKind::Icr, Hypothesis::Null, 1.0)
            .with_replicates(2)
            .with_seed(3);
        cfg.n_per_arm = 30;
        cfg
    }

    #[test]
    fn two_replicates_arithmetic() {
        let cfg = small();
        let oc = run_operating_characteristics(&cfg, &HarnessOptions::default()).unwrap();
        let a = generate_dataset(&cfg, 0);
        let b = generate_dataset(&cfg, 1);
        let copts = ContrastOptions::default();
        let pa = contrast(&a, ContrastKind::Difference, &copts).unwrap().point;
        let pb = contrast(&b, ContrastKind::Difference, &copts).unwrap().point;
        let m = &oc.methods[0];
        assert_eq!(m.replicates, 2);
        assert!((m.mean_estimate - (pa + pb) / 2.0).abs() < 1e-15);
        assert!((m.ese - (pa - pb).abs() / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(oc.truth, 0.0);
    }

    #[test]
    fn parallel_equals_serial_and_csv() {
        let cfg = small().with_replicates(16).with_covariate(CovariateMode::Informative);
        let mut opts = HarnessOptions {
            methods: vec![Method::Unadjusted, Method::Adjusted],
            ..HarnessOptions::default()
        };
        let par = run_operating_characteristics(&cfg, &opts).unwrap();
        opts.parallel = false;
        let ser = run_operating_characteristics(&cfg, &opts).unwrap();
        assert_eq!(par, ser);
        let csv = par.to_csv();
        assert!(csv.starts_with("method,metric,value,mcse\n"));
        assert!(csv.contains("adjusted,coverage,"));
        assert!(par.relative_efficiency().is_some());
    }

    #[test]
    fn adjusted_requires_covariate() {
        let opts = HarnessOptions {
            methods: vec![Method::Adjusted],
            ..HarnessOptions::default()
        };
        let err = run_operating_characteristics(&small(), &opts).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
