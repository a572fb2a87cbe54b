use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use aumcf::simulation::{run_operating_characteristics, HarnessOptions, Method, ScenarioConfig, TruthSource};
use aumcf::{
    augmented_contrast, contrast, estimate_arm, ghosh_lin_q, group_records, km_survival, mcf_with,
    read_records_csv, validate_arms_truncation, weighted_contrast, Arm, ArmDataset,
    AugmentationOptions, ContrastKind, ContrastOptions, ContrastResult, CsvLayout,
    EstimatorOptions, StudyDataset, SurvivalContinuity,
};
use serde::Serialize;

use crate::output::{csv_report, emit, json_report, sha256_hex, CliError, Provenance};
use crate::{AnalysisArgs, ContinuityArg, ContrastArg, Format, SimulateArgs};

struct Loaded {
    layout: CsvLayout,
    arms: BTreeMap<Arm, ArmDataset>,
    provenance: Provenance,
    warnings: Vec<String>,
}

fn continuity(arg: ContinuityArg) -> SurvivalContinuity {
    match arg {
        ContinuityArg::LeftLimit => SurvivalContinuity::LeftLimit,
        ContinuityArg::RightContinuous => SurvivalContinuity::RightContinuous,
    }
}

fn kind(arg: ContrastArg) -> ContrastKind {
    match arg {
        ContrastArg::Diff => ContrastKind::Difference,
        ContrastArg::Ratio => ContrastKind::Ratio,
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn load(args: &AnalysisArgs, command: &'static str) -> Result<Loaded, CliError> {
    if !(args.tau.is_finite() && args.tau > 0.0) {
        return Err(aumcf::Error::InvalidTau(args.tau).into());
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(aumcf::Error::InvalidAlpha(args.alpha).into());
    }
    let bytes = read_file(&args.input)?;
    let (layout, records) = read_records_csv(bytes.as_slice())?;
    let arms = group_records(&records)?;
    let report = validate_arms_truncation(arms.values(), args.tau, args.strict_tau)?;
    let provenance = Provenance::new(command)
        .with("input_sha256", sha256_hex(&bytes))
        .with("tau", args.tau)
        .with("alpha", args.alpha)
        .with("continuity", continuity(args.continuity).as_str())
        .with("strict_tau", args.strict_tau);
    Ok(Loaded {
        layout,
        arms,
        provenance,
        warnings: report.messages(args.tau),
    })
}

fn reject_compare_only(args: &AnalysisArgs, command: &str) -> Result<(), CliError> {
    if !args.covariates.is_empty() || !args.weights.is_empty() {
        return Err(CliError::validation(
            "unsupported_option",
            format!("--covariates and --weights apply to `compare`, not `{command}`"),
        ));
    }
    Ok(())
}

fn write(args_format: Format, out: Option<&Path>, json: String, csv: String) -> Result<(), CliError> {
    emit(out, if args_format == Format::Json { &json } else { &csv })
}

pub fn estimate(args: &AnalysisArgs) -> Result<(), CliError> {
    reject_compare_only(args, "estimate")?;
    let loaded = load(args, "estimate")?;
    let opts = ContrastOptions {
        alpha: args.alpha,
        continuity: continuity(args.continuity),
    };
    let estimates = loaded
        .arms
        .values()
        .map(|arm| estimate_arm(arm, args.tau, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("arm,n,tau,theta,se,ci_lower,ci_upper,alpha\n");
    for e in &estimates {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            e.arm, e.n, e.tau, e.theta, e.se, e.ci_lower, e.ci_upper, e.alpha
        ));
    }
    write(
        args.format,
        args.out.as_deref(),
        json_report(&loaded.provenance, &loaded.warnings, &estimates),
        csv_report(&loaded.provenance, &loaded.warnings, &csv),
    )
}

fn parse_weights(specs: &[String]) -> Result<BTreeMap<u32, f64>, CliError> {
    let bad = |s: &str, why: &str| CliError::validation("invalid_weights", format!("--weights entry `{s}`: {why}"));
    let mut weights = BTreeMap::new();
    for spec in specs {
        let (t, w) = spec.split_once('=').ok_or_else(|| bad(spec, "expected type=weight"))?;
        let t: u32 = t.trim().parse().map_err(|_| bad(spec, "event type must be a nonnegative integer"))?;
        let w: f64 = w.trim().parse().map_err(|_| bad(spec, "weight must be a number"))?;
        if !(w.is_finite() && w > 0.0) {
            return Err(bad(spec, "weight must be positive and finite"));
        }
        if weights.insert(t, w).is_some() {
            return Err(bad(spec, "event type given twice"));
        }
    }
    Ok(weights)
}

fn covariate_columns(layout: &CsvLayout, names: &[String]) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .map(|name| {
            layout.covariate_names.iter().position(|c| c == name).ok_or_else(|| {
                CliError::validation(
                    "unknown_covariate",
                    format!(
                        "covariate column `{name}` not in input (available: {})",
                        layout.covariate_names.join(", ")
                    ),
                )
            })
        })
        .collect()
}

fn contrast_csv(rows: &[(&str, &ContrastResult)]) -> String {
    let mut csv = format!("method,{}\n", ContrastResult::CSV_HEADER);
    for (method, r) in rows {
        csv.push_str(&format!("{method},{}\n", r.csv_row()));
    }
    csv
}

#[derive(Serialize)]
struct PlainCompare<'a> {
    contrast: &'a ContrastResult,
    /// Log-rank-type diagnostic; no reference distribution is attached.
    ghosh_lin_q: f64,
}

pub fn compare(args: &AnalysisArgs) -> Result<(), CliError> {
    let loaded = load(args, "compare")?;
    let mut arms = loaded.arms;
    let arm1 = arms.remove(&Arm::One).ok_or(aumcf::Error::EmptyArm(Arm::One))?;
    let arm2 = arms.remove(&Arm::Two).ok_or(aumcf::Error::EmptyArm(Arm::Two))?;
    let study = StudyDataset::new(arm1, arm2, args.tau)?;
    let opts = ContrastOptions {
        alpha: args.alpha,
        continuity: continuity(args.continuity),
    };
    let kind = kind(args.contrast);
    let mut provenance = loaded.provenance.with("contrast", kind.as_str());
    let mut warnings = loaded.warnings;

    if !args.weights.is_empty() && !args.covariates.is_empty() {
        return Err(CliError::validation(
            "unsupported_option",
            "--weights and --covariates cannot be combined",
        ));
    }
    if (!args.weights.is_empty() || !args.covariates.is_empty()) && kind != ContrastKind::Difference {
        return Err(CliError::validation(
            "unsupported_option",
            "--weights and --covariates require --contrast diff",
        ));
    }

    if !args.weights.is_empty() {
        let weights = parse_weights(&args.weights)?;
        let spec: Vec<String> = weights.iter().map(|(t, w)| format!("{t}={w}")).collect();
        provenance = provenance.with("weights", spec.join(","));
        let res = weighted_contrast(&study, &weights, &opts)?;
        let csv = contrast_csv(&[("weighted", &res.contrast)]);
        return write(
            args.format,
            args.out.as_deref(),
            json_report(&provenance, &warnings, serde_json::json!({ "weighted": res })),
            csv_report(&provenance, &warnings, &csv),
        );
    }

    if !args.covariates.is_empty() {
        let columns = covariate_columns(&loaded.layout, &args.covariates)?;
        provenance = provenance.with("covariates", args.covariates.join(","));
        let study = study.select_covariates(&columns);
        let aopts = AugmentationOptions {
            contrast: opts,
            ridge: None,
        };
        let report = augmented_contrast(&study, &aopts, &args.covariates)?;
        warnings.extend(report.warnings.iter().cloned());
        let csv = contrast_csv(&[("unadjusted", &report.unadjusted), ("adjusted", &report.adjusted)]);
        return write(
            args.format,
            args.out.as_deref(),
            json_report(&provenance, &warnings, &report),
            csv_report(&provenance, &warnings, &csv),
        );
    }

    let res = contrast(&study, kind, &opts)?;
    let q = ghosh_lin_q(&study, opts.continuity);
    let csv = contrast_csv(&[("unadjusted", &res)]);
    write(
        args.format,
        args.out.as_deref(),
        json_report(&provenance, &warnings, PlainCompare { contrast: &res, ghosh_lin_q: q }),
        csv_report(&provenance, &warnings, &csv),
    )
}

#[derive(Serialize)]
struct Curve {
    arm: Arm,
    curve: &'static str,
    points: Vec<(f64, f64)>,
}

pub fn curves(args: &AnalysisArgs) -> Result<(), CliError> {
    reject_compare_only(args, "curves")?;
    let loaded = load(args, "curves")?;
    let opts = EstimatorOptions {
        continuity: continuity(args.continuity),
    };
    let mut curves = Vec::new();
    for arm in loaded.arms.values() {
        curves.push(Curve {
            arm: arm.arm,
            curve: "mcf",
            points: mcf_with(arm, &opts).points(Some(args.tau)),
        });
        curves.push(Curve {
            arm: arm.arm,
            curve: "km",
            points: km_survival(arm).points(Some(args.tau)),
        });
    }
    let mut csv = String::from("arm,curve,time,value\n");
    for c in &curves {
        for (t, v) in &c.points {
            csv.push_str(&format!("{},{},{t},{v}\n", c.arm, c.curve));
        }
    }
    write(
        args.format,
        args.out.as_deref(),
        json_report(&loaded.provenance, &loaded.warnings, &curves),
        csv_report(&loaded.provenance, &loaded.warnings, &csv),
    )
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.config)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::from(aumcf::Error::Config("config is not valid UTF-8".into())))?;
    let mut config = ScenarioConfig::from_toml(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(reps) = args.reps {
        config.replicates = reps;
    }
    config.validate()?;
    let kind = kind(args.contrast);
    let mut methods = vec![Method::Unadjusted];
    if config.has_covariate() && kind == ContrastKind::Difference {
        methods.push(Method::Adjusted);
    }
    let opts = HarnessOptions {
        methods,
        kind,
        truth: TruthSource::Analytic,
        parallel: !args.serial,
    };
    let oc = run_operating_characteristics(&config, &opts)?;
    let provenance = Provenance::new("simulate")
        .with("config_sha256", sha256_hex(&bytes))
        .with("seed", config.seed)
        .with("replicates", config.replicates)
        .with("tau", config.tau)
        .with("alpha", config.alpha)
        .with("contrast", kind.as_str())
        .with("truth", "analytic")
        .with("continuity", SurvivalContinuity::LeftLimit.as_str());
    let mut warnings = Vec::new();
    for m in &oc.methods {
        if m.failures > 0 {
            warnings.push(format!("{}: {} replicates could not be computed", m.method.as_str(), m.failures));
        }
    }
    write(
        args.format,
        args.out.as_deref(),
        json_report(&provenance, &warnings, &oc),
        csv_report(&provenance, &warnings, &oc.to_csv()),
    )
}
