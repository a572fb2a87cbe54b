//! Python bindings for the `aumcf` crate.
//!
//! ```python
//! import aumcf_py as am
//! study = am.Study.from_records(ids, times, statuses, arms, tau=12.0)
//! res = study.contrast("diff")
//! print(res.point, res.ci_lower, res.ci_upper, res.p_value)
//! ```

use std::collections::BTreeMap;

use aumcf::simulation::{
    bootstrap_se_with, run_operating_characteristics, HarnessOptions, Hypothesis, Method,
    ScenarioConfig, ScenarioKind, TruthSource,
};
use aumcf::{
    augmented_contrast, contrast, estimate_arm, ghosh_lin_q, influence_values_with, ingest_records,
    km_survival, mcf_with, read_records_csv, validate_truncation, weighted_contrast, Arm,
    AugmentationOptions, ContrastKind, ContrastOptions, ContrastResult, ErrorKind, EstimatorOptions,
    EventRecord, Status, StudyDataset, SurvivalContinuity,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(aumcf_py, AumcfError, PyException, "Base class for aumcf errors.");
create_exception!(aumcf_py, ValidationError, AumcfError, "Invalid input data or arguments.");
create_exception!(aumcf_py, DegenerateError, AumcfError, "Numerically degenerate estimate.");
create_exception!(aumcf_py, ConfigError, AumcfError, "Invalid simulation scenario.");

fn to_py(err: aumcf::Error) -> PyErr {
    let msg = format!("{} ({})", err, err.code());
    match err.kind() {
        ErrorKind::Validation | ErrorKind::Io => ValidationError::new_err(msg),
        ErrorKind::Degenerate => DegenerateError::new_err(msg),
        ErrorKind::Config => ConfigError::new_err(msg),
    }
}

fn parse_arm(arm: u8) -> PyResult<Arm> {
    Arm::try_from(arm).map_err(to_py)
}

fn parse_kind(kind: &str) -> PyResult<ContrastKind> {
    match kind {
        "diff" | "difference" => Ok(ContrastKind::Difference),
        "ratio" => Ok(ContrastKind::Ratio),
        other => Err(PyValueError::new_err(format!("unknown contrast `{other}` (diff or ratio)"))),
    }
}

fn parse_continuity(continuity: &str) -> PyResult<SurvivalContinuity> {
    match continuity {
        "left-limit" => Ok(SurvivalContinuity::LeftLimit),
        "right-continuous" => Ok(SurvivalContinuity::RightContinuous),
        other => Err(PyValueError::new_err(format!(
            "unknown continuity `{other}` (left-limit or right-continuous)"
        ))),
    }
}

/// Two-arm contrast with Wald inference.
#[pyclass(name = "ContrastResult", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyContrast {
    kind: String,
    tau: f64,
    theta1: f64,
    se1: f64,
    theta2: f64,
    se2: f64,
    point: f64,
    se: f64,
    ci_lower: f64,
    ci_upper: f64,
    p_value: f64,
    n1: usize,
    n2: usize,
    alpha: f64,
    degenerate: bool,
}

impl From<&ContrastResult> for PyContrast {
    fn from(r: &ContrastResult) -> Self {
        PyContrast {
            kind: r.kind.as_str().to_string(),
            tau: r.tau,
            theta1: r.theta1,
            se1: r.se1,
            theta2: r.theta2,
            se2: r.se2,
            point: r.point,
            se: r.se,
            ci_lower: r.ci_lower,
            ci_upper: r.ci_upper,
            p_value: r.p_value,
            n1: r.n1,
            n2: r.n2,
            alpha: r.alpha,
            degenerate: r.degenerate,
        }
    }
}

#[pymethods]
impl PyContrast {
    fn rejects(&self) -> bool {
        self.p_value < self.alpha
    }

    fn __repr__(&self) -> String {
        format!(
            "ContrastResult(kind='{}', point={}, se={}, ci=({}, {}), p_value={})",
            self.kind, self.point, self.se, self.ci_lower, self.ci_upper, self.p_value
        )
    }
}

/// Covariate-augmented difference.
#[pyclass(name = "AugmentedResult", frozen, get_all)]
struct PyAugmented {
    unadjusted: PyContrast,
    adjusted: PyContrast,
    beta_hat: Vec<f64>,
    relative_efficiency: f64,
    covariate_names: Vec<String>,
    warnings: Vec<String>,
}

/// Two-arm study truncated at `tau`.
#[pyclass(name = "Study", frozen)]
struct PyStudy {
    inner: StudyDataset,
    covariate_names: Vec<String>,
    warnings: Vec<String>,
}

impl PyStudy {
    fn new(inner: StudyDataset, covariate_names: Vec<String>, strict_tau: bool) -> PyResult<Self> {
        let report = validate_truncation(&inner, strict_tau).map_err(to_py)?;
        let warnings = report.messages(inner.tau);
        Ok(PyStudy {
            inner,
            covariate_names,
            warnings,
        })
    }

    fn options(alpha: f64, continuity: &str) -> PyResult<ContrastOptions> {
        Ok(ContrastOptions {
            alpha,
            continuity: parse_continuity(continuity)?,
        })
    }
}

#[pymethods]
impl PyStudy {
    /// Long-format CSV: `id,time,status,arm[,event_type][,covariates...]`.
    #[staticmethod]
    #[pyo3(signature = (path, tau, strict_tau = false))]
    fn read_csv(path: &str, tau: f64, strict_tau: bool) -> PyResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| to_py(e.into()))?;
        let (layout, records) = read_records_csv(file).map_err(to_py)?;
        let study = ingest_records(&records, tau).map_err(to_py)?;
        PyStudy::new(study, layout.covariate_names, strict_tau)
    }

    /// One row per record. `statuses`: 0 censored, 1 recurrent event,
    /// 2 death. `covariates[i]` is the covariate vector of row `i`.
    #[staticmethod]
    #[pyo3(signature = (ids, times, statuses, arms, tau, covariates = None, covariate_names = None, event_types = None, strict_tau = false))]
    #[allow(clippy::too_many_arguments)]
    fn from_records(
        ids: Vec<String>,
        times: Vec<f64>,
        statuses: Vec<i64>,
        arms: Vec<i64>,
        tau: f64,
        covariates: Option<Vec<Vec<f64>>>,
        covariate_names: Option<Vec<String>>,
        event_types: Option<Vec<Option<u32>>>,
        strict_tau: bool,
    ) -> PyResult<Self> {
        let n = ids.len();
        if times.len() != n || statuses.len() != n || arms.len() != n {
            return Err(PyValueError::new_err("ids, times, statuses and arms must have equal length"));
        }
        if covariates.as_ref().is_some_and(|c| c.len() != n) || event_types.as_ref().is_some_and(|e| e.len() != n) {
            return Err(PyValueError::new_err("covariates and event_types need one entry per record"));
        }
        let mut records = Vec::with_capacity(n);
        for i in 0..n {
            records.push(EventRecord {
                subject_id: ids[i].clone(),
                time: times[i],
                status: Status::from_code(statuses[i]).map_err(to_py)?,
                arm: Arm::from_label(arms[i]).map_err(to_py)?,
                event_type: event_types.as_ref().and_then(|e| e[i]),
                covariates: covariates.as_ref().map(|c| c[i].clone()).unwrap_or_default(),
            });
        }
        let study = ingest_records(&records, tau).map_err(to_py)?;
        let p = study.covariate_dim();
        let names = covariate_names.unwrap_or_else(|| (0..p).map(|k| format!("w{k}")).collect());
        if names.len() != p {
            return Err(PyValueError::new_err(format!("{} covariate names for {p} covariates", names.len())));
        }
        PyStudy::new(study, names, strict_tau)
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn sizes(&self) -> (usize, usize) {
        (self.inner.arm1.len(), self.inner.arm2.len())
    }

    #[getter]
    fn covariate_names(&self) -> Vec<String> {
        self.covariate_names.clone()
    }

    /// Truncation warnings raised at construction.
    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    /// `(theta, se, ci_lower, ci_upper)` for one arm.
    #[pyo3(signature = (arm, alpha = 0.05, continuity = "left-limit"))]
    fn estimate(&self, arm: u8, alpha: f64, continuity: &str) -> PyResult<(f64, f64, f64, f64)> {
        let e = estimate_arm(self.inner.arm(parse_arm(arm)?), self.inner.tau, &Self::options(alpha, continuity)?)
            .map_err(to_py)?;
        Ok((e.theta, e.se, e.ci_lower, e.ci_upper))
    }

    #[pyo3(signature = (kind = "diff", alpha = 0.05, continuity = "left-limit"))]
    fn contrast(&self, kind: &str, alpha: f64, continuity: &str) -> PyResult<PyContrast> {
        let res = contrast(&self.inner, parse_kind(kind)?, &Self::options(alpha, continuity)?).map_err(to_py)?;
        Ok(PyContrast::from(&res))
    }

    /// Covariate-augmented difference using the named covariate columns
    /// (all columns by default).
    #[pyo3(signature = (covariates = None, alpha = 0.05, ridge = None))]
    fn augmented(&self, covariates: Option<Vec<String>>, alpha: f64, ridge: Option<f64>) -> PyResult<PyAugmented> {
        let names = covariates.unwrap_or_else(|| self.covariate_names.clone());
        let columns = names
            .iter()
            .map(|n| {
                self.covariate_names
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown covariate `{n}`")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let study = self.inner.select_covariates(&columns);
        let opts = AugmentationOptions {
            contrast: ContrastOptions::with_alpha(alpha),
            ridge,
        };
        let rep = augmented_contrast(&study, &opts, &names).map_err(to_py)?;
        Ok(PyAugmented {
            unadjusted: PyContrast::from(&rep.unadjusted),
            adjusted: PyContrast::from(&rep.adjusted),
            beta_hat: rep.beta_hat,
            relative_efficiency: rep.relative_efficiency,
            covariate_names: rep.covariate_names,
            warnings: rep.warnings,
        })
    }

    /// Difference in type-weighted AUMCFs; `weights` maps event type to weight.
    #[pyo3(signature = (weights, alpha = 0.05))]
    fn weighted(&self, weights: BTreeMap<u32, f64>, alpha: f64) -> PyResult<PyContrast> {
        let res = weighted_contrast(&self.inner, &weights, &ContrastOptions::with_alpha(alpha)).map_err(to_py)?;
        Ok(PyContrast::from(&res.contrast))
    }

    fn ghosh_lin_q(&self) -> f64 {
        ghosh_lin_q(&self.inner, SurvivalContinuity::LeftLimit)
    }

    /// Per-subject influence values of one arm, in subject-id order.
    #[pyo3(signature = (arm, continuity = "left-limit"))]
    fn influence(&self, arm: u8, continuity: &str) -> PyResult<Vec<f64>> {
        let inf = influence_values_with(self.inner.arm(parse_arm(arm)?), self.inner.tau, parse_continuity(continuity)?);
        Ok(inf.values)
    }

    /// `(time, value)` points of the MCF, from 0 to tau.
    #[pyo3(signature = (arm, continuity = "left-limit"))]
    fn mcf(&self, arm: u8, continuity: &str) -> PyResult<Vec<(f64, f64)>> {
        let opts = EstimatorOptions {
            continuity: parse_continuity(continuity)?,
        };
        Ok(mcf_with(self.inner.arm(parse_arm(arm)?), &opts).points(Some(self.inner.tau)))
    }

    /// `(time, value)` points of the Kaplan-Meier curve, from 0 to tau.
    fn km(&self, arm: u8) -> PyResult<Vec<(f64, f64)>> {
        Ok(km_survival(self.inner.arm(parse_arm(arm)?)).points(Some(self.inner.tau)))
    }

    #[pyo3(signature = (replicates = 1000, seed = 0, kind = "diff"))]
    fn bootstrap_se(&self, py: Python<'_>, replicates: usize, seed: u64, kind: &str) -> PyResult<f64> {
        let kind = parse_kind(kind)?;
        py.detach(|| bootstrap_se_with(&self.inner, kind, replicates, seed, SurvivalContinuity::LeftLimit))
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Study(n1={}, n2={}, tau={}, covariates={:?})",
            self.inner.arm1.len(),
            self.inner.arm2.len(),
            self.inner.tau,
            self.covariate_names
        )
    }
}

/// TOML text of a published scenario: kind `icr`, `frailty` or
/// `time-varying`, hypothesis `null` or `alternative`.
#[pyfunction]
fn published_scenario(kind: &str, hypothesis: &str, tau: f64) -> PyResult<String> {
    let kind = match kind {
        "icr" => ScenarioKind::Icr,
        "frailty" => ScenarioKind::Frailty,
        "time-varying" => ScenarioKind::TimeVarying,
        other => return Err(PyValueError::new_err(format!("unknown scenario kind `{other}`"))),
    };
    let hypothesis = match hypothesis {
        "null" => Hypothesis::Null,
        "alternative" => Hypothesis::Alternative,
        other => return Err(PyValueError::new_err(format!("unknown hypothesis `{other}`"))),
    };
    Ok(ScenarioConfig::published(kind, hypothesis, tau).to_toml())
}

/// Runs the operating-characteristics harness on a TOML scenario and
/// returns the summary as a JSON string.
#[pyfunction]
#[pyo3(signature = (config, replicates = None, seed = None, kind = "diff"))]
fn simulate(py: Python<'_>, config: &str, replicates: Option<usize>, seed: Option<u64>, kind: &str) -> PyResult<String> {
    let mut cfg = ScenarioConfig::from_toml(config).map_err(to_py)?;
    if let Some(r) = replicates {
        cfg.replicates = r;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let kind = parse_kind(kind)?;
    let mut methods = vec![Method::Unadjusted];
    if cfg.has_covariate() && kind == ContrastKind::Difference {
        methods.push(Method::Adjusted);
    }
    let opts = HarnessOptions {
        methods,
        kind,
        truth: TruthSource::Analytic,
        parallel: true,
    };
    let oc = py.detach(|| run_operating_characteristics(&cfg, &opts)).map_err(to_py)?;
    serde_json::to_string(&oc).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn aumcf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStudy>()?;
    m.add_class::<PyContrast>()?;
    m.add_class::<PyAugmented>()?;
    m.add_function(wrap_pyfunction!(published_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("AumcfError", m.py().get_type::<AumcfError>())?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
