//! Scenario generators, true values, the operating-characteristics harness
//! and a bootstrap check of the analytic standard error.

mod bootstrap;
mod generate;
mod harness;
mod rng;
mod scenario;
mod truth;

pub use bootstrap::{bootstrap_se, bootstrap_se_with, MIN_BOOTSTRAP_REPLICATES};
pub use generate::{generate_dataset, simulate_subject};
pub use harness::{
    run_operating_characteristics, survival_bias_sensitivity, HarnessOptions, Method,
    MethodSummary, OperatingCharacteristics, TruthSource,
};
pub use rng::{Domain, Purpose, SubjectStreams};
pub use scenario::{
    ArmRates, CovariateConfig, CovariateMode, Hypothesis, ScenarioConfig, ScenarioKind,
};
pub use truth::{analytic_theta, analytic_truth, true_value_oracle, OracleScale, TrueValues};
