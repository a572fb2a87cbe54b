//! Area under the mean cumulative function (AUMCF) for recurrent events in
//! the presence of a terminal event.
//!
//! The MCF `m(t) = E{N*(t)}` counts events up to `t`, frozen at death. Its
//! area on `[0, τ]` is the expected event-free time lost to events. This
//! crate provides the nonparametric estimator, influence-function
//! inference for one- and two-sample contrasts, covariate augmentation,
//! a weighted multi-type variant, and a simulation harness.
//!
//! ```
//! use aumcf::{aumcf, Arm, ArmDataset, SubjectHistory};
//!
//! let subjects = vec![
//!     SubjectHistory::simple("a", 10.0, false, &[2.0, 5.0]).unwrap(),
//!     SubjectHistory::simple("b", 4.0, true, &[1.0]).unwrap(),
//! ];
//! let arm = ArmDataset::new(Arm::One, subjects).unwrap();
//! let theta = aumcf(&arm, 8.0);
//! assert!(theta > 0.0);
//! ```

pub mod augmentation;
pub mod data;
pub mod error;
pub mod estimation;
pub mod inference;
pub mod simulation;
pub mod step;

pub use augmentation::{
    augmentation_weights, augmented_contrast, AugmentationOptions, AugmentedReport,
    CovariateSummary, SINGULARITY_RATIO,
};
pub use data::{
    group_records, ingest_records, read_records_csv, validate_arms_truncation,
    validate_truncation, write_records_csv, Arm, ArmDataset, CsvLayout, Event, EventRecord,
    Status, StudyDataset, SubjectHistory, TruncationReport,
};
pub use error::{Error, ErrorKind, Result};
pub use estimation::{
    aumcf, aumcf_with, event_rate_increments, km_survival, mcf, mcf_with, nelson_aalen_terminal,
    rmst, time_lost_per_subject, EstimatorOptions, JumpIncrements, SurvivalContinuity,
};
pub use inference::{
    arm_inference, arm_variance, contrast, contrast_difference, contrast_ratio, estimate_arm,
    ghosh_lin_q, influence_values, influence_values_with, martingale_residuals, normal_cdf,
    wald_pvalue, weighted_contrast, z_critical, ArmEstimate, ArmInference, ContrastKind,
    ContrastOptions, ContrastResult, InfluenceSet, ResidualJump, SubjectResiduals,
    WeightedContrastResult,
};
pub use step::{area_under_step, StepFunction};
