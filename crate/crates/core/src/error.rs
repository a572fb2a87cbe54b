use thiserror::Error;

use crate::data::Arm;

/// Broad failure classes. The CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Degenerate,
    Config,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("no records supplied")]
    NoRecords,
    #[error("subject {0}: missing terminal/censor record")]
    MissingTerminal(String),
    #[error("subject {0}: more than one terminal/censor record")]
    DuplicateTerminal(String),
    #[error("subject {id}: event at {time} exceeds follow-up {follow_up}")]
    EventAfterFollowUp { id: String, time: f64, follow_up: f64 },
    #[error("subject {id}: invalid time {time} (must be finite and nonnegative)")]
    InvalidTime { id: String, time: f64 },
    #[error("unknown status code {0} (expected 0, 1 or 2)")]
    UnknownStatus(i64),
    #[error("unknown arm label {0} (expected 1 or 2)")]
    UnknownArm(i64),
    #[error("subject {0} appears in both arms")]
    SubjectInBothArms(String),
    #[error("subject {id}: covariate vector of length {found}, expected {expected}")]
    CovariateDimension { id: String, expected: usize, found: usize },
    #[error("subject {0}: covariate values differ between its records")]
    InconsistentCovariates(String),
    #[error("subject {id}: non-finite covariate value")]
    NonFiniteCovariate { id: String },
    #[error("arm {0} has no subjects")]
    EmptyArm(Arm),
    #[error("truncation time must be positive and finite, got {0}")]
    InvalidTau(f64),
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error(
        "MCF not identifiable up to tau = {tau}: largest follow-up in arm {arm} is {max_follow_up}"
    )]
    TruncationBeyondFollowUp { arm: Arm, tau: f64, max_follow_up: f64 },
    #[error("ratio contrast undefined: theta1 = {theta1}, theta2 = {theta2}")]
    RatioUndefined { theta1: f64, theta2: f64 },
    #[error("no weight given for event type {0}")]
    MissingWeight(String),
    #[error("weight for event type {event_type} must be finite and nonnegative, got {weight}")]
    InvalidWeight { event_type: u32, weight: f64 },
    #[error("covariate analysis needs at least one covariate")]
    NoCovariates,
    #[error("arm {arm} has {n} subjects; at least {needed} are needed for {p} covariates")]
    TooFewSubjects { arm: Arm, n: usize, p: usize, needed: usize },
    #[error("covariate covariance is singular (eigenvalue ratio {ratio:.3e}); offending directions: {directions}")]
    SingularCovariance { ratio: f64, directions: String },
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input at line {line}: {message}")]
    Parse { line: u64, message: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::RatioUndefined { .. } | Error::SingularCovariance { .. } => {
                ErrorKind::Degenerate
            }
            Error::Config(_) => ErrorKind::Config,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    /// Stable snake_case identifier used in machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NoRecords => "no_records",
            Error::MissingTerminal(_) => "missing_terminal",
            Error::DuplicateTerminal(_) => "duplicate_terminal",
            Error::EventAfterFollowUp { .. } => "event_after_follow_up",
            Error::InvalidTime { .. } => "invalid_time",
            Error::UnknownStatus(_) => "unknown_status",
            Error::UnknownArm(_) => "unknown_arm",
            Error::SubjectInBothArms(_) => "subject_in_both_arms",
            Error::CovariateDimension { .. } => "covariate_dimension",
            Error::InconsistentCovariates(_) => "inconsistent_covariates",
            Error::NonFiniteCovariate { .. } => "non_finite_covariate",
            Error::EmptyArm(_) => "empty_arm",
            Error::InvalidTau(_) => "invalid_tau",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::TruncationBeyondFollowUp { .. } => "tau_beyond_follow_up",
            Error::RatioUndefined { .. } => "ratio_undefined",
            Error::MissingWeight(_) => "missing_weight",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::NoCovariates => "no_covariates",
            Error::TooFewSubjects { .. } => "too_few_subjects",
            Error::SingularCovariance { .. } => "singular_covariance",
            Error::Config(_) => "config",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
            Error::Parse { .. } => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
