//! Nonparametric bootstrap standard errors, used as an independent check
//! of the influence-function variance.

use rand::Rng;
use rayon::prelude::*;

use super::rng::{Domain, Purpose, SubjectStreams};
use crate::data::{Arm, ArmDataset, StudyDataset, SubjectHistory};
use crate::error::{Error, Result};
use crate::estimation::{ArmFit, EventMass, SurvivalContinuity};
use crate::inference::ContrastKind;

pub const MIN_BOOTSTRAP_REPLICATES: usize = 100;

fn resample_theta(arm: &ArmDataset, tau: f64, streams: &SubjectStreams, continuity: SurvivalContinuity) -> f64 {
    let subjects = arm.subjects();
    let n = subjects.len();
    let mut rng = streams.rng(Purpose::Resample);
    let draw: Vec<&SubjectHistory> = (0..n).map(|_| &subjects[rng.random_range(0..n)]).collect();
    ArmFit::from_subjects(&draw, continuity, EventMass::Unit)
        .expect("unit masses cannot fail")
        .theta(tau)
}

/// Bootstrap standard error of the difference `θ̂_1 - θ̂_2`.
pub fn bootstrap_se(study: &StudyDataset, replicates: usize, seed: u64) -> Result<f64> {
    bootstrap_se_with(study, ContrastKind::Difference, replicates, seed, SurvivalContinuity::LeftLimit)
}

/// Subjects are resampled with replacement within each arm; the result is
/// the sample standard deviation of the `replicates` contrast values and is
/// a deterministic function of `seed`. Ratio resamples with a zero
/// denominator are skipped.
pub fn bootstrap_se_with(
    study: &StudyDataset,
    kind: ContrastKind,
    replicates: usize,
    seed: u64,
    continuity: SurvivalContinuity,
) -> Result<f64> {
    if replicates < MIN_BOOTSTRAP_REPLICATES {
        return Err(Error::Config(format!(
            "bootstrap replicates must be at least {MIN_BOOTSTRAP_REPLICATES}, got {replicates}"
        )));
    }
    let values: Vec<Option<f64>> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| {
            let t1 = resample_theta(
                &study.arm1,
                study.tau,
                &SubjectStreams::new(seed, Domain::Bootstrap, b, Arm::One, 0),
                continuity,
            );
            let t2 = resample_theta(
                &study.arm2,
                study.tau,
                &SubjectStreams::new(seed, Domain::Bootstrap, b, Arm::Two, 0),
                continuity,
            );
            match kind {
                ContrastKind::Difference => Some(t1 - t2),
                ContrastKind::Ratio => (t2 > 0.0).then(|| t1 / t2),
            }
        })
        .collect();
    let values: Vec<f64> = values.into_iter().flatten().collect();
    if values.len() < 2 {
        return Err(Error::RatioUndefined {
            theta1: f64::NAN,
            theta2: 0.0,
        });
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    Ok((values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt())
}
