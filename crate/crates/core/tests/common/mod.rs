#![allow(dead_code)]

use aumcf::{Arm, ArmDataset, Event, StudyDataset, SubjectHistory};
use proptest::prelude::*;

/// `(follow_up, terminal, event times, covariates)` on a half-unit grid so
/// tied times are common.
pub type RawSubject = (f64, bool, Vec<f64>, Vec<f64>);

pub fn raw_subject(p: usize) -> impl Strategy<Value = RawSubject> {
    (1u32..=20, any::<bool>(), prop::collection::vec(0u32..=100, 0..5), prop::collection::vec(-3.0f64..3.0, p))
        .prop_map(|(k, terminal, ev, w)| {
            let x = k as f64 / 2.0;
            let events = ev.into_iter().map(|e| (e % (k + 1)) as f64 / 2.0).collect();
            (x, terminal, events, w)
        })
}

pub fn build_arm(arm: Arm, raw: &[RawSubject]) -> ArmDataset {
    let subjects = raw
        .iter()
        .enumerate()
        .map(|(i, (x, d, ev, w))| {
            let events = ev
                .iter()
                .map(|&time| Event {
                    time,
                    event_type: None,
                })
                .collect();
            SubjectHistory::new(format!("{}-{i:03}", arm.label()), *x, *d, events, w.clone()).unwrap()
        })
        .collect();
    ArmDataset::new(arm, subjects).unwrap()
}

pub fn arm_strategy(p: usize, max_n: usize) -> impl Strategy<Value = ArmDataset> {
    prop::collection::vec(raw_subject(p), 1..max_n).prop_map(|raw| build_arm(Arm::One, &raw))
}

pub fn tau_strategy() -> impl Strategy<Value = f64> {
    (1u32..=20).prop_map(|k| k as f64 / 2.0)
}

pub fn study_strategy(p: usize, min_n: usize, max_n: usize) -> impl Strategy<Value = StudyDataset> {
    (
        prop::collection::vec(raw_subject(p), min_n..max_n),
        prop::collection::vec(raw_subject(p), min_n..max_n),
        tau_strategy(),
    )
        .prop_map(|(a, b, tau)| StudyDataset::new(build_arm(Arm::One, &a), build_arm(Arm::Two, &b), tau).unwrap())
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
