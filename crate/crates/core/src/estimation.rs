//! Nonparametric step-function estimators for one arm: Kaplan–Meier for the
//! terminal event, Nelson–Aalen increments for the recurrent-event rate,
//! the mean cumulative function `m̂(t) = ∫_0^t Ŝ(u) dN̄(u)/Ȳ(u)` and its area
//! on `[0, τ]`.
//!
//! Everything is an exact sum over jump points. Ties across subjects are
//! aggregated at the shared time; at-risk counts use `Y(t) = 1{X >= t}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{ArmDataset, Event, SubjectHistory};
use crate::error::{Error, Result};
use crate::step::{area_under_step, StepFunction};

/// Which version of the Kaplan–Meier curve multiplies `dR̂(u)` inside the
/// MCF and the AUMCF.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurvivalContinuity {
    /// `Ŝ(u-)`: an event tied with a death is not discounted by that death.
    #[default]
    LeftLimit,
    /// `Ŝ(u)`, the right-continuous curve.
    RightContinuous,
}

impl SurvivalContinuity {
    pub fn as_str(self) -> &'static str {
        match self {
            SurvivalContinuity::LeftLimit => "left-limit",
            SurvivalContinuity::RightContinuous => "right-continuous",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorOptions {
    pub continuity: SurvivalContinuity,
}

/// Aggregated recurrent-event jumps `dR̂(u) = dN̄(u) / Ȳ(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpIncrements {
    pub times: Vec<f64>,
    pub increments: Vec<f64>,
    pub at_risk: Vec<usize>,
}

/// Weight given to each recurrent event when aggregating `dN̄`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum EventMass<'a> {
    Unit,
    ByType(&'a BTreeMap<u32, f64>),
}

impl EventMass<'_> {
    pub fn of(&self, ev: &Event) -> Result<f64> {
        match self {
            EventMass::Unit => Ok(1.0),
            EventMass::ByType(weights) => {
                let Some(t) = ev.event_type else {
                    return Err(Error::MissingWeight("<unlabeled>".into()));
                };
                weights
                    .get(&t)
                    .copied()
                    .ok_or_else(|| Error::MissingWeight(t.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DeathJump {
    pub time: f64,
    pub count: usize,
    pub at_risk: usize,
    /// `Ŝ(u)` after this jump.
    pub surv: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct EventJump {
    pub time: f64,
    pub mass: f64,
    pub at_risk: usize,
    /// Survival factor used in the integrand, per the continuity option.
    pub surv: f64,
}

impl EventJump {
    pub fn rate_increment(&self) -> f64 {
        self.mass / self.at_risk as f64
    }

    pub fn mcf_increment(&self) -> f64 {
        self.surv * self.rate_increment()
    }
}

/// Arm-level curves shared by point estimation and influence computation.
#[derive(Debug, Clone)]
pub(crate) struct ArmFit {
    pub n: usize,
    sorted_follow_up: Vec<f64>,
    pub deaths: Vec<DeathJump>,
    pub events: Vec<EventJump>,
}

impl ArmFit {
    pub fn new(arm: &ArmDataset, continuity: SurvivalContinuity) -> ArmFit {
        Self::build(arm, continuity, EventMass::Unit).expect("unit masses cannot fail")
    }

    pub fn build(
        arm: &ArmDataset,
        continuity: SurvivalContinuity,
        mass: EventMass<'_>,
    ) -> Result<ArmFit> {
        let subjects: Vec<&SubjectHistory> = arm.subjects().iter().collect();
        Self::from_subjects(&subjects, continuity, mass)
    }

    /// Same as `build` over an arbitrary multiset of subjects (bootstrap
    /// resamples repeat subjects).
    pub fn from_subjects(
        subjects: &[&SubjectHistory],
        continuity: SurvivalContinuity,
        mass: EventMass<'_>,
    ) -> Result<ArmFit> {
        let n = subjects.len();
        let mut sorted_follow_up: Vec<f64> = subjects.iter().map(|s| s.follow_up).collect();
        sorted_follow_up.sort_by(f64::total_cmp);
        let at_risk = |u: f64| n - sorted_follow_up.partition_point(|&x| x < u);

        let mut death_times: Vec<f64> = subjects
            .iter()
            .filter(|s| s.terminal)
            .map(|s| s.follow_up)
            .collect();
        death_times.sort_by(f64::total_cmp);
        let mut deaths: Vec<DeathJump> = Vec::new();
        let mut surv = 1.0;
        for t in death_times {
            match deaths.last_mut() {
                Some(last) if last.time == t => last.count += 1,
                _ => deaths.push(DeathJump {
                    time: t,
                    count: 1,
                    at_risk: at_risk(t),
                    surv: 0.0,
                }),
            }
        }
        for d in &mut deaths {
            surv *= 1.0 - d.count as f64 / d.at_risk as f64;
            d.surv = surv;
        }

        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(subjects.iter().map(|s| s.events.len()).sum());
        for s in subjects {
            for ev in &s.events {
                raw.push((ev.time, mass.of(ev)?));
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut events: Vec<EventJump> = Vec::new();
        let mut d_idx = 0;
        let mut i = 0;
        while i < raw.len() {
            let t = raw[i].0;
            let mut total = 0.0;
            while i < raw.len() && raw[i].0 == t {
                total += raw[i].1;
                i += 1;
            }
            if total <= 0.0 {
                continue;
            }
            // Advance over deaths strictly before t; the left-limit survival
            // is then deaths[d_idx - 1].surv.
            while d_idx < deaths.len() && deaths[d_idx].time < t {
                d_idx += 1;
            }
            let left = if d_idx == 0 { 1.0 } else { deaths[d_idx - 1].surv };
            let surv = match continuity {
                SurvivalContinuity::LeftLimit => left,
                SurvivalContinuity::RightContinuous => {
                    if d_idx < deaths.len() && deaths[d_idx].time == t {
                        deaths[d_idx].surv
                    } else {
                        left
                    }
                }
            };
            events.push(EventJump {
                time: t,
                mass: total,
                at_risk: at_risk(t),
                surv,
            });
        }

        Ok(ArmFit {
            n,
            sorted_follow_up,
            deaths,
            events,
        })
    }

    pub fn at_risk(&self, u: f64) -> usize {
        self.n - self.sorted_follow_up.partition_point(|&x| x < u)
    }

    /// Number of event jumps at or before `t`.
    pub fn events_through(&self, t: f64) -> usize {
        self.events.partition_point(|e| e.time <= t)
    }

    pub fn deaths_through(&self, t: f64) -> usize {
        self.deaths.partition_point(|d| d.time <= t)
    }

    pub fn theta(&self, tau: f64) -> f64 {
        self.events[..self.events_through(tau)]
            .iter()
            .map(|e| (tau - e.time) * e.mcf_increment())
            .sum()
    }

    pub fn km(&self) -> StepFunction {
        StepFunction::new(
            self.deaths.iter().map(|d| d.time).collect(),
            self.deaths.iter().map(|d| d.surv).collect(),
            1.0,
        )
    }

    pub fn mcf(&self) -> StepFunction {
        let mut acc = 0.0;
        let values = self
            .events
            .iter()
            .map(|e| {
                acc += e.mcf_increment();
                acc
            })
            .collect();
        StepFunction::new(self.events.iter().map(|e| e.time).collect(), values, 0.0)
    }
}

/// Product-limit estimator of the terminal-event survival function.
pub fn km_survival(arm: &ArmDataset) -> StepFunction {
    ArmFit::new(arm, SurvivalContinuity::LeftLimit).km()
}

/// Nelson–Aalen cumulative hazard of the terminal event.
pub fn nelson_aalen_terminal(arm: &ArmDataset) -> StepFunction {
    let fit = ArmFit::new(arm, SurvivalContinuity::LeftLimit);
    let mut acc = 0.0;
    let values = fit
        .deaths
        .iter()
        .map(|d| {
            acc += d.count as f64 / d.at_risk as f64;
            acc
        })
        .collect();
    StepFunction::new(fit.deaths.iter().map(|d| d.time).collect(), values, 0.0)
}

pub fn event_rate_increments(arm: &ArmDataset) -> JumpIncrements {
    let fit = ArmFit::new(arm, SurvivalContinuity::LeftLimit);
    JumpIncrements {
        times: fit.events.iter().map(|e| e.time).collect(),
        increments: fit.events.iter().map(EventJump::rate_increment).collect(),
        at_risk: fit.events.iter().map(|e| e.at_risk).collect(),
    }
}

/// Mean cumulative function with the default (left-limit) convention.
pub fn mcf(arm: &ArmDataset) -> StepFunction {
    mcf_with(arm, &EstimatorOptions::default())
}

pub fn mcf_with(arm: &ArmDataset, opts: &EstimatorOptions) -> StepFunction {
    ArmFit::new(arm, opts.continuity).mcf()
}

/// `θ̂ = Σ_{u <= τ} (τ - u) Ŝ(u-) dR̂(u)`.
pub fn aumcf(arm: &ArmDataset, tau: f64) -> f64 {
    aumcf_with(arm, tau, &EstimatorOptions::default())
}

pub fn aumcf_with(arm: &ArmDataset, tau: f64, opts: &EstimatorOptions) -> f64 {
    ArmFit::new(arm, opts.continuity).theta(tau)
}

/// Restricted mean survival time of the terminal event.
pub fn rmst(arm: &ArmDataset, tau: f64) -> f64 {
    area_under_step(&km_survival(arm), tau)
}

/// `Σ_l (τ - T_l)_+` over the subject's recurrent events.
pub fn time_lost_per_subject(subject: &SubjectHistory, tau: f64) -> f64 {
    subject.event_times().map(|t| (tau - t).max(0.0)).sum()
}
