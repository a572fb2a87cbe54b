//! Scenario data generators.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};

use super::rng::{Domain, Purpose, SubjectStreams};
use super::scenario::{CovariateMode, ScenarioConfig, ScenarioKind};
use crate::data::{Arm, ArmDataset, Event, StudyDataset, SubjectHistory};

/// Subject-level latent quantities that scale the arm rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Latent {
    pub frailty: f64,
    pub covariate: Option<f64>,
}

fn exp_draw<R: Rng>(rate: f64, rng: &mut R) -> f64 {
    if rate > 0.0 {
        Exp::new(rate).expect("positive rate").sample(rng)
    } else {
        f64::INFINITY
    }
}

pub(crate) fn draw_latent(config: &ScenarioConfig, streams: &SubjectStreams) -> Latent {
    let frailty = if config.kind == ScenarioKind::Frailty && config.frailty_variance > 0.0 {
        let v = config.frailty_variance;
        Gamma::new(1.0 / v, v)
            .expect("valid gamma")
            .sample(&mut streams.rng(Purpose::Frailty))
    } else {
        1.0
    };
    let covariate = match config.covariate.mode {
        CovariateMode::None => None,
        _ => Some(StandardNormal.sample(&mut streams.rng(Purpose::Covariate))),
    };
    Latent { frailty, covariate }
}

/// Death and event-rate multipliers implied by the latent quantities.
pub(crate) fn rate_scales(config: &ScenarioConfig, latent: &Latent) -> (f64, f64) {
    match (config.covariate.mode, latent.covariate) {
        (CovariateMode::Informative, Some(w)) => (
            latent.frailty * (w * config.covariate.death_log_effect).exp(),
            latent.frailty * (w * config.covariate.event_log_effect).exp(),
        ),
        _ => (latent.frailty, latent.frailty),
    }
}

/// Poisson event times on `[0, end]`, with the rate switching to
/// `rate * multiplier` at `change` (if any).
fn event_times<R: Rng>(rate: f64, multiplier: f64, change: Option<f64>, end: f64, rng: &mut R) -> Vec<f64> {
    let mut times = Vec::new();
    let pieces: [(f64, f64, f64); 2] = match change {
        Some(c) => [(0.0, c.min(end), rate), (c, end, rate * multiplier)],
        None => [(0.0, end, rate), (end, end, 0.0)],
    };
    for (start, stop, r) in pieces {
        if r <= 0.0 || stop <= start {
            continue;
        }
        let gap = Exp::new(r).expect("positive rate");
        let mut t = start;
        loop {
            t += gap.sample(rng);
            if t > stop {
                break;
            }
            times.push(t);
        }
    }
    times
}

/// One subject's observed history. Deaths and censoring are exponential;
/// follow-up is capped at the administrative horizon with `δ = false`.
pub fn simulate_subject(config: &ScenarioConfig, arm: Arm, streams: &SubjectStreams, id: String) -> SubjectHistory {
    simulate_subject_with(config, arm, streams, id, config.censoring_rate)
}

pub(crate) fn simulate_subject_with(
    config: &ScenarioConfig,
    arm: Arm,
    streams: &SubjectStreams,
    id: String,
    censoring_rate: f64,
) -> SubjectHistory {
    let rates = config.rates(arm);
    let latent = draw_latent(config, streams);
    let (death_scale, event_scale) = rate_scales(config, &latent);
    let death = exp_draw(rates.death_rate * death_scale, &mut streams.rng(Purpose::Death));
    let censor = exp_draw(censoring_rate, &mut streams.rng(Purpose::Censoring));
    let horizon = config.horizon();
    let (follow_up, terminal) = if death <= censor && death <= horizon {
        (death, true)
    } else {
        (censor.min(horizon), false)
    };
    let change = match config.kind {
        ScenarioKind::TimeVarying => config.change_point,
        _ => None,
    };
    let events = event_times(
        rates.event_rate * event_scale,
        rates.multiplier,
        change,
        follow_up,
        &mut streams.rng(Purpose::Events),
    )
    .into_iter()
    .map(|time| Event {
        time,
        event_type: None,
    })
    .collect();
    SubjectHistory {
        subject_id: id,
        follow_up,
        terminal,
        events,
        covariates: latent.covariate.into_iter().collect(),
    }
}

pub(crate) fn subject_id(arm: Arm, index: usize) -> String {
    format!("a{}-{:06}", arm.label(), index + 1)
}

pub(crate) fn generate_arm(
    config: &ScenarioConfig,
    arm: Arm,
    domain: Domain,
    replicate: u64,
    n: usize,
    censoring_rate: f64,
) -> ArmDataset {
    let base = SubjectStreams::new(config.seed, domain, replicate, arm, 0);
    let subjects = (0..n)
        .map(|i| {
            simulate_subject_with(
                config,
                arm,
                &base.with_subject(i as u64),
                subject_id(arm, i),
                censoring_rate,
            )
        })
        .collect();
    ArmDataset::new(arm, subjects).expect("generated arm is valid")
}

/// Replicate `replicate` of the scenario; a pure function of
/// `(config, replicate)`.
pub fn generate_dataset(config: &ScenarioConfig, replicate: u64) -> StudyDataset {
    let arm1 = generate_arm(config, Arm::One, Domain::Replicate, replicate, config.n_per_arm, config.censoring_rate);
    let arm2 = generate_arm(config, Arm::Two, Domain::Replicate, replicate, config.n_per_arm, config.censoring_rate);
    StudyDataset::new(arm1, arm2, config.tau).expect("generated study is valid")
}
