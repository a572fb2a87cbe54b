//! True values of the AUMCF under a scenario.
//!
//! Two routes: numerical quadrature of
//! `θ_j = ∫_0^τ (τ - u) E[r_j(u) ξ e^{bW} exp(-λ_Dj ξ e^{aW} u)] du`,
//! and the Monte Carlo procedure of averaging estimates over large
//! uncensored datasets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::generate_arm;
use super::rng::Domain;
use super::scenario::{CovariateMode, ScenarioConfig, ScenarioKind};
use crate::data::Arm;
use crate::estimation::{ArmFit, EventMass, SurvivalContinuity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueValues {
    pub theta1: f64,
    pub theta2: f64,
}

impl TrueValues {
    pub fn difference(&self) -> f64 {
        self.theta1 - self.theta2
    }

    pub fn ratio(&self) -> f64 {
        self.theta1 / self.theta2
    }
}

const SIMPSON_INTERVALS: usize = 2000;

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `E_ξ[ξ exp(-s ξ)]` for Gamma frailty with mean 1 and variance `v`.
fn frailty_laplace_derivative(s: f64, v: f64) -> f64 {
    if v > 0.0 {
        ((-1.0 / v - 1.0) * (v * s).ln_1p()).exp()
    } else {
        (-s).exp()
    }
}

fn std_normal_pdf(w: f64) -> f64 {
    (-0.5 * w * w).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `∫_0^τ m_j(t) dt` for one arm.
pub fn analytic_theta(config: &ScenarioConfig, arm: Arm) -> f64 {
    let rates = config.rates(arm);
    let tau = config.tau;
    let v = match config.kind {
        ScenarioKind::Frailty => config.frailty_variance,
        _ => 0.0,
    };
    let informative = config.covariate.mode == CovariateMode::Informative;
    let change = match config.kind {
        ScenarioKind::TimeVarying => config.change_point,
        _ => None,
    };

    if v == 0.0 && !informative && change.is_none() {
        let (le, ld) = (rates.event_rate, rates.death_rate);
        return if ld > 0.0 {
            le * (tau / ld - (1.0 - (-ld * tau).exp()) / (ld * ld))
        } else {
            le * tau * tau / 2.0
        };
    }

    let rate_at = |u: f64| match change {
        Some(c) if u > c => rates.event_rate * rates.multiplier,
        _ => rates.event_rate,
    };
    // E[ξ e^{bW} exp(-λ_D ξ e^{aW} u)]
    let expected_intensity = |u: f64| -> f64 {
        if informative {
            let (a, b) = (config.covariate.death_log_effect, config.covariate.event_log_effect);
            simpson(
                |w| {
                    std_normal_pdf(w)
                        * (b * w).exp()
                        * frailty_laplace_derivative(rates.death_rate * (a * w).exp() * u, v)
                },
                -12.0,
                12.0,
                SIMPSON_INTERVALS,
            )
        } else {
            frailty_laplace_derivative(rates.death_rate * u, v)
        }
    };
    let integrand = |u: f64| (tau - u) * rate_at(u) * expected_intensity(u);
    let intervals = if informative { 400 } else { SIMPSON_INTERVALS };
    match change {
        Some(c) if c < tau => {
            // Integrate each smooth piece separately; the rate jumps at c.
            simpson(&integrand, 0.0, c, intervals)
                + simpson(|u| (tau - u) * rates.event_rate * rates.multiplier * expected_intensity(u), c, tau, intervals)
        }
        _ => simpson(integrand, 0.0, tau, intervals),
    }
}

pub fn analytic_truth(config: &ScenarioConfig) -> TrueValues {
    TrueValues {
        theta1: analytic_theta(config, Arm::One),
        theta2: analytic_theta(config, Arm::Two),
    }
}

/// Size of the Monte Carlo truth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleScale {
    pub datasets: usize,
    pub n_per_arm: usize,
}

impl Default for OracleScale {
    /// 2,000 uncensored datasets of 10,000 subjects per arm.
    fn default() -> Self {
        OracleScale {
            datasets: 2000,
            n_per_arm: 10_000,
        }
    }
}

/// Monte Carlo truth: the average estimate over `scale.datasets` datasets
/// generated without censoring. Also returns the Monte Carlo standard
/// errors of the two averages.
pub fn true_value_oracle(config: &ScenarioConfig, scale: OracleScale) -> (TrueValues, TrueValues) {
    assert!(scale.datasets >= 2 && scale.n_per_arm >= 1, "oracle needs at least 2 datasets");
    let thetas: Vec<(f64, f64)> = (0..scale.datasets as u64)
        .into_par_iter()
        .map(|r| {
            let theta = |arm: Arm| {
                let data = generate_arm(config, arm, Domain::Truth, r, scale.n_per_arm, 0.0);
                let subjects: Vec<_> = data.subjects().iter().collect();
                ArmFit::from_subjects(&subjects, SurvivalContinuity::LeftLimit, EventMass::Unit)
                    .expect("unit masses cannot fail")
                    .theta(config.tau)
            };
            (theta(Arm::One), theta(Arm::Two))
        })
        .collect();
    let k = thetas.len() as f64;
    let mean = |f: fn(&(f64, f64)) -> f64| thetas.iter().map(f).sum::<f64>() / k;
    let m1 = mean(|t| t.0);
    let m2 = mean(|t| t.1);
    let mcse = |f: fn(&(f64, f64)) -> f64, m: f64| {
        (thetas.iter().map(|t| (f(t) - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    };
    (
        TrueValues {
            theta1: m1,
            theta2: m2,
        },
        TrueValues {
            theta1: mcse(|t| t.0, m1),
            theta2: mcse(|t| t.1, m2),
        },
    )
}
