//! Influence-function inference for the AUMCF.
//!
//! Per subject `i` in arm `j` the estimated influence value is
//!
//! ```text
//! Ψ̂_i = ∫_0^τ (τ-u) Ŝ(u) dM̂_i(u) / (Ȳ(u)/n)  -  ∫_0^τ B(u) dM̂ᴰ_i(u) / (Ȳ(u)/n),
//! B(u) = ∫_(u,τ] (τ-v) dm̂(v),
//! ```
//!
//! with `M̂_i` and `M̂ᴰ_i` the recurrent-event and terminal-event residuals.
//! The arm variance is `Σ̂_j = mean(Ψ̂_i²)` and the contrast standard error
//! is `(Σ̂_1/n_1 + Σ̂_2/n_2)^½`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::data::{Arm, ArmDataset, StudyDataset};
use crate::error::{Error, Result};
use crate::estimation::{ArmFit, EventMass, SurvivalContinuity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualJump {
    pub time: f64,
    pub increment: f64,
}

/// Jumps of `M̂_i` (recurrent events) and `M̂ᴰ_i` (terminal event) for one
/// subject, each listed at the arm's jump times up to the subject's `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectResiduals {
    pub events: Vec<ResidualJump>,
    pub terminal: Vec<ResidualJump>,
}

pub fn martingale_residuals(arm: &ArmDataset) -> Vec<SubjectResiduals> {
    let fit = ArmFit::new(arm, SurvivalContinuity::LeftLimit);
    arm.subjects()
        .iter()
        .map(|s| {
            let x = s.follow_up;
            let events = fit.events[..fit.events_through(x)]
                .iter()
                .map(|e| {
                    let own = s.events.iter().filter(|ev| ev.time == e.time).count() as f64;
                    ResidualJump {
                        time: e.time,
                        increment: own - e.rate_increment(),
                    }
                })
                .collect();
            let terminal = fit.deaths[..fit.deaths_through(x)]
                .iter()
                .map(|d| {
                    let own = if s.terminal && d.time == x { 1.0 } else { 0.0 };
                    ResidualJump {
                        time: d.time,
                        increment: own - d.count as f64 / d.at_risk as f64,
                    }
                })
                .collect();
            SubjectResiduals { events, terminal }
        })
        .collect()
}

/// Per-subject influence values for one arm, aligned with the arm's
/// subject order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceSet {
    pub arm: Arm,
    pub tau: f64,
    pub values: Vec<f64>,
}

impl InfluenceSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn influence_values(arm: &ArmDataset, tau: f64) -> InfluenceSet {
    influence_values_with(arm, tau, SurvivalContinuity::default())
}

pub fn influence_values_with(
    arm: &ArmDataset,
    tau: f64,
    continuity: SurvivalContinuity,
) -> InfluenceSet {
    let fit = ArmFit::new(arm, continuity);
    influence_from_fit(arm, &fit, tau, EventMass::Unit).expect("unit masses cannot fail")
}

pub(crate) fn influence_from_fit(
    arm: &ArmDataset,
    fit: &ArmFit,
    tau: f64,
    mass: EventMass<'_>,
) -> Result<InfluenceSet> {
    let n = fit.n as f64;
    let events = &fit.events[..fit.events_through(tau)];
    let deaths = &fit.deaths[..fit.deaths_through(tau)];

    // a(u) = (τ-u) Ŝ(u) / (Ȳ(u)/n) at each event jump, and the running
    // compensator Σ a dR̂.
    let a: Vec<f64> = events
        .iter()
        .map(|e| n * (tau - e.time) * e.surv / e.at_risk as f64)
        .collect();
    let mut comp_a = Vec::with_capacity(events.len() + 1);
    comp_a.push(0.0);
    for (e, &ak) in events.iter().zip(&a) {
        comp_a.push(comp_a.last().unwrap() + ak * e.rate_increment());
    }

    // tail[k] = Σ_{j >= k} (τ - u_j) dm̂(u_j), so B(u) = tail[#{u_j <= u}].
    let mut tail = vec![0.0; events.len() + 1];
    for k in (0..events.len()).rev() {
        tail[k] = tail[k + 1] + (tau - events[k].time) * events[k].mcf_increment();
    }
    let b: Vec<f64> = deaths
        .iter()
        .map(|d| {
            let after = events.partition_point(|e| e.time <= d.time);
            n * tail[after] / d.at_risk as f64
        })
        .collect();
    let mut comp_b = Vec::with_capacity(deaths.len() + 1);
    comp_b.push(0.0);
    for (d, &bl) in deaths.iter().zip(&b) {
        comp_b.push(comp_b.last().unwrap() + bl * d.count as f64 / d.at_risk as f64);
    }

    let mut values = Vec::with_capacity(arm.len());
    for s in arm.subjects() {
        let horizon = s.follow_up.min(tau);
        let mut own_events = 0.0;
        for ev in s.events.iter().take_while(|ev| ev.time <= tau) {
            let m = mass.of(ev)?;
            if m == 0.0 {
                continue;
            }
            let k = events.partition_point(|e| e.time < ev.time);
            own_events += m * a[k];
        }
        let event_part = own_events - comp_a[events.partition_point(|e| e.time <= horizon)];

        let own_death = if s.terminal && s.follow_up <= tau {
            b[deaths.partition_point(|d| d.time < s.follow_up)]
        } else {
            0.0
        };
        let death_part = own_death - comp_b[deaths.partition_point(|d| d.time <= horizon)];

        values.push(event_part - death_part);
    }

    Ok(InfluenceSet {
        arm: arm.arm,
        tau,
        values,
    })
}

/// `Σ̂_j = n_j⁻¹ Σ_i Ψ̂_i²`.
pub fn arm_variance(inf: &InfluenceSet) -> f64 {
    if inf.values.is_empty() {
        return 0.0;
    }
    inf.values.iter().map(|v| v * v).sum::<f64>() / inf.values.len() as f64
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper `1 - α/2` standard normal quantile.
pub fn z_critical(alpha: f64) -> f64 {
    SQRT_2 * erfc_inv(alpha)
}

/// Two-sided Wald p-value `2(1 - Φ(|point - null| / se))`.
///
/// With `se = 0` the test degenerates: 0 when the point differs from the
/// null value, 1 otherwise.
pub fn wald_pvalue(point: f64, se: f64, null_value: f64) -> f64 {
    let diff = (point - null_value).abs();
    if se == 0.0 {
        return if diff == 0.0 { 1.0 } else { 0.0 };
    }
    erfc(diff / se / SQRT_2).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContrastKind {
    Difference,
    Ratio,
}

impl ContrastKind {
    pub fn null_value(self) -> f64 {
        match self {
            ContrastKind::Difference => 0.0,
            ContrastKind::Ratio => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ContrastKind::Difference => "difference",
            ContrastKind::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastOptions {
    pub alpha: f64,
    pub continuity: SurvivalContinuity,
}

impl Default for ContrastOptions {
    fn default() -> Self {
        ContrastOptions {
            alpha: 0.05,
            continuity: SurvivalContinuity::LeftLimit,
        }
    }
}

impl ContrastOptions {
    pub fn with_alpha(alpha: f64) -> Self {
        ContrastOptions {
            alpha,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        Ok(())
    }
}

/// Two-arm contrast with Wald inference. For ratios, `se` is the
/// delta-method standard error on the ratio scale, while the interval and
/// p-value are built on the log scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastResult {
    pub kind: ContrastKind,
    pub tau: f64,
    pub theta1: f64,
    pub se1: f64,
    pub theta2: f64,
    pub se2: f64,
    pub point: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
    pub alpha: f64,
    /// Set when the standard error is exactly zero.
    pub degenerate: bool,
}

impl ContrastResult {
    pub const CSV_HEADER: &'static str =
        "kind,tau,theta1,se1,theta2,se2,point,se,ci_lower,ci_upper,p_value,n1,n2,alpha,degenerate";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind.as_str(),
            self.tau,
            self.theta1,
            self.se1,
            self.theta2,
            self.se2,
            self.point,
            self.se,
            self.ci_lower,
            self.ci_upper,
            self.p_value,
            self.n1,
            self.n2,
            self.alpha,
            self.degenerate
        )
    }

    pub fn rejects(&self) -> bool {
        self.p_value < self.alpha
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci_lower <= value && value <= self.ci_upper
    }
}

/// Point estimate, influence values and variance for one arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmInference {
    pub arm: Arm,
    pub n: usize,
    pub theta: f64,
    /// `Σ̂_j`; the standard error of `theta` is `(variance / n)^½`.
    pub variance: f64,
    pub influence: InfluenceSet,
}

impl ArmInference {
    pub fn se(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }
}

pub fn arm_inference(arm: &ArmDataset, tau: f64, continuity: SurvivalContinuity) -> ArmInference {
    arm_inference_with_mass(arm, tau, continuity, EventMass::Unit).expect("unit masses cannot fail")
}

pub(crate) fn arm_inference_with_mass(
    arm: &ArmDataset,
    tau: f64,
    continuity: SurvivalContinuity,
    mass: EventMass<'_>,
) -> Result<ArmInference> {
    let fit = ArmFit::build(arm, continuity, mass)?;
    let influence = influence_from_fit(arm, &fit, tau, mass)?;
    Ok(ArmInference {
        arm: arm.arm,
        n: fit.n,
        theta: fit.theta(tau),
        variance: arm_variance(&influence),
        influence,
    })
}

/// One-arm summary: AUMCF with its influence-based interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmEstimate {
    pub arm: Arm,
    pub n: usize,
    pub tau: f64,
    pub theta: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub alpha: f64,
}

pub fn estimate_arm(arm: &ArmDataset, tau: f64, opts: &ContrastOptions) -> Result<ArmEstimate> {
    opts.validate()?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTau(tau));
    }
    let inf = arm_inference(arm, tau, opts.continuity);
    let se = inf.se();
    let z = z_critical(opts.alpha);
    Ok(ArmEstimate {
        arm: arm.arm,
        n: inf.n,
        tau,
        theta: inf.theta,
        se,
        ci_lower: inf.theta - z * se,
        ci_upper: inf.theta + z * se,
        alpha: opts.alpha,
    })
}

pub(crate) fn combine(
    kind: ContrastKind,
    tau: f64,
    a1: &ArmInference,
    a2: &ArmInference,
    alpha: f64,
) -> Result<ContrastResult> {
    let z = z_critical(alpha);
    let (se1, se2) = (a1.se(), a2.se());
    let (point, se, lo, hi, p) = match kind {
        ContrastKind::Difference => {
            let point = a1.theta - a2.theta;
            let se = (se1 * se1 + se2 * se2).sqrt();
            (point, se, point - z * se, point + z * se, wald_pvalue(point, se, 0.0))
        }
        ContrastKind::Ratio => {
            if !(a1.theta > 0.0 && a2.theta > 0.0) {
                return Err(Error::RatioUndefined {
                    theta1: a1.theta,
                    theta2: a2.theta,
                });
            }
            let log_point = a1.theta.ln() - a2.theta.ln();
            let log_se =
                ((se1 / a1.theta).powi(2) + (se2 / a2.theta).powi(2)).sqrt();
            let point = a1.theta / a2.theta;
            (
                point,
                point * log_se,
                (log_point - z * log_se).exp(),
                (log_point + z * log_se).exp(),
                wald_pvalue(log_point, log_se, 0.0),
            )
        }
    };
    Ok(ContrastResult {
        kind,
        tau,
        theta1: a1.theta,
        se1,
        theta2: a2.theta,
        se2,
        point,
        se,
        ci_lower: lo,
        ci_upper: hi,
        p_value: p,
        n1: a1.n,
        n2: a2.n,
        alpha,
        degenerate: se == 0.0,
    })
}

/// `Δ̂ = θ̂_1 - θ̂_2` with influence-function standard error.
pub fn contrast_difference(study: &StudyDataset, opts: &ContrastOptions) -> Result<ContrastResult> {
    contrast(study, ContrastKind::Difference, opts)
}

/// `θ̂_1 / θ̂_2`, inference on the log scale by the delta method.
pub fn contrast_ratio(study: &StudyDataset, opts: &ContrastOptions) -> Result<ContrastResult> {
    contrast(study, ContrastKind::Ratio, opts)
}

pub fn contrast(
    study: &StudyDataset,
    kind: ContrastKind,
    opts: &ContrastOptions,
) -> Result<ContrastResult> {
    opts.validate()?;
    let a1 = arm_inference(&study.arm1, study.tau, opts.continuity);
    let a2 = arm_inference(&study.arm2, study.tau, opts.continuity);
    combine(kind, study.tau, &a1, &a2, opts.alpha)
}

/// Log-rank-type statistic comparing the two MCFs:
/// `Q = ∫_0^τ W(u) [Ŝ_1 dN̄_1/Ȳ_1 - Ŝ_2 dN̄_2/Ȳ_2]` with
/// `W = (n_1 n_2)⁻¹ Ȳ_1 Ȳ_2 / (n⁻¹ (Ȳ_1 + Ȳ_2))`. Diagnostic only; no
/// reference distribution is attached.
pub fn ghosh_lin_q(study: &StudyDataset, continuity: SurvivalContinuity) -> f64 {
    let f1 = ArmFit::new(&study.arm1, continuity);
    let f2 = ArmFit::new(&study.arm2, continuity);
    let (n1, n2) = (f1.n as f64, f2.n as f64);
    let n = n1 + n2;
    let e1 = &f1.events[..f1.events_through(study.tau)];
    let e2 = &f2.events[..f2.events_through(study.tau)];

    let (mut i, mut j) = (0, 0);
    let mut q = 0.0;
    while i < e1.len() || j < e2.len() {
        let t1 = e1.get(i).map_or(f64::INFINITY, |e| e.time);
        let t2 = e2.get(j).map_or(f64::INFINITY, |e| e.time);
        let u = t1.min(t2);
        let mut diff = 0.0;
        if t1 == u {
            diff += e1[i].mcf_increment();
            i += 1;
        }
        if t2 == u {
            diff -= e2[j].mcf_increment();
            j += 1;
        }
        let (y1, y2) = (f1.at_risk(u) as f64, f2.at_risk(u) as f64);
        let weight = (y1 * y2 / (n1 * n2)) / ((y1 + y2) / n);
        q += weight * diff;
    }
    q
}

/// Difference in weighted AUMCFs `θ̂_W = Σ_k w_k θ̂_k` over event types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedContrastResult {
    #[serde(flatten)]
    pub contrast: ContrastResult,
    pub weights: BTreeMap<u32, f64>,
    /// How the variance was obtained.
    pub variance_method: String,
}

pub const WEIGHTED_VARIANCE_METHOD: &str = "weighted sum of per-type influence values";

/// Because `θ̂_k` shares `Ŝᴰ` and the risk sets across types, `θ̂_W` is the
/// AUMCF with each event carrying mass `w_k`, and its influence values are
/// the same weighted sums of the per-type influence values.
pub fn weighted_contrast(
    study: &StudyDataset,
    weights: &BTreeMap<u32, f64>,
    opts: &ContrastOptions,
) -> Result<WeightedContrastResult> {
    opts.validate()?;
    for (&event_type, &weight) in weights {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidWeight { event_type, weight });
        }
    }
    let mass = EventMass::ByType(weights);
    let a1 = arm_inference_with_mass(&study.arm1, study.tau, opts.continuity, mass)?;
    let a2 = arm_inference_with_mass(&study.arm2, study.tau, opts.continuity, mass)?;
    Ok(WeightedContrastResult {
        contrast: combine(ContrastKind::Difference, study.tau, &a1, &a2, opts.alpha)?,
        weights: weights.clone(),
        variance_method: WEIGHTED_VARIANCE_METHOD.to_string(),
    })
}
