//! Scenario configuration.
//!
//! Scenarios are read from TOML. Example (the time-varying alternative):
//!
//! ```toml
//! kind = "time-varying"     # "icr", "frailty" or "time-varying"
//! n_per_arm = 200
//! tau = 4.0
//! replicates = 2000
//! seed = 42
//! censoring_rate = 0.2      # exponential censoring, independent of W
//! change_point = 1.0        # time-varying only; must be < tau
//!
//! [arm1]
//! event_rate = 1.0
//! death_rate = 0.2
//! multiplier = 1.0          # event-rate multiplier after the change point
//!
//! [arm2]
//! event_rate = 1.0
//! death_rate = 0.2
//! multiplier = 0.5
//!
//! [covariate]
//! mode = "none"             # "none", "uninformative" or "informative"
//! ```
//!
//! Other keys: `frailty_variance` (Gamma frailty with mean 1, default 3),
//! `alpha` (default 0.05), `horizon` (administrative censoring time,
//! default `10 * tau`), and under `[covariate]` the log-rate effects
//! `death_log_effect` (default ln 0.5) and `event_log_effect` (default ln 2)
//! used in informative mode. The covariate never affects censoring.

use serde::{Deserialize, Serialize};

use crate::data::Arm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Independent competing risks: Poisson events, exponential death.
    Icr,
    /// Shared Gamma frailty multiplying both event and death rates.
    Frailty,
    /// Event rate switches from `λ_E` to `υ λ_E` at the change point.
    TimeVarying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmRates {
    pub event_rate: f64,
    pub death_rate: f64,
    #[serde(default = "one")]
    pub multiplier: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovariateMode {
    #[default]
    None,
    Uninformative,
    Informative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovariateConfig {
    #[serde(default)]
    pub mode: CovariateMode,
    #[serde(default = "ln_half")]
    pub death_log_effect: f64,
    #[serde(default = "ln_two")]
    pub event_log_effect: f64,
}

impl Default for CovariateConfig {
    fn default() -> Self {
        CovariateConfig {
            mode: CovariateMode::None,
            death_log_effect: ln_half(),
            event_log_effect: ln_two(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn ln_half() -> f64 {
    0.5f64.ln()
}
fn ln_two() -> f64 {
    2f64.ln()
}
fn default_censoring() -> f64 {
    0.2
}
fn default_frailty() -> f64 {
    3.0
}
fn default_replicates() -> usize {
    10_000
}
fn default_alpha() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub arm1: ArmRates,
    pub arm2: ArmRates,
    #[serde(default = "default_censoring")]
    pub censoring_rate: f64,
    #[serde(default = "default_frailty")]
    pub frailty_variance: f64,
    #[serde(default)]
    pub change_point: Option<f64>,
    #[serde(default)]
    pub covariate: CovariateConfig,
    pub n_per_arm: usize,
    pub tau: f64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub horizon: Option<f64>,
}

/// Null or alternative setting of the published scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Null,
    Alternative,
}

impl ScenarioConfig {
    /// Published settings: `λ_D = 0.2`, `λ_C = 0.2`, `n = 200` per arm,
    /// 10,000 replicates. ICR/frailty alternatives raise `λ_E1` to 1.4; the
    /// time-varying scenario uses `c = 1` and `υ = (0.5, 0.5)` under the
    /// null, `(1, 0.5)` under the alternative.
    pub fn published(kind: ScenarioKind, hypothesis: Hypothesis, tau: f64) -> ScenarioConfig {
        let rates = |event_rate, multiplier| ArmRates {
            event_rate,
            death_rate: 0.2,
            multiplier,
        };
        let (arm1, arm2, change_point) = match (kind, hypothesis) {
            (ScenarioKind::TimeVarying, Hypothesis::Null) => (rates(1.0, 0.5), rates(1.0, 0.5), Some(1.0)),
            (ScenarioKind::TimeVarying, Hypothesis::Alternative) => {
                (rates(1.0, 1.0), rates(1.0, 0.5), Some(1.0))
            }
            (_, Hypothesis::Null) => (rates(1.0, 1.0), rates(1.0, 1.0), None),
            (_, Hypothesis::Alternative) => (rates(1.4, 1.0), rates(1.0, 1.0), None),
        };
        ScenarioConfig {
            kind,
            arm1,
            arm2,
            censoring_rate: 0.2,
            frailty_variance: 3.0,
            change_point,
            covariate: CovariateConfig::default(),
            n_per_arm: 200,
            tau,
            replicates: 10_000,
            seed: 0,
            alpha: 0.05,
            horizon: None,
        }
    }

    pub fn with_covariate(mut self, mode: CovariateMode) -> Self {
        self.covariate.mode = mode;
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_toml(text: &str) -> Result<ScenarioConfig> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn rates(&self, arm: Arm) -> &ArmRates {
        match arm {
            Arm::One => &self.arm1,
            Arm::Two => &self.arm2,
        }
    }

    pub fn rates_mut(&mut self, arm: Arm) -> &mut ArmRates {
        match arm {
            Arm::One => &mut self.arm1,
            Arm::Two => &mut self.arm2,
        }
    }

    /// Administrative censoring time; keeps follow-up finite when both the
    /// death and censoring rates are zero.
    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(10.0 * self.tau)
    }

    pub fn has_covariate(&self) -> bool {
        self.covariate.mode != CovariateMode::None
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: String| Err(Error::Config(format!("{field}: {why}")));
        let nonneg = |field: &str, v: f64| -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{field}: must be finite and nonnegative, got {v}")))
            }
        };
        for (name, r) in [("arm1", &self.arm1), ("arm2", &self.arm2)] {
            nonneg(&format!("{name}.event_rate"), r.event_rate)?;
            nonneg(&format!("{name}.death_rate"), r.death_rate)?;
            nonneg(&format!("{name}.multiplier"), r.multiplier)?;
        }
        nonneg("censoring_rate", self.censoring_rate)?;
        nonneg("frailty_variance", self.frailty_variance)?;
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return bad("tau", format!("must be positive, got {}", self.tau));
        }
        if self.n_per_arm == 0 {
            return bad("n_per_arm", "must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha", format!("must lie in (0, 1), got {}", self.alpha));
        }
        if let Some(h) = self.horizon {
            if !(h.is_finite() && h >= self.tau) {
                return bad("horizon", format!("must be finite and >= tau, got {h}"));
            }
        }
        if !(self.covariate.death_log_effect.is_finite() && self.covariate.event_log_effect.is_finite())
        {
            return bad("covariate", "log effects must be finite".into());
        }
        match (self.kind, self.change_point) {
            (ScenarioKind::TimeVarying, None) => {
                return bad("change_point", "required for kind = \"time-varying\"".into())
            }
            (ScenarioKind::TimeVarying, Some(c)) if !(c > 0.0 && c < self.tau) => {
                return bad("change_point", format!("must lie in (0, tau), got {c}"))
            }
            (ScenarioKind::Icr | ScenarioKind::Frailty, Some(_)) => {
                return bad("change_point", "only valid for kind = \"time-varying\"".into())
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TV_ALT: &str = r#"
kind = "time-varying"
n_per_arm = 200
tau = 4.0
replicates = 2000
seed = 42
change_point = 1.0

[arm1]
event_rate = 1.0
death_rate = 0.2
multiplier = 1.0

[arm2]
event_rate = 1.0
death_rate = 0.2
multiplier = 0.5
"#;

    #[test]
    fn parses_and_matches_preset() {
        let cfg = ScenarioConfig::from_toml(TV_ALT).unwrap();
        let preset = ScenarioConfig::published(ScenarioKind::TimeVarying, Hypothesis::Alternative, 4.0)
            .with_replicates(2000)
            .with_seed(42);
        assert_eq!(cfg, preset);
        assert_eq!(ScenarioConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn unknown_kind_is_config_error() {
        let text = TV_ALT.replace("time-varying", "weibull");
        let err = ScenarioConfig::from_toml(&text).unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("line")), "{err}");
    }

    #[test]
    fn unknown_field_and_bad_values() {
        let err = ScenarioConfig::from_toml(&format!("{TV_ALT}\nbogus = 1\n")).unwrap_err();
        assert!(err.to_string().contains("bogus"));
        let err = ScenarioConfig::from_toml(&TV_ALT.replace("change_point = 1.0", "change_point = 5.0"))
            .unwrap_err();
        assert!(err.to_string().contains("change_point"));
        let err = ScenarioConfig::from_toml(&TV_ALT.replace("tau = 4.0", "tau = -1.0")).unwrap_err();
        assert!(err.to_string().contains("tau"));
    }
}
