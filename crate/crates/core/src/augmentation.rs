//! Covariate augmentation of the two-sample difference.
//!
//! `Δ̂_aug = Δ̂ - β̂ᵀ(W̄_1 - W̄_2)` with `β̂ = Σ̂_W⁻¹ γ̂`, where
//!
//! ```text
//! γ̂   = Σ_j (n/n_j) n_j⁻¹ Σ_i (W_ij - W̄_j) Ψ̂_ij
//! Σ̂_W = Σ_j (n/n_j) n_j⁻¹ Σ_i (W_ij - W̄_j)(W_ij - W̄_j)ᵀ
//! ```
//!
//! and variance `Σ̂_Δ - γ̂ᵀβ̂`. The weight is only meaningful under
//! randomization (`E W̄_1 = E W̄_2`).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::data::{ArmDataset, StudyDataset};
use crate::error::{Error, Result};
use crate::inference::{
    arm_inference, combine, wald_pvalue, z_critical, ContrastKind, ContrastOptions,
    ContrastResult, InfluenceSet,
};

/// Eigenvalue ratio below which `Σ̂_W` is treated as singular.
pub const SINGULARITY_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateSummary {
    pub mean1: Vec<f64>,
    pub mean2: Vec<f64>,
    pub gamma_hat: Vec<f64>,
    /// Row-major `p × p`.
    pub sigma_w: Vec<Vec<f64>>,
    pub beta_hat: Vec<f64>,
}

impl CovariateSummary {
    pub fn mean_difference(&self) -> Vec<f64> {
        self.mean1.iter().zip(&self.mean2).map(|(a, b)| a - b).collect()
    }

    /// `γ̂ᵀβ̂`, the variance removed by augmentation.
    pub fn variance_reduction(&self) -> f64 {
        dot(&self.gamma_hat, &self.beta_hat)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn arm_moments(arm: &ArmDataset, psi: &[f64], scale: f64, gamma: &mut DVector<f64>, sigma: &mut DMatrix<f64>) -> Vec<f64> {
    let p = arm.covariate_dim();
    let n = arm.len() as f64;
    let mut mean = vec![0.0; p];
    for s in arm.subjects() {
        for (m, w) in mean.iter_mut().zip(&s.covariates) {
            *m += w;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    let factor = scale / n;
    for (s, &psi_i) in arm.subjects().iter().zip(psi) {
        let centered = DVector::from_iterator(p, s.covariates.iter().zip(&mean).map(|(w, m)| w - m));
        *gamma += &centered * (psi_i * factor);
        sigma.ger(factor, &centered, &centered, 1.0);
    }
    mean
}

/// Estimates `γ̂`, `Σ̂_W` and solves `Σ̂_W β̂ = γ̂`.
///
/// `ridge = Some(ε)` adds `ε · tr(Σ̂_W)/p · I` before the singularity check.
/// `names` label covariate directions in the singularity error.
pub fn augmentation_weights(
    study: &StudyDataset,
    inf1: &InfluenceSet,
    inf2: &InfluenceSet,
    ridge: Option<f64>,
    names: &[String],
) -> Result<CovariateSummary> {
    let p = study.covariate_dim();
    if p == 0 {
        return Err(Error::NoCovariates);
    }
    for arm in [&study.arm1, &study.arm2] {
        if arm.len() < p + 1 {
            return Err(Error::TooFewSubjects {
                arm: arm.arm,
                n: arm.len(),
                p,
                needed: p + 1,
            });
        }
    }
    let n = study.n() as f64;
    let mut gamma = DVector::zeros(p);
    let mut sigma = DMatrix::zeros(p, p);
    let mean1 = arm_moments(
        &study.arm1,
        &inf1.values,
        n / study.arm1.len() as f64,
        &mut gamma,
        &mut sigma,
    );
    let mean2 = arm_moments(
        &study.arm2,
        &inf2.values,
        n / study.arm2.len() as f64,
        &mut gamma,
        &mut sigma,
    );
    // Symmetrize rounding noise.
    sigma = (&sigma + sigma.transpose()) * 0.5;

    if let Some(eps) = ridge {
        let bump = eps * sigma.trace() / p as f64;
        for k in 0..p {
            sigma[(k, k)] += bump;
        }
    }

    let eig = SymmetricEigen::new(sigma.clone());
    let largest = eig.eigenvalues.max();
    let smallest = eig.eigenvalues.min();
    if largest <= 0.0 || smallest <= SINGULARITY_RATIO * largest {
        let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
        let directions = (0..p)
            .filter(|&k| largest <= 0.0 || eig.eigenvalues[k] <= SINGULARITY_RATIO * largest)
            .map(|k| describe_direction(eig.eigenvectors.column(k).iter().copied(), names))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::SingularCovariance { ratio, directions });
    }

    let chol = sigma.clone().cholesky().ok_or(Error::SingularCovariance {
        ratio: smallest / largest,
        directions: "cholesky factorization failed".into(),
    })?;
    let beta = chol.solve(&gamma);

    Ok(CovariateSummary {
        mean1,
        mean2,
        gamma_hat: gamma.iter().copied().collect(),
        sigma_w: (0..p)
            .map(|r| (0..p).map(|c| sigma[(r, c)]).collect())
            .collect(),
        beta_hat: beta.iter().copied().collect(),
    })
}

fn describe_direction(v: impl Iterator<Item = f64>, names: &[String]) -> String {
    let terms: Vec<String> = v
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-6)
        .map(|(k, c)| {
            let name = names.get(k).cloned().unwrap_or_else(|| format!("w{}", k + 1));
            format!("{c:+.3}*{name}")
        })
        .collect();
    format!("[{}]", terms.join(" "))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationOptions {
    pub contrast: ContrastOptions,
    pub ridge: Option<f64>,
}

impl Default for AugmentationOptions {
    fn default() -> Self {
        AugmentationOptions {
            contrast: ContrastOptions::default(),
            ridge: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedReport {
    pub unadjusted: ContrastResult,
    pub adjusted: ContrastResult,
    pub beta_hat: Vec<f64>,
    /// `(se_unadj / se_adj)²`.
    pub relative_efficiency: f64,
    pub covariate_names: Vec<String>,
    pub summary: Option<CovariateSummary>,
    pub warnings: Vec<String>,
}

pub fn augmented_contrast(
    study: &StudyDataset,
    opts: &AugmentationOptions,
    names: &[String],
) -> Result<AugmentedReport> {
    let alpha = opts.contrast.alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let a1 = arm_inference(&study.arm1, study.tau, opts.contrast.continuity);
    let a2 = arm_inference(&study.arm2, study.tau, opts.contrast.continuity);
    let unadjusted = combine(ContrastKind::Difference, study.tau, &a1, &a2, alpha)?;

    if study.covariate_dim() == 0 {
        return Ok(AugmentedReport {
            adjusted: unadjusted.clone(),
            unadjusted,
            beta_hat: Vec::new(),
            relative_efficiency: 1.0,
            covariate_names: Vec::new(),
            summary: None,
            warnings: Vec::new(),
        });
    }

    let summary = augmentation_weights(study, &a1.influence, &a2.influence, opts.ridge, names)?;
    let n = study.n() as f64;
    let sigma_delta = unadjusted.se * unadjusted.se * n;
    let mut variance = sigma_delta - summary.variance_reduction();
    let mut warnings = Vec::new();
    if variance < 0.0 {
        warnings.push(format!(
            "estimated adjusted variance {variance:.3e} is negative; clamped to zero"
        ));
        variance = 0.0;
    }
    let se = (variance / n).sqrt();
    let point = unadjusted.point - dot(&summary.beta_hat, &summary.mean_difference());
    let z = z_critical(alpha);
    let adjusted = ContrastResult {
        point,
        se,
        ci_lower: point - z * se,
        ci_upper: point + z * se,
        p_value: wald_pvalue(point, se, 0.0),
        degenerate: se == 0.0,
        ..unadjusted.clone()
    };
    let relative_efficiency = if se > 0.0 {
        (unadjusted.se / se).powi(2)
    } else {
        f64::INFINITY
    };
    Ok(AugmentedReport {
        unadjusted,
        adjusted,
        beta_hat: summary.beta_hat.clone(),
        relative_efficiency,
        covariate_names: names.to_vec(),
        summary: Some(summary),
        warnings,
    })
}
