//! Differential-privacy calibration and noising.
//!
//! Gaussian mechanism for gradient aggregation: gradients are L2-clipped to
//! `C`, one-epoch sensitivity is `S_f = 2C/|D_i|`, and the noise scale is set
//! at the bound `sigma = c*T*S_f/eps` with `c = sqrt(2 ln(1.25/delta))`. The
//! guarantee applies for `eps < 1`. Because only the aggregate is ever
//! decrypted, each client divides the scale by the announced participant
//! count for the round.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DpError {
    #[error("invalid DP parameter: {0}")]
    BadParams(&'static str),
}

/// Privacy parameters as configured for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpParams {
    pub epsilon: f64,
    pub delta: f64,
    /// L2 clipping threshold C.
    pub clip: f64,
    /// Exposures T of local parameters (epochs per round).
    pub exposures: u32,
    pub dataset_size: usize,
    /// Number of training rounds k (queries against the mechanism).
    pub rounds: u32,
}

impl DpParams {
    pub fn validate(&self) -> Result<(), DpError> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(DpError::BadParams("epsilon must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(DpError::BadParams("delta must lie in (0, 1)"));
        }
        if !(self.clip > 0.0) || !self.clip.is_finite() {
            return Err(DpError::BadParams("clip threshold must be positive"));
        }
        if self.exposures < 1 {
            return Err(DpError::BadParams("exposures must be >= 1"));
        }
        if self.dataset_size < 1 {
            return Err(DpError::BadParams("dataset size must be >= 1"));
        }
        if self.rounds < 1 {
            return Err(DpError::BadParams("rounds must be >= 1"));
        }
        Ok(())
    }

    /// The Gaussian-mechanism guarantee is stated for eps < 1.
    pub fn gaussian_regime(&self) -> bool {
        self.epsilon < 1.0
    }
}

/// Derived noise calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseScale {
    pub sensitivity: f64,
    pub c_factor: f64,
    pub sigma: f64,
}

/// `S_f = 2C / |D_i|`.
pub fn sensitivity(clip: f64, dataset_size: usize) -> Result<f64, DpError> {
    if dataset_size == 0 {
        return Err(DpError::BadParams("dataset size must be >= 1"));
    }
    if !(clip > 0.0) {
        return Err(DpError::BadParams("clip threshold must be positive"));
    }
    Ok(2.0 * clip / dataset_size as f64)
}

/// Noise scale at the bound: `c = sqrt(2 ln(1.25/delta))`, `sigma = c*T*S_f/eps`.
pub fn noise_sigma(params: &DpParams) -> Result<NoiseScale, DpError> {
    params.validate()?;
    let s_f = sensitivity(params.clip, params.dataset_size)?;
    let c = (2.0 * (1.25 / params.delta).ln()).sqrt();
    let sigma = c * params.exposures as f64 * s_f / params.epsilon;
    Ok(NoiseScale { sensitivity: s_f, c_factor: c, sigma })
}

/// L2-clip a gradient to norm at most `clip`. The zero vector passes through.
pub fn clip(gradient: &[f64], clip: f64) -> Vec<f64> {
    let norm = gradient.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= clip || norm == 0.0 {
        gradient.to_vec()
    } else {
        let scale = clip / norm;
        gradient.iter().map(|x| x * scale).collect()
    }
}

/// Sample i.i.d. Gaussian noise with per-entry std `sigma / n_active`.
pub fn sample_noise<R: Rng>(
    scale: &NoiseScale,
    dims: usize,
    n_active: usize,
    rng: &mut R,
) -> Result<Vec<f64>, DpError> {
    if n_active == 0 {
        return Err(DpError::BadParams("active participant count must be >= 1"));
    }
    let std = scale.sigma / n_active as f64;
    if std == 0.0 {
        return Ok(vec![0.0; dims]);
    }
    let normal =
        Normal::new(0.0, std).map_err(|_| DpError::BadParams("invalid noise std"))?;
    Ok((0..dims).map(|_| normal.sample(rng)).collect())
}

/// Membership-attack advantage bound:
/// `gamma = (1 - e^{-eps} + 2 delta) / (e^{eps} + 1)`.
pub fn gamma_bound(epsilon: f64, delta: f64) -> f64 {
    (1.0 - (-epsilon).exp() + 2.0 * delta) / (epsilon.exp() + 1.0)
}

/// Absolute error bound `alpha = constant * R * sqrt(log k)` with
/// `R = S_f * sqrt(k log(1/delta)) / eps`. Natural logs throughout; for
/// `k < 2` the `log k` factor is clamped at 1 so the bound stays meaningful.
/// The constant is the asymptotic bound's hidden factor (reported, not
/// asserted; defaults to 1).
pub fn alpha_bound(s_f: f64, k: u32, delta: f64, epsilon: f64, constant: f64) -> f64 {
    let log_k = if k < 2 { 1.0 } else { (k as f64).ln() };
    let r = s_f * ((k as f64) * (1.0 / delta).ln()).sqrt() / epsilon;
    constant * r * log_k.sqrt()
}
