//! Noise thresholds, converse constants and the MSE lower bound.

use crate::error::{Error, Result};
use crate::signal::{Alphabet, ProblemDims};

/// `(u_min²/2, u_max²/2)`: ML succeeds below the first noise level and no
/// estimator can succeed above the second.
pub fn thresholds(alphabet: &Alphabet) -> (f64, f64) {
    (alphabet.u_min().powi(2) / 2.0, alphabet.u_max().powi(2) / 2.0)
}

/// Constants governing how fast `k` may grow for the converse to apply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverseConstants {
    pub c0: f64,
    pub c1_1: f64,
    pub c1_2: f64,
    pub c1: f64,
    /// Largest admissible `γ = lim ln k / ln N`, clamped to `[0, 1/2]`.
    pub gamma_max: f64,
    /// `σ² > u_max²/2`, the regime where the constants are meaningful.
    pub valid: bool,
}

pub fn converse_constants(sigma_sq: f64, alphabet: &Alphabet) -> ConverseConstants {
    let (u_min, u_max) = (alphabet.u_min(), alphabet.u_max());
    let u2 = u_max * u_max;
    let slack = 1.0 - u2 / (2.0 * sigma_sq);
    let c0 = sigma_sq / u2 * slack;
    let c1_1 = sigma_sq / (2.0 * u2) * slack * slack;
    let c1_2 = (u_max - u_min / 2.0).powi(2) / (2.0 * sigma_sq);
    let c1 = c1_1 + c1_2;
    let first = c0 / (c0 + sigma_sq / (u_max * u_min));
    let second = c1 / (c1 + 3.0);
    let gamma_max = first.min(second).min(0.5).max(0.0);
    ConverseConstants { c0, c1_1, c1_2, c1, gamma_max, valid: sigma_sq > u2 / 2.0 }
}

/// Inputs of the MSE lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseBoundParams {
    pub alpha: f64,
    /// Gap functional; zero reproduces the asymptotic converse.
    pub j: f64,
    pub u_max: f64,
    /// Prior power `E‖x‖²/k`.
    pub ex2_over_k: f64,
}

impl MseBoundParams {
    pub fn new(alpha: f64, j: f64, alphabet: &Alphabet) -> Result<Self> {
        let p = Self { alpha, j, u_max: alphabet.u_max(), ex2_over_k: alphabet.mean_power() };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let limit = 1.0 / (2.0 * self.u_max * self.u_max);
        if !(self.alpha > 0.0 && self.alpha < limit) {
            return Err(Error::Parameter(format!("alpha must lie in (0, {limit}), got {}", self.alpha)));
        }
        if !(self.j >= 0.0) {
            return Err(Error::Parameter(format!("J must be non-negative, got {}", self.j)));
        }
        Ok(())
    }
}

/// `√((1 − u⁴α²)/(1 − 2u²α)) − 1`.
pub fn f_alpha(alpha: f64, u_max: f64) -> f64 {
    let u2 = u_max * u_max;
    ((1.0 - u2 * u2 * alpha * alpha) / (1.0 - 2.0 * u2 * alpha)).sqrt() - 1.0
}

/// `C_N(α)`.
pub fn c_n_alpha(params: &MseBoundParams, dims: &ProblemDims) -> f64 {
    let u2 = params.u_max * params.u_max;
    let alpha = params.alpha;
    // (1 + 1/(N/k − 1))^k − 1
    let growth = (dims.k as f64 * (1.0 / (dims.ratio() - 1.0)).ln_1p()).exp_m1();
    let denom = 1.0 + f_alpha(alpha, params.u_max) * growth;
    (1.0 - u2 * u2 * alpha * alpha) * (alpha * params.ex2_over_k).exp() / (denom * denom)
}

/// Lower bound on `E‖x − x̂‖²/k` valid for every estimator.
pub fn mse_lower_bound(params: &MseBoundParams, dims: &ProblemDims) -> Result<f64> {
    params.validate()?;
    if dims.n <= dims.k {
        return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
    }
    Ok((c_n_alpha(params, dims) * (-2.0 * params.j).exp() - 1.0) / params.alpha)
}
