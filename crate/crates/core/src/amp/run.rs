//! Damped AMP recursion for `y = k^{-1/2} A x + w`.

use rand::Rng;

use crate::channel::{cs_measure, SensingMatrix};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::signal::{sample_signal, Alphabet, ProblemDims, SparseSignal};

use super::denoiser::{Denoiser, NonseparableDenoiser, SeparableDenoiser};

/// Which denoiser AMP applies at each iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DenoiserPolicy {
    Separable,
    Nonseparable,
    /// Non-separable while the estimated input SNR exceeds `threshold_db`,
    /// separable otherwise.
    Switched { threshold_db: f64 },
}

impl DenoiserPolicy {
    pub const DEFAULT_SWITCH_DB: f64 = 6.0;

    pub fn name(&self) -> &'static str {
        match self {
            Self::Separable => "separable",
            Self::Nonseparable => "nonseparable",
            Self::Switched { .. } => "switched",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpConfig {
    pub iterations: usize,
    /// Weight of the new iterate in `θ·new + (1 − θ)·old`.
    pub damping: f64,
    pub policy: DenoiserPolicy,
    /// Stop once `v_t` exceeds this multiple of `v_0`.
    pub blowup_factor: f64,
}

impl AmpConfig {
    pub fn new(iterations: usize, damping: f64, policy: DenoiserPolicy) -> Result<Self> {
        let c = Self { iterations, damping, policy, blowup_factor: 1e3 };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Parameter("AMP needs at least one iteration".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Parameter(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        Ok(())
    }
}

/// Quantities recorded after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct AmpState {
    pub iteration: usize,
    /// Estimate after damping.
    pub x_hat: Vec<f64>,
    /// Damped residual.
    pub r: Vec<f64>,
    /// Pseudo-data fed to the denoiser.
    pub u: Vec<f64>,
    /// Effective noise variance of `u`.
    pub v: f64,
    /// Onsager coefficient used to form `r`.
    pub b: f64,
    pub input_snr_db: f64,
    pub denoiser: &'static str,
    /// `‖u − x‖²/N`, when the true signal is supplied.
    pub input_mse: Option<f64>,
    /// `‖η(u) − x‖²/k` for the undamped denoiser output.
    pub output_mse: Option<f64>,
    /// `‖x_hat − x‖²/k`.
    pub estimate_mse: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmpStatus {
    Completed,
    /// The effective noise blew up or became non-finite at this iteration.
    Diverged { iteration: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmpTrace {
    pub states: Vec<AmpState>,
    pub status: AmpStatus,
    pub estimate: Vec<f64>,
}

impl AmpTrace {
    /// `‖x̂ − x‖²/k` of the returned estimate.
    pub fn final_mse(&self, x: &SparseSignal) -> f64 {
        x.residual_sq(&self.estimate).expect("estimate has signal length") / x.k() as f64
    }
}

/// `10 log10(P_u / v)` with `P_u` the mean squared alphabet amplitude;
/// `+inf` when `v = 0`.
pub fn estimate_input_snr(v: f64, alphabet: &Alphabet) -> f64 {
    if v <= 0.0 {
        return f64::INFINITY;
    }
    10.0 * (alphabet.mean_power() / v).log10()
}

/// Input SNR on the base-noise axis: the per-coordinate variance `v` is
/// rescaled by `ln(N/k)` so it compares with `1/σ²` in AWGN sweeps.
pub fn base_axis_input_snr(v: f64, dims: &ProblemDims, alphabet: &Alphabet) -> f64 {
    estimate_input_snr(v * dims.log_ratio(), alphabet)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Runs damped AMP from `x̂ = 0`. With `Ã = k^{-1/2}A` and `γ = k/M`:
/// `r = y − Ãx̂ + b r_prev`, `v = γ‖r‖²/M`, `u = x̂ + γÃᵀr`,
/// `x̂ ← θ η(u, v) + (1 − θ) x̂`, and `r` is damped with the same `θ`.
pub fn amp_run(
    y: &[f64],
    a: &SensingMatrix,
    x_true: Option<&SparseSignal>,
    config: &AmpConfig,
    dims: &ProblemDims,
    alphabet: &Alphabet,
) -> Result<AmpTrace> {
    config.validate()?;
    let m = a.rows();
    if m == 0 || y.len() != m {
        return Err(Error::LengthMismatch { expected: m, actual: y.len() });
    }
    if a.cols() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: a.cols() });
    }
    if let Some(x) = x_true {
        if x.n() != dims.n {
            return Err(Error::LengthMismatch { expected: dims.n, actual: x.n() });
        }
    }
    let separable = SeparableDenoiser { dims: *dims, alphabet: alphabet.clone() };
    let nonseparable = NonseparableDenoiser { dims: *dims, alphabet: alphabet.clone() };
    let scale = 1.0 / (dims.k as f64).sqrt();
    let gamma = dims.k as f64 / m as f64;
    let ratio = dims.n as f64 / m as f64;
    let theta = config.damping;
    let x_dense = x_true.map(SparseSignal::to_dense);

    let mut x_hat = vec![0.0; dims.n];
    let mut r_prev: Vec<f64> = Vec::new();
    let mut div_prev = 0.0;
    let mut v0 = None;
    let mut states = Vec::with_capacity(config.iterations);
    let mut status = AmpStatus::Completed;

    for t in 0..config.iterations {
        let ax = a.matvec(&x_hat, scale)?;
        let b = if t == 0 { 0.0 } else { ratio * div_prev };
        let mut r: Vec<f64> = y.iter().zip(&ax).map(|(yi, ai)| yi - ai).collect();
        if t > 0 {
            for (ri, rp) in r.iter_mut().zip(&r_prev) {
                *ri = theta * (*ri + b * rp) + (1.0 - theta) * rp;
            }
        }
        let v = gamma * r.iter().map(|t| t * t).sum::<f64>() / m as f64;
        let v_ref = *v0.get_or_insert(v);
        if !v.is_finite() || v > config.blowup_factor * v_ref.max(f64::MIN_POSITIVE) {
            status = AmpStatus::Diverged { iteration: t };
            break;
        }
        let correction = a.matvec_t(&r, gamma * scale)?;
        let u: Vec<f64> = x_hat.iter().zip(&correction).map(|(x, c)| x + c).collect();

        let snr = base_axis_input_snr(v, dims, alphabet);
        let denoiser: &dyn Denoiser = match config.policy {
            DenoiserPolicy::Separable => &separable,
            DenoiserPolicy::Nonseparable => &nonseparable,
            DenoiserPolicy::Switched { threshold_db } if snr > threshold_db => &nonseparable,
            DenoiserPolicy::Switched { .. } => &separable,
        };
        let (candidate, div) = denoiser.denoise_with_divergence(&u, v)?;
        if candidate.iter().any(|c| !c.is_finite()) {
            status = AmpStatus::Diverged { iteration: t };
            break;
        }
        for (x, c) in x_hat.iter_mut().zip(&candidate) {
            *x = theta * c + (1.0 - theta) * *x;
        }
        let (input_mse, output_mse, estimate_mse) = match &x_dense {
            Some(x) => (
                Some(sq_dist(&u, x) / dims.n as f64),
                Some(sq_dist(&candidate, x) / dims.k as f64),
                Some(sq_dist(&x_hat, x) / dims.k as f64),
            ),
            None => (None, None, None),
        };
        states.push(AmpState {
            iteration: t,
            x_hat: x_hat.clone(),
            r: r.clone(),
            u,
            v,
            b,
            input_snr_db: snr,
            denoiser: denoiser.name(),
            input_mse,
            output_mse,
            estimate_mse,
        });
        r_prev = r;
        div_prev = div;
    }
    Ok(AmpTrace { states, status, estimate: x_hat })
}

/// One compressed-sensing problem: signal, matrix and measurements.
#[derive(Debug, Clone)]
pub struct CsInstance {
    pub x: SparseSignal,
    pub a: SensingMatrix,
    pub y: Vec<f64>,
}

impl CsInstance {
    /// Draws signal, a fresh Gaussian matrix and noise from substreams of
    /// `seed`.
    pub fn sample(dims: &ProblemDims, alphabet: &Alphabet, measurements: usize, sigma_sq: f64, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, &[0]);
        let x = sample_signal(dims, alphabet, &mut rng);
        let matrix_seed: u64 = substream(seed, &[1]).random();
        let a = SensingMatrix::gaussian(measurements, dims.n, matrix_seed);
        let y = cs_measure(&x, &a, sigma_sq, &mut rng)?;
        Ok(Self { x, a, y })
    }
}
