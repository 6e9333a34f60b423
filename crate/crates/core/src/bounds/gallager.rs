//! Union bounds on the ML error probability by error type.

use crate::error::{Error, Result};
use crate::logmath::{ln_binomial, log_sum_exp_sorted};
use crate::signal::{Alphabet, ProblemDims};

use super::reliability::reliability_function;

/// `d = ⌈k / √ln(N/k)⌉`, the smallest error weight the total bound counts.
pub fn truncation_level(dims: &ProblemDims) -> usize {
    (dims.k as f64 / dims.log_ratio().sqrt()).ceil().max(1.0) as usize
}

/// Inputs of a single error-type bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GallagerParams {
    pub w: usize,
    pub w_prime: usize,
    pub sigma_sq: f64,
    pub alphabet: Alphabet,
    pub dims: ProblemDims,
}

impl GallagerParams {
    pub fn new(w: usize, w_prime: usize, sigma_sq: f64, alphabet: Alphabet, dims: ProblemDims) -> Result<Self> {
        if w > dims.k || w_prime > dims.k - w {
            return Err(Error::Parameter(format!("need w <= k and w' <= k - w, got w={w}, w'={w_prime}, k={}", dims.k)));
        }
        if !(sigma_sq > 0.0) {
            return Err(Error::Parameter(format!("sigma^2 must be positive, got {sigma_sq}")));
        }
        if dims.n <= dims.k {
            return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
        }
        Ok(Self { w, w_prime, sigma_sq, alphabet, dims })
    }

    pub fn d(&self) -> usize {
        truncation_level(&self.dims)
    }
}

/// Natural log of the bound on `P(w support errors, w′ value errors)`;
/// `-inf` when the event is impossible.
pub fn ln_gallager_type_bound(p: &GallagerParams) -> f64 {
    let k = p.dims.k as u64;
    let m = p.alphabet.len() as f64;
    let (w, wp) = (p.w as u64, p.w_prime as u64);
    let ln_ratio = p.dims.log_ratio();
    if m == 1.0 && wp > 0 {
        return f64::NEG_INFINITY;
    }
    let value_term = if wp > 0 { wp as f64 * (m - 1.0).ln() } else { 0.0 };
    if w == 0 {
        if wp == 0 {
            return 0.0;
        }
        let d2 = p.alphabet.d_min().map_or(0.0, |d| d * d);
        let exponent = d2 * wp as f64 / (8.0 * p.sigma_sq);
        return ln_binomial(k, wp) + value_term - exponent * ln_ratio;
    }
    let e = reliability_function(p.w, p.w_prime, p.sigma_sq, &p.alphabet).expect("validated parameters");
    let wf = w as f64;
    wf * (std::f64::consts::E * k as f64 / wf).ln() + ln_binomial(k - w, wp) + wf * m.ln() + value_term - e * ln_ratio
}

pub fn gallager_type_bound(p: &GallagerParams) -> f64 {
    ln_gallager_type_bound(p).exp()
}

/// Natural log of the sum of the type bounds over all `(w, w′)` with
/// `w + w′ ≥ d`.
pub fn ln_error_prob_bound_total(dims: &ProblemDims, alphabet: &Alphabet, sigma_sq: f64) -> Result<f64> {
    let d = truncation_level(dims);
    let mut terms = Vec::new();
    for w in 0..=dims.k {
        for wp in 0..=dims.k - w {
            if w + wp < d {
                continue;
            }
            let p = GallagerParams::new(w, wp, sigma_sq, alphabet.clone(), *dims)?;
            terms.push(ln_gallager_type_bound(&p));
        }
    }
    Ok(log_sum_exp_sorted(&mut terms))
}

/// Raw (unclamped) total error-probability bound.
pub fn error_prob_bound_total(dims: &ProblemDims, alphabet: &Alphabet, sigma_sq: f64) -> Result<f64> {
    Ok(ln_error_prob_bound_total(dims, alphabet, sigma_sq)?.exp())
}

/// `‖x − x̂‖²` level `max{2u_max², d_max²}·d` that only errors of weight
/// `w + w′ ≥ d` can reach.
pub fn error_event_level(dims: &ProblemDims, alphabet: &Alphabet) -> f64 {
    let per_error = alphabet.d_max().map_or(0.0, |d| d * d).max(2.0 * alphabet.u_max().powi(2));
    per_error * truncation_level(dims) as f64
}
