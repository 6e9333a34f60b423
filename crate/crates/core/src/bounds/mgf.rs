//! Closed-form Gaussian expectation of an exponentiated bilinear form.

use crate::error::{Error, Result};

/// `E[exp(Z₁(v Z₁ + Z₂))]` with `Zᵢ = aᵀuᵢ` and `a ~ N(0, I)`, equal to
/// `{(1 − u₂ᵀu₁)² − (2v + ‖u₂‖²)‖u₁‖²}^{−1/2}` whenever the bracket is
/// positive.
pub fn gaussian_bilinear_mgf(v: f64, u1: &[f64], u2: &[f64]) -> Result<f64> {
    if u1.len() != u2.len() {
        return Err(Error::LengthMismatch { expected: u1.len(), actual: u2.len() });
    }
    let dot: f64 = u1.iter().zip(u2).map(|(a, b)| a * b).sum();
    let n1: f64 = u1.iter().map(|a| a * a).sum();
    let n2: f64 = u2.iter().map(|a| a * a).sum();
    let det = (1.0 - dot).powi(2) - (2.0 * v + n2) * n1;
    if !(det > 0.0) {
        return Err(Error::Divergent(format!("expectation diverges: bracket = {det}")));
    }
    Ok(det.powf(-0.5))
}
