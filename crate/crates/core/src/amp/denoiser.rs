//! Denoisers usable inside AMP.

use crate::error::{Error, Result};
use crate::estimators::{separable_denoise, DenoiserContext, Moments};
use crate::signal::{Alphabet, ProblemDims};

/// A map from pseudo-data `u = x + noise` (noise variance `v`) to an
/// estimate of `x`, with the mean of its element-wise derivatives.
pub trait Denoiser: Send + Sync {
    fn denoise(&self, u: &[f64], v: f64) -> Result<Vec<f64>>;

    /// `(1/N) Σ_n ∂η_n/∂u_n`.
    fn divergence(&self, u: &[f64], v: f64) -> Result<f64>;

    fn denoise_with_divergence(&self, u: &[f64], v: f64) -> Result<(Vec<f64>, f64)> {
        Ok((self.denoise(u, v)?, self.divergence(u, v)?))
    }

    fn name(&self) -> &'static str;
}

fn split(moments: &[Moments], v: f64) -> (Vec<f64>, f64) {
    let div = moments.iter().map(|m| m.slope(v)).sum::<f64>() / moments.len().max(1) as f64;
    (moments.iter().map(|m| m.mean).collect(), div)
}

fn check_len(u: &[f64], dims: &ProblemDims) -> Result<()> {
    if u.len() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: u.len() });
    }
    Ok(())
}

/// Element-wise posterior mean under the i.i.d. marginal prior.
#[derive(Debug, Clone)]
pub struct SeparableDenoiser {
    pub dims: ProblemDims,
    pub alphabet: Alphabet,
}

impl Denoiser for SeparableDenoiser {
    fn denoise(&self, u: &[f64], v: f64) -> Result<Vec<f64>> {
        Ok(self.denoise_with_divergence(u, v)?.0)
    }

    fn divergence(&self, u: &[f64], v: f64) -> Result<f64> {
        Ok(self.denoise_with_divergence(u, v)?.1)
    }

    fn denoise_with_divergence(&self, u: &[f64], v: f64) -> Result<(Vec<f64>, f64)> {
        check_len(u, &self.dims)?;
        Ok(split(&separable_denoise(u, &self.dims, &self.alphabet, v)?, v))
    }

    fn name(&self) -> &'static str {
        "separable"
    }
}

/// The leave-one-out ML-gap estimator. Its prior odds for coordinate `n`
/// depend only on the other coordinates, so the derivative is the posterior
/// variance over `v`.
#[derive(Debug, Clone)]
pub struct NonseparableDenoiser {
    pub dims: ProblemDims,
    pub alphabet: Alphabet,
}

impl Denoiser for NonseparableDenoiser {
    fn denoise(&self, u: &[f64], v: f64) -> Result<Vec<f64>> {
        Ok(self.denoise_with_divergence(u, v)?.0)
    }

    fn divergence(&self, u: &[f64], v: f64) -> Result<f64> {
        Ok(self.denoise_with_divergence(u, v)?.1)
    }

    fn denoise_with_divergence(&self, u: &[f64], v: f64) -> Result<(Vec<f64>, f64)> {
        check_len(u, &self.dims)?;
        let ctx = DenoiserContext::new(u, &self.dims, &self.alphabet, v)?;
        Ok(split(&ctx.moments(u), v))
    }

    fn name(&self) -> &'static str {
        "nonseparable"
    }
}

/// Mean central finite-difference derivative, step `h·(1 + |u_n|)`.
pub fn finite_difference_divergence<D: Denoiser + ?Sized>(denoiser: &D, u: &[f64], v: f64, h: f64) -> Result<f64> {
    let mut probe = u.to_vec();
    let mut total = 0.0;
    for n in 0..u.len() {
        let step = h * (1.0 + u[n].abs());
        probe[n] = u[n] + step;
        let plus = denoiser.denoise(&probe, v)?[n];
        probe[n] = u[n] - step;
        let minus = denoiser.denoise(&probe, v)?[n];
        probe[n] = u[n];
        total += (plus - minus) / (2.0 * step);
    }
    Ok(total / u.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::signal::sample_signal;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn noisy(dims: &ProblemDims, a: &Alphabet, v: f64, seed: u64) -> Vec<f64> {
        let mut rng = substream(seed, &[]);
        let x = sample_signal(dims, a, &mut rng);
        x.to_dense().iter().map(|t| t + v.sqrt() * rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn divergence_matches_finite_differences() {
        let dims = ProblemDims::new(60, 4).unwrap();
        for a in [Alphabet::unit(), Alphabet::new(vec![1.0, -1.0]).unwrap(), Alphabet::new(vec![1.0, -2.0, 0.5]).unwrap()] {
            for (i, &v) in [0.05, 0.3, 1.0].iter().enumerate() {
                let u = noisy(&dims, &a, v, i as u64);
                let denoisers: [Box<dyn Denoiser>; 2] = [
                    Box::new(SeparableDenoiser { dims, alphabet: a.clone() }),
                    Box::new(NonseparableDenoiser { dims, alphabet: a.clone() }),
                ];
                for d in denoisers {
                    let analytic = d.divergence(&u, v).unwrap();
                    let fd = finite_difference_divergence(d.as_ref(), &u, v, 1e-5).unwrap();
                    assert!(
                        (analytic - fd).abs() <= 1e-5 * analytic.abs().max(1.0),
                        "{}: {analytic} vs {fd}",
                        d.name()
                    );
                }
            }
        }
    }

    #[test]
    fn length_checked() {
        let dims = ProblemDims::new(10, 2).unwrap();
        let d = SeparableDenoiser { dims, alphabet: Alphabet::unit() };
        assert!(d.denoise(&[0.0; 9], 1.0).is_err());
    }
}
