//! Monte Carlo estimate of the divergence between the true output density
//! and a matched-power white Gaussian.

use rayon::prelude::*;

use crate::channel::awgn_transmit;
use crate::error::Result;
use crate::estimators::{check_enumeration, for_each_sparse};
use crate::logmath::{log_sum_exp, sparse_set_size};
use crate::rng::substream;
use crate::signal::{sample_signal, Alphabet, NoiseModel, ProblemDims};
use crate::stats::MeanEstimate;

/// Candidate-set size accepted by [`kl_estimate_small`].
pub const KL_ENUMERATION_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlEstimate {
    /// Variance inflation `1 + E‖x‖²/(N σ²_eff)` of the Gaussian reference.
    pub lambda: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Estimates `D(p‖q)` where `p` is the exact output density of the AWGN
/// channel and `q = N(0, λσ²_eff I)` has the same average power. Sample `i`
/// uses substream `(seed, i)`.
pub fn kl_estimate_small(
    dims: &ProblemDims,
    alphabet: &Alphabet,
    sigma_sq: f64,
    samples: usize,
    seed: u64,
) -> Result<KlEstimate> {
    check_enumeration(dims.n, dims.k, alphabet.len(), KL_ENUMERATION_LIMIT)?;
    let noise = NoiseModel::new(sigma_sq, dims)?;
    let v = noise.sigma_eff_sq;
    let lambda = 1.0 + dims.k as f64 * alphabet.mean_power() / (dims.n as f64 * v);
    let ln_count = sparse_set_size(dims.n, dims.k, alphabet.len()).ln();

    // (support, values) of every candidate, flattened once.
    let mut candidates: Vec<Vec<(usize, f64)>> = Vec::new();
    let points = alphabet.points();
    for_each_sparse(dims.n, dims.k, points.len(), |s, m| {
        candidates.push(s.iter().zip(m).map(|(&i, &j)| (i, points[j])).collect());
    });

    let log_ratios: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(candidates.len()),
            |scores, i| {
                let mut rng = substream(seed, &[i]);
                let x = sample_signal(dims, alphabet, &mut rng);
                let y = awgn_transmit(&x, &noise, &mut rng);
                let energy: f64 = y.iter().map(|t| t * t).sum();
                scores.clear();
                scores.extend(candidates.iter().map(|c| {
                    c.iter().map(|&(j, u)| u * y[j] - 0.5 * u * u).sum::<f64>() / v
                }));
                0.5 * dims.n as f64 * lambda.ln() - (lambda - 1.0) * energy / (2.0 * lambda * v)
                    + log_sum_exp(scores)
                    - ln_count
            },
        )
        .collect();
    let est = MeanEstimate::from_samples(&log_ratios);
    Ok(KlEstimate { lambda, estimate: est.mean, std_err: est.std_err, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonnegative_up_to_noise() {
        let dims = ProblemDims::new(6, 1).unwrap();
        for &s in &[0.3, 1.0, 5.0] {
            let e = kl_estimate_small(&dims, &Alphabet::unit(), s, 4000, 3).unwrap();
            assert!(e.estimate >= -3.0 * e.std_err, "{e:?}");
        }
    }

    #[test]
    fn lambda_value() {
        let dims = ProblemDims::new(8, 1).unwrap();
        let e = kl_estimate_small(&dims, &Alphabet::unit(), 1.0, 10, 1).unwrap();
        let v = 1.0 / 8f64.ln();
        assert!((e.lambda - (1.0 + 1.0 / (8.0 * v))).abs() < 1e-14);
    }

    #[test]
    fn deterministic() {
        let dims = ProblemDims::new(6, 2).unwrap();
        let a = Alphabet::new(vec![1.0, -1.0]).unwrap();
        let e1 = kl_estimate_small(&dims, &a, 1.0, 500, 9).unwrap();
        let e2 = kl_estimate_small(&dims, &a, 1.0, 500, 9).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn guard() {
        let dims = ProblemDims::new(100, 4).unwrap();
        assert!(kl_estimate_small(&dims, &Alphabet::unit(), 1.0, 10, 0).is_err());
    }
}
