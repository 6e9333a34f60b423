//! Posterior-mean style estimators.

use crate::error::{Error, Result};
use crate::signal::{Alphabet, ProblemDims};

use super::enumerate::{check_enumeration, for_each_sparse, ENUMERATION_LIMIT};
use super::ml::{min_split, penalty, ranked_extremes, xi_profile};

/// Floor applied to noise variances so that a noiseless state still yields
/// finite logits.
const MIN_VARIANCE: f64 = 1e-300;

/// First and second posterior moments of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub second: f64,
}

impl Moments {
    /// Derivative of the posterior mean with respect to the observation when
    /// the logits are `(u y − c_u) / v` with `c_u` independent of `y`.
    pub fn slope(&self, v: f64) -> f64 {
        (self.second - self.mean * self.mean) / v.max(MIN_VARIANCE)
    }
}

/// Moments of a discrete distribution over `{0} ∪ U` given unnormalized
/// log-weights (the zero class has log-weight 0). Terms are summed in a
/// canonical order so that sign-symmetric inputs give exactly negated means.
fn moments_from_logits(terms: &mut Vec<(f64, f64)>) -> Moments {
    terms.push((0.0, 0.0));
    terms.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let max = terms[0].0;
    let (mut z, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for &(logit, u) in terms.iter() {
        let e = (logit - max).exp();
        z += e;
        m1 += u * e;
        m2 += u * u * e;
    }
    Moments { mean: m1 / z, second: m2 / z }
}

fn check_variance(v: f64) -> Result<()> {
    if !(v >= 0.0) || v.is_infinite() {
        return Err(Error::Parameter(format!("noise variance must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// Element-wise posterior moments under the i.i.d. prior
/// `P(x_n = u) = k/(NM)`, `P(x_n = 0) = 1 − k/N`.
pub fn separable_denoise(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet, v: f64) -> Result<Vec<Moments>> {
    if dims.n <= dims.k {
        return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
    }
    check_variance(v)?;
    let v = v.max(MIN_VARIANCE);
    let log_odds = (dims.k as f64 / (alphabet.len() as f64 * (dims.n - dims.k) as f64)).ln();
    let points = alphabet.points();
    let mut terms = Vec::with_capacity(points.len() + 1);
    Ok(y
        .iter()
        .map(|&yn| {
            terms.clear();
            terms.extend(points.iter().map(|&u| (log_odds + (u * yn - 0.5 * u * u) / v, u)));
            moments_from_logits(&mut terms)
        })
        .collect())
}

/// Element-wise posterior mean under the i.i.d. marginal prior.
pub fn separable_bayes(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet, sigma_eff_sq: f64) -> Result<Vec<f64>> {
    Ok(separable_denoise(y, dims, alphabet, sigma_eff_sq)?.iter().map(|m| m.mean).collect())
}

/// `ℓ_m` for one left-out observation vector, evaluated by two full ML
/// objective sweeps. `y_minus_n` has length `N − 1 ≥ 2k`.
pub fn ell_m(y_minus_n: &[f64], m: usize, k: usize, alphabet: &Alphabet) -> Result<f64> {
    let u = *alphabet
        .points()
        .get(m)
        .ok_or_else(|| Error::Parameter(format!("alphabet index {m} out of range")))?;
    Ok(u * u + loo_gap_naive(y_minus_n, k, alphabet)?)
}

/// `min ξ_{k−1} − min ξ_k` on the left-out vector.
fn loo_gap_naive(z: &[f64], k: usize, alphabet: &Alphabet) -> Result<f64> {
    if k == 0 || z.len() < 2 * k {
        return Err(Error::Dimension(format!("need N - 1 >= 2k >= 2, got N-1={}, k={k}", z.len())));
    }
    Ok(xi_profile(z, k - 1, alphabet)?.min_value() - xi_profile(z, k, alphabet)?.min_value())
}

/// Precomputed leave-one-out statistics for the non-separable estimator.
///
/// Removing one observation only changes the ranked extremes when it is
/// itself among the `k + 1` largest or smallest, so every other coordinate
/// shares one residual gap and the rest are recomputed from `O(k)` windows.
#[derive(Debug, Clone)]
pub struct DenoiserContext {
    dims: ProblemDims,
    alphabet: Alphabet,
    variance: f64,
    top: Vec<usize>,
    bottom: Vec<usize>,
    top_penalties: Vec<f64>,
    bottom_penalties: Vec<f64>,
    gaps: Vec<f64>,
}

impl DenoiserContext {
    pub fn new(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet, variance: f64) -> Result<Self> {
        if y.len() != dims.n {
            return Err(Error::LengthMismatch { expected: dims.n, actual: y.len() });
        }
        if dims.k == 0 || dims.n < 2 * dims.k + 1 {
            return Err(Error::Dimension(format!("need N - 1 >= 2k, got N={}, k={}", dims.n, dims.k)));
        }
        check_variance(variance)?;
        let k = dims.k;
        let (top, bottom) = ranked_extremes(y, k + 1);
        let top_penalties: Vec<f64> = top.iter().map(|&i| penalty(y[i], alphabet)).collect();
        let bottom_penalties: Vec<f64> = bottom.iter().map(|&i| penalty(y[i], alphabet)).collect();

        let gap = |t: &[f64], b: &[f64]| min_split(t, b, k - 1).0 - min_split(t, b, k).0;
        let common = gap(&top_penalties[..k], &bottom_penalties[..k]);
        let mut gaps = vec![common; dims.n];
        let without = |idx: &[usize], pen: &[f64], n: usize| -> Vec<f64> {
            idx.iter().zip(pen).filter(|(&i, _)| i != n).map(|(_, &p)| p).take(k).collect()
        };
        for &n in top.iter().chain(&bottom) {
            let t = without(&top, &top_penalties, n);
            let b = without(&bottom, &bottom_penalties, n);
            gaps[n] = gap(&t, &b);
        }
        Ok(Self { dims: *dims, alphabet: alphabet.clone(), variance, top, bottom, top_penalties, bottom_penalties, gaps })
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Indices of the `k + 1` largest observations, largest first.
    pub fn top(&self) -> &[usize] {
        &self.top
    }

    /// Indices of the `k + 1` smallest observations, smallest first.
    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    pub fn top_penalties(&self) -> &[f64] {
        &self.top_penalties
    }

    pub fn bottom_penalties(&self) -> &[f64] {
        &self.bottom_penalties
    }

    /// `ℓ_m(y_∖n)`.
    pub fn ell(&self, n: usize, m: usize) -> f64 {
        let u = self.alphabet.points()[m];
        u * u + self.gaps[n]
    }

    /// Posterior-style moments of coordinate `n` given its observation `yn`.
    pub fn moments_at(&self, n: usize, yn: f64) -> Moments {
        let v = self.variance.max(MIN_VARIANCE);
        let ln_m = (self.alphabet.len() as f64).ln();
        let mut terms: Vec<(f64, f64)> = self
            .alphabet
            .points()
            .iter()
            .map(|&u| (-ln_m + (u * yn - 0.5 * (u * u + self.gaps[n])) / v, u))
            .collect();
        moments_from_logits(&mut terms)
    }

    pub fn moments(&self, y: &[f64]) -> Vec<Moments> {
        y.iter().enumerate().map(|(n, &yn)| self.moments_at(n, yn)).collect()
    }
}

/// Non-separable estimate: each coordinate's prior odds come from the ML
/// residual gap of the remaining observations.
pub fn nonseparable_bayes(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet, sigma_eff_sq: f64) -> Result<Vec<f64>> {
    let ctx = DenoiserContext::new(y, dims, alphabet, sigma_eff_sq)?;
    Ok(ctx.moments(y).iter().map(|m| m.mean).collect())
}

/// Reference implementation rebuilding each left-out vector; `O(N² log N)`.
pub fn nonseparable_bayes_naive(
    y: &[f64],
    dims: &ProblemDims,
    alphabet: &Alphabet,
    sigma_eff_sq: f64,
) -> Result<Vec<f64>> {
    if y.len() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: y.len() });
    }
    check_variance(sigma_eff_sq)?;
    let v = sigma_eff_sq.max(MIN_VARIANCE);
    let ln_m = (alphabet.len() as f64).ln();
    let mut z = Vec::with_capacity(y.len());
    (0..y.len())
        .map(|n| {
            z.clear();
            z.extend(y.iter().enumerate().filter(|(i, _)| *i != n).map(|(_, &v)| v));
            let mut terms = Vec::with_capacity(alphabet.len());
            for m in 0..alphabet.len() {
                let u = alphabet.points()[m];
                terms.push((-ln_m + (u * y[n] - 0.5 * ell_m(&z, m, dims.k, alphabet)?) / v, u));
            }
            Ok(moments_from_logits(&mut terms).mean)
        })
        .collect()
}

/// `E[x | y]` under uniform support and values, by enumeration of every
/// candidate signal.
pub fn exact_posterior_mean(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet, sigma_eff_sq: f64) -> Result<Vec<f64>> {
    if y.len() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: y.len() });
    }
    if !(sigma_eff_sq > 0.0) {
        return Err(Error::Parameter(format!("noise variance must be positive, got {sigma_eff_sq}")));
    }
    check_enumeration(dims.n, dims.k, alphabet.len(), ENUMERATION_LIMIT)?;
    let points = alphabet.points();
    let log_weight = |support: &[usize], values: &[usize]| -> f64 {
        let mut s = 0.0;
        for (&i, &m) in support.iter().zip(values) {
            let u = points[m];
            s += u * y[i] - 0.5 * u * u;
        }
        s / sigma_eff_sq
    };
    let mut max = f64::NEG_INFINITY;
    for_each_sparse(dims.n, dims.k, points.len(), |s, v| max = max.max(log_weight(s, v)));
    let mut total = 0.0;
    let mut acc = vec![0.0; dims.n];
    for_each_sparse(dims.n, dims.k, points.len(), |s, v| {
        let w = (log_weight(s, v) - max).exp();
        total += w;
        for (&i, &m) in s.iter().zip(v) {
            acc[i] += w * points[m];
        }
    });
    Ok(acc.into_iter().map(|a| a / total).collect())
}
