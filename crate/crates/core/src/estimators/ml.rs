//! Maximum-likelihood estimation by order statistics, plus its brute-force
//! oracle and error classification.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::signal::{Alphabet, ProblemDims, SparseSignal};

use super::enumerate::{check_enumeration, for_each_sparse, ENUMERATION_LIMIT};

/// Nearest alphabet point; the first listed point wins ties.
pub fn hard_decision(y: f64, alphabet: &Alphabet) -> f64 {
    let mut best = alphabet.points()[0];
    let mut best_d = (y - best) * (y - best);
    for &u in &alphabet.points()[1..] {
        let d = (y - u) * (y - u);
        if d < best_d {
            best = u;
            best_d = d;
        }
    }
    best
}

/// Change in squared residual when `y` is explained by its nearest point
/// instead of zero: `min_u (y − u)² − y²`.
pub(crate) fn penalty(y: f64, alphabet: &Alphabet) -> f64 {
    let u = hard_decision(y, alphabet);
    (y - u) * (y - u) - y * y
}

/// Ranking used throughout: larger values first, ties by smaller index.
pub(crate) fn rank_cmp(y: &[f64], a: usize, b: usize) -> Ordering {
    y[b].total_cmp(&y[a]).then(a.cmp(&b))
}

/// The first `count` indices of the ranking and the last `count` (starting
/// from the very last).
pub(crate) fn ranked_extremes(y: &[f64], count: usize) -> (Vec<usize>, Vec<usize>) {
    let n = y.len();
    let count = count.min(n);
    if count == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let cmp = |a: &usize, b: &usize| rank_cmp(y, *a, *b);
    if count < n {
        idx.select_nth_unstable_by(count - 1, cmp);
    }
    let mut top = idx[..count].to_vec();
    top.sort_unstable_by(cmp);

    let rcmp = |a: &usize, b: &usize| rank_cmp(y, *b, *a);
    if count < n {
        idx.select_nth_unstable_by(count - 1, rcmp);
    }
    let mut bottom = idx[..count].to_vec();
    bottom.sort_unstable_by(rcmp);
    (top, bottom)
}

/// `min_{k₀ ≤ j}` of top-`k₀` plus bottom-`(j − k₀)` penalty sums, with the
/// smallest minimizer.
pub(crate) fn min_split(top: &[f64], bottom: &[f64], j: usize) -> (f64, usize) {
    debug_assert!(top.len() >= j && bottom.len() >= j);
    let mut bottom_prefix = vec![0.0; j + 1];
    for i in 0..j {
        bottom_prefix[i + 1] = bottom_prefix[i] + bottom[i];
    }
    let mut best = (f64::INFINITY, 0);
    let mut top_sum = 0.0;
    for k0 in 0..=j {
        if k0 > 0 {
            top_sum += top[k0 - 1];
        }
        let v = top_sum + bottom_prefix[j - k0];
        if v < best.0 {
            best = (v, k0);
        }
    }
    best
}

/// The ML objective as a function of how many non-zeros are placed at the
/// largest observations.
#[derive(Debug, Clone, PartialEq)]
pub struct XiProfile {
    /// Residual `‖y − x‖²` of the best candidate with `k₀` non-zeros at the
    /// top and `k − k₀` at the bottom, for `k₀ = 0..=k`.
    pub xi_values: Vec<f64>,
    /// Smallest minimizing `k₀`.
    pub k_star: usize,
    pub total_sq: f64,
    /// Indices of the `k` largest observations, largest first.
    pub top_indices: Vec<usize>,
    /// Indices of the `k` smallest observations, smallest first.
    pub bottom_indices: Vec<usize>,
    pub top_penalties: Vec<f64>,
    pub bottom_penalties: Vec<f64>,
}

impl XiProfile {
    /// Sum of the penalties selected at `k0`.
    pub fn boundary_sum(&self, k0: usize) -> f64 {
        let k = self.top_penalties.len();
        self.top_penalties[..k0].iter().sum::<f64>() + self.bottom_penalties[..k - k0].iter().sum::<f64>()
    }

    pub fn min_value(&self) -> f64 {
        self.xi_values[self.k_star]
    }
}

/// Evaluates the ML objective for every split `k₀`; requires `N ≥ 2k`.
pub fn xi_profile(y: &[f64], k: usize, alphabet: &Alphabet) -> Result<XiProfile> {
    if y.len() < 2 * k {
        return Err(Error::Dimension(format!("need N >= 2k, got N={}, k={k}", y.len())));
    }
    let total_sq: f64 = y.iter().map(|v| v * v).sum();
    let (top_indices, bottom_indices) = ranked_extremes(y, k);
    let top_penalties: Vec<f64> = top_indices.iter().map(|&i| penalty(y[i], alphabet)).collect();
    let bottom_penalties: Vec<f64> = bottom_indices.iter().map(|&i| penalty(y[i], alphabet)).collect();

    let mut bottom_prefix = vec![0.0; k + 1];
    for i in 0..k {
        bottom_prefix[i + 1] = bottom_prefix[i] + bottom_penalties[i];
    }
    let mut xi_values = Vec::with_capacity(k + 1);
    let mut top_sum = 0.0;
    for k0 in 0..=k {
        if k0 > 0 {
            top_sum += top_penalties[k0 - 1];
        }
        xi_values.push(total_sq + (top_sum + bottom_prefix[k - k0]));
    }
    let mut k_star = 0;
    for (k0, &v) in xi_values.iter().enumerate() {
        if v < xi_values[k_star] {
            k_star = k0;
        }
    }
    Ok(XiProfile { xi_values, k_star, total_sq, top_indices, bottom_indices, top_penalties, bottom_penalties })
}

/// Exact ML estimate over all `k`-sparse signals with values in `U`.
pub fn ml_estimate(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet) -> Result<SparseSignal> {
    if y.len() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: y.len() });
    }
    let profile = xi_profile(y, dims.k, alphabet)?;
    let pairs = profile.top_indices[..profile.k_star]
        .iter()
        .chain(&profile.bottom_indices[..dims.k - profile.k_star])
        .map(|&i| (i, hard_decision(y[i], alphabet)))
        .collect();
    SparseSignal::from_pairs(dims.n, pairs, alphabet)
}

/// `‖y − x‖²` summed in index order.
pub fn residual_sq(y: &[f64], x: &[f64]) -> f64 {
    y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Exhaustive minimizer of `‖y − x‖²`; the lexicographically first
/// (support, value indices) wins ties.
pub fn brute_force_ml(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet) -> Result<SparseSignal> {
    if y.len() != dims.n {
        return Err(Error::LengthMismatch { expected: dims.n, actual: y.len() });
    }
    check_enumeration(dims.n, dims.k, alphabet.len(), ENUMERATION_LIMIT)?;
    let points = alphabet.points();
    let mut dense = vec![0.0; dims.n];
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for_each_sparse(dims.n, dims.k, alphabet.len(), |support, values| {
        for (&i, &m) in support.iter().zip(values) {
            dense[i] = points[m];
        }
        let r = residual_sq(y, &dense);
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, support.to_vec(), values.to_vec()));
        }
        for &i in support {
            dense[i] = 0.0;
        }
    });
    let (_, support, values) = best.expect("candidate set is non-empty");
    SparseSignal::new(dims.n, support, values.into_iter().map(|m| points[m]).collect(), alphabet)
}

/// Support errors `w` and value errors `w′` of an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrorType {
    pub w: usize,
    pub w_prime: usize,
}

pub fn classify_error(x: &SparseSignal, xhat: &SparseSignal) -> Result<ErrorType> {
    if x.n() != xhat.n() {
        return Err(Error::LengthMismatch { expected: x.n(), actual: xhat.n() });
    }
    let mut w = 0;
    let mut w_prime = 0;
    for (i, v) in x.iter() {
        match xhat.support().binary_search(&i) {
            Ok(p) if xhat.values()[p] != v => w_prime += 1,
            Ok(_) => {}
            Err(_) => w += 1,
        }
    }
    Ok(ErrorType { w, w_prime })
}
