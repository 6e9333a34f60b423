//! Log-domain helpers shared by the estimators and bounds.

use statrs::function::gamma::ln_gamma;

/// `ln Σ exp(v)`; `-inf` for empty input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln Σ exp(v)` accumulated in ascending order of the terms.
pub fn log_sum_exp_sorted(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let max = match values.last() {
        Some(&m) if m.is_finite() => m,
        Some(&m) => return m,
        None => return f64::NEG_INFINITY,
    };
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln C(n, r)` via log-gamma; `-inf` when `r > n`.
pub fn ln_binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return f64::NEG_INFINITY;
    }
    if r == 0 || r == n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(r as f64 + 1.0) - ln_gamma((n - r) as f64 + 1.0)
}

/// Number of elements of `X_k^N(U)`, i.e. `C(N, k) M^k`, as a float.
pub fn sparse_set_size(n: usize, k: usize, m: usize) -> f64 {
    (ln_binomial(n as u64, k as u64) + k as f64 * (m as f64).ln()).exp()
}
