//! Matching coefficients comparing sums over sparse sets of different
//! weights.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::estimators::for_each_sparse;

/// `L = Π_{i<w′−w} (w′ − i)/(k − w − i)` as a float and its ceiling.
///
/// The product is accumulated as an exact reduced fraction while it fits in
/// 128 bits, so the ceiling is exact for the sizes used in practice.
pub fn matching_coefficients(w: usize, w_prime: usize, k: usize) -> Result<(f64, u64)> {
    if w > w_prime || w_prime > k {
        return Err(Error::Parameter(format!("need w <= w' <= k, got w={w}, w'={w_prime}, k={k}")));
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut exact = true;
    let mut approx = 1.0f64;
    for i in 0..(w_prime - w) {
        let (a, b) = ((w_prime - i) as u128, (k - w - i) as u128);
        approx *= a as f64 / b as f64;
        if exact {
            match (num.checked_mul(a), den.checked_mul(b)) {
                (Some(n), Some(d)) => {
                    let g = n.gcd(&d);
                    num = n / g;
                    den = d / g;
                }
                _ => exact = false,
            }
        }
    }
    if exact {
        let ceil = num.div_ceil(den);
        Ok((num as f64 / den as f64, ceil as u64))
    } else {
        Ok((approx, approx.ceil() as u64))
    }
}

/// `H_w(j)`: `1` for `w = 0`, otherwise
/// `Σ_{w′} C(j, w′) ⌈L^{k−j}_{k−w−w′, k−j}⌉` over
/// `max(j − w, 0) ≤ w′ ≤ min(j, k − w)`.
pub fn h_coeff(w: usize, j: usize, k: usize) -> Result<u64> {
    if w > k || j > k {
        return Err(Error::Parameter(format!("need w <= k and j <= k, got w={w}, j={j}, k={k}")));
    }
    if w == 0 {
        return Ok(1);
    }
    let mut total = 0u64;
    for wp in j.saturating_sub(w)..=j.min(k - w) {
        let (_, l) = matching_coefficients(k - w - wp, k - j, k - j)?;
        total += binomial_u64(j, wp) * l;
    }
    Ok(total)
}

fn binomial_u64(n: usize, r: usize) -> u64 {
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `Σ_{x ∈ X_w^k(U)} Π_i f_i(x_i)` where `zero[i] = f_i(0)` and
/// `nonzero[i][m] = f_i(u_m)`.
pub fn weighted_sparse_sum(w: usize, zero: &[f64], nonzero: &[Vec<f64>]) -> f64 {
    let k = zero.len();
    let m = nonzero.first().map_or(0, Vec::len);
    let mut total = 0.0;
    let mut on = vec![false; k];
    for_each_sparse(k, w, m, |support, values| {
        on.iter_mut().for_each(|b| *b = false);
        let mut prod = 1.0;
        for (&i, &v) in support.iter().zip(values) {
            on[i] = true;
            prod *= nonzero[i][v];
        }
        for (i, &z) in zero.iter().enumerate() {
            if !on[i] {
                prod *= z;
            }
        }
        total += prod;
    });
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_examples() {
        assert_eq!(matching_coefficients(1, 2, 3).unwrap(), (1.0, 1));
        assert_eq!(matching_coefficients(1, 2, 2).unwrap(), (2.0, 2));
        assert_eq!(matching_coefficients(2, 2, 5).unwrap(), (1.0, 1));
        let (l, c) = matching_coefficients(0, 2, 5).unwrap();
        assert!((l - 0.1).abs() < 1e-15);
        assert_eq!(c, 1);
        assert!(matching_coefficients(3, 2, 5).is_err());
    }

    #[test]
    fn l_at_most_one_below_half() {
        // w + w′ ≤ k makes every factor (w′ − i)/(k − w − i) ≤ 1
        for k in 1..12 {
            for w in 0..=k {
                for wp in w..=k {
                    let (l, _) = matching_coefficients(w, wp, k).unwrap();
                    if w + wp <= k {
                        assert!(l <= 1.0 + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn h_examples() {
        for j in 0..5 {
            assert_eq!(h_coeff(0, j, 4).unwrap(), 1);
        }
        // w = k, j = 0: the single term C(0, 0)⌈L^3_{0,3}⌉ = 1
        assert_eq!(h_coeff(3, 0, 3).unwrap(), 1);
        // k = 2, w = 1, j = 1: w′ ∈ {0, 1}: C(1,0)⌈L^1_{1,1}⌉ + C(1,1)⌈L^1_{0,1}⌉ = 1 + 1
        assert_eq!(h_coeff(1, 1, 2).unwrap(), 2);
    }

    #[test]
    fn h_upper_bound() {
        // H_w(j) ≤ k^{w−j}(k+1)^j; equality occurs, e.g. k = 2, w = 1, j = 0
        for k in 1..9u32 {
            for w in 1..k as usize {
                for j in 0..=k as usize {
                    let h = h_coeff(w, j, k as usize).unwrap() as f64;
                    let bound = (k as f64).powi(w as i32 - j as i32) * ((k + 1) as f64).powi(j as i32);
                    assert!(h <= bound, "k={k} w={w} j={j}: {h} > {bound}");
                }
            }
        }
    }

    #[test]
    fn weighted_sum_counts() {
        let zero = vec![1.0; 4];
        let nonzero = vec![vec![1.0, 1.0]; 4];
        assert_eq!(weighted_sparse_sum(2, &zero, &nonzero), 6.0 * 4.0);
        assert_eq!(weighted_sparse_sum(0, &zero, &nonzero), 1.0);
    }
}
