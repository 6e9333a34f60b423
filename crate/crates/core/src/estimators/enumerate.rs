//! Exhaustive enumeration of `X_k^N(U)`.

use crate::error::{Error, Result};
use crate::logmath::sparse_set_size;

/// Largest candidate set the enumeration oracles accept.
pub const ENUMERATION_LIMIT: f64 = 1e7;

/// Fails unless `C(N, k) M^k ≤ limit`.
pub fn check_enumeration(n: usize, k: usize, m: usize, limit: f64) -> Result<()> {
    let count = sparse_set_size(n, k, m);
    // ln-gamma rounding can push exact integers a hair above the limit
    if count > limit * (1.0 + 1e-9) {
        return Err(Error::Infeasible { count, limit });
    }
    Ok(())
}

/// Calls `visit(support, value_indices)` for every `k`-sparse candidate, in
/// lexicographic order of support and then of value indices.
pub fn for_each_sparse<F: FnMut(&[usize], &[usize])>(n: usize, k: usize, m: usize, mut visit: F) {
    if k > n || m == 0 {
        return;
    }
    let mut support: Vec<usize> = (0..k).collect();
    let mut values = vec![0usize; k];
    loop {
        values.iter_mut().for_each(|v| *v = 0);
        loop {
            visit(&support, &values);
            if !advance_values(&mut values, m) {
                break;
            }
        }
        if !advance_combination(&mut support, n) {
            return;
        }
    }
}

fn advance_values(values: &mut [usize], m: usize) -> bool {
    for i in (0..values.len()).rev() {
        if values[i] + 1 < m {
            values[i] += 1;
            values[i + 1..].iter_mut().for_each(|v| *v = 0);
            return true;
        }
    }
    false
}

fn advance_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
