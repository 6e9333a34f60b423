//! Reliability function of the ML error exponent and its numerical oracle.

use crate::error::{Error, Result};
use crate::signal::Alphabet;

fn check_counts(w: usize, w_prime: usize, alphabet: &Alphabet) -> Result<()> {
    if w == 0 {
        return Err(Error::Parameter("the reliability function needs w >= 1".into()));
    }
    if alphabet.len() == 1 && w_prime > 0 {
        return Err(Error::Parameter("value errors are impossible for a single-point alphabet".into()));
    }
    Ok(())
}

/// `(u_min² w, u_min² w + d_min² w′)`: the lower corner of the `(b, a)` box.
fn lower_corner(w: usize, w_prime: usize, alphabet: &Alphabet) -> (f64, f64) {
    let u2 = alphabet.u_min().powi(2);
    let d2 = alphabet.d_min().map_or(0.0, |d| d * d);
    let b0 = u2 * w as f64;
    (b0, b0 + d2 * w_prime as f64)
}

/// Closed-form exponent `E_{w,w′}(σ²)` for `w ≥ 1` support errors and `w′`
/// value errors.
pub fn reliability_function(w: usize, w_prime: usize, sigma_sq: f64, alphabet: &Alphabet) -> Result<f64> {
    check_counts(w, w_prime, alphabet)?;
    if !(sigma_sq > 0.0) {
        return Err(Error::Parameter(format!("sigma^2 must be positive, got {sigma_sq}")));
    }
    let s = sigma_sq;
    let u2 = alphabet.u_min().powi(2);
    let wf = w as f64;
    let dw = alphabet.d_min().map_or(0.0, |d| d * d) * w_prime as f64;
    let a0 = u2 * wf + dw;
    let value = if s < u2 / 8.0 {
        (u2 / (4.0 * s) - 1.0) * wf + dw / (8.0 * s)
    } else if s < u2 / 2.0 {
        (2.0 * (u2 - (2.0 * s * u2).sqrt()) * wf + dw).powi(2) / (8.0 * s * a0)
    } else if s < a0 / (2.0 * wf) {
        ((u2 - 2.0 * s) * wf + dw).powi(2) / (8.0 * s * a0)
    } else {
        0.0
    };
    Ok(value)
}

/// The `σ²` values where the closed form switches branches.
pub fn reliability_breakpoints(w: usize, w_prime: usize, alphabet: &Alphabet) -> [f64; 3] {
    let u2 = alphabet.u_min().powi(2);
    let (_, a0) = lower_corner(w, w_prime, alphabet);
    [u2 / 8.0, u2 / 2.0, a0 / (2.0 * w as f64)]
}

/// Resolution of [`reliability_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    /// Grid points per axis of the `(a, b)` box.
    pub points: usize,
    /// Upper edge of the box as a multiple of its lower corner.
    pub extent: f64,
    /// Golden-section iterations for the inner maximization.
    pub rho_iterations: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self { points: 400, extent: 10.0, rho_iterations: 60 }
    }
}

fn gallager_exponent(rho: f64, a: f64, b: f64, s: f64, w: f64) -> f64 {
    (a + b).powi(2) * rho / (8.0 * s * (a * rho + b)) - rho * w
}

/// `max_{ρ∈[0,1]}` by golden-section search (the objective is concave in ρ),
/// keeping the endpoints as candidates.
fn max_over_rho(a: f64, b: f64, s: f64, w: f64, iterations: usize) -> f64 {
    let f = |r: f64| gallager_exponent(r, a, b, s, w);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f(0.0).max(f(1.0)).max(f1).max(f2)
}

/// Numerical min-max evaluation of the exponent: minimize over
/// `a ≥ u_min² w + d_min² w′`, `b ≥ u_min² w` the maximum over `ρ ∈ [0, 1]`
/// of `(a + b)² ρ / (8σ²(aρ + b)) − ρ w`, on a bounded grid followed by a
/// shrinking pattern search. Shares no code with [`reliability_function`].
pub fn reliability_oracle(
    w: usize,
    w_prime: usize,
    sigma_sq: f64,
    alphabet: &Alphabet,
    grid: &OracleGrid,
) -> Result<f64> {
    check_counts(w, w_prime, alphabet)?;
    if !(sigma_sq > 0.0) {
        return Err(Error::Parameter(format!("sigma^2 must be positive, got {sigma_sq}")));
    }
    if grid.points < 2 || !(grid.extent > 1.0) {
        return Err(Error::Parameter("oracle grid needs >= 2 points and extent > 1".into()));
    }
    let (b0, a0) = lower_corner(w, w_prime, alphabet);
    let wf = w as f64;
    let (a_hi, b_hi) = (grid.extent * a0, grid.extent * a0.max(b0));
    let obj = |a: f64, b: f64| max_over_rho(a, b, sigma_sq, wf, grid.rho_iterations);

    let steps = grid.points - 1;
    let mut best = (f64::INFINITY, a0, b0);
    for i in 0..=steps {
        let a = a0 + (a_hi - a0) * i as f64 / steps as f64;
        for j in 0..=steps {
            let b = b0 + (b_hi - b0) * j as f64 / steps as f64;
            let v = obj(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }

    let (mut v, mut a, mut b) = best;
    let mut da = (a_hi - a0) / steps as f64;
    let mut db = (b_hi - b0) / steps as f64;
    for _ in 0..200 {
        let mut moved = false;
        for (sa, sb) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let na = (a + sa * da).clamp(a0, a_hi);
            let nb = (b + sb * db).clamp(b0, b_hi);
            let nv = obj(na, nb);
            if nv < v {
                (v, a, b) = (nv, na, nb);
                moved = true;
            }
        }
        if !moved {
            da *= 0.5;
            db *= 0.5;
            if da < 1e-12 * a0.max(1.0) && db < 1e-12 * b0.max(1.0) {
                break;
            }
        }
    }
    Ok(v.max(0.0))
}
