//! Exhaustive search over a common damping factor.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stats::MeanEstimate;

/// `0.1, 0.2, …, 1.0`.
pub fn default_damping_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampingSearch {
    pub best_theta: f64,
    /// Mean final error per grid point, in grid order.
    pub per_theta: Vec<(f64, MeanEstimate)>,
}

/// Evaluates `run(θ, trial)` for every grid point on the same trial indices
/// `0..trials` and returns the grid point with the smallest mean (first on
/// ties). `run` should derive all randomness from the trial index so that
/// every θ sees identical problem instances.
pub fn damping_search<F>(grid: &[f64], trials: usize, run: F) -> Result<DampingSearch>
where
    F: Fn(f64, u64) -> Result<f64> + Sync,
{
    if grid.is_empty() {
        return Err(Error::Parameter("damping grid is empty".into()));
    }
    if trials == 0 {
        return Err(Error::Parameter("damping search needs at least one trial".into()));
    }
    let jobs: Vec<(usize, u64)> = (0..grid.len()).flat_map(|g| (0..trials as u64).map(move |t| (g, t))).collect();
    let results: Vec<f64> = jobs.par_iter().map(|&(g, t)| run(grid[g], t)).collect::<Result<_>>()?;
    let per_theta: Vec<(f64, MeanEstimate)> = grid
        .iter()
        .enumerate()
        .map(|(g, &theta)| (theta, MeanEstimate::from_samples(&results[g * trials..(g + 1) * trials])))
        .collect();
    let mut best = 0;
    for (g, (_, est)) in per_theta.iter().enumerate() {
        // NaN means never beat a finite mean
        if est.mean < per_theta[best].1.mean || per_theta[best].1.mean.is_nan() {
            best = g;
        }
    }
    Ok(DampingSearch { best_theta: per_theta[best].0, per_theta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_grid() {
        let s = damping_search(&[0.7], 3, |_, _| Ok(1.0)).unwrap();
        assert_eq!(s.best_theta, 0.7);
    }

    #[test]
    fn argmin_contract() {
        let grid = default_damping_grid();
        let s = damping_search(&grid, 5, |th, t| Ok((th - 0.4).powi(2) + t as f64 * 1e-3)).unwrap();
        assert!((s.best_theta - 0.4).abs() < 1e-12);
        let best = s.per_theta.iter().find(|p| p.0 == s.best_theta).unwrap().1.mean;
        assert!(s.per_theta.iter().all(|p| best <= p.1.mean));
    }

    #[test]
    fn errors() {
        assert!(damping_search(&[], 3, |_, _| Ok(0.0)).is_err());
        assert!(damping_search(&[0.5], 0, |_, _| Ok(0.0)).is_err());
    }
}
