//! Forward models: the scaled AWGN channel and Gaussian compressed sensing.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::signal::{NoiseModel, ProblemDims, SparseSignal};

/// Dense row-major Gaussian matrix. Row `i` is drawn from substream
/// `(seed, i)`, so any row can be regenerated on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    rows: usize,
    cols: usize,
    seed: Option<u64>,
    entries: Vec<f64>,
}

impl SensingMatrix {
    /// i.i.d. standard Gaussian entries; rows are generated in parallel.
    pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Self {
        let mut entries = vec![0.0; rows * cols];
        if cols > 0 {
            entries.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                fill_gaussian_row(row, seed, i);
            });
        }
        Self { rows, cols, seed: Some(seed), entries }
    }

    /// Matrix with explicit entries, e.g. for tests.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, actual: bad.len() });
        }
        let n_rows = rows.len();
        Ok(Self { rows: n_rows, cols, seed: None, entries: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Regenerates row `i` of the matrix drawn with `seed` without building it.
    pub fn regenerate_row(seed: u64, i: usize, cols: usize) -> Vec<f64> {
        let mut row = vec![0.0; cols];
        fill_gaussian_row(&mut row, seed, i);
        row
    }

    /// `scale · A x`.
    pub fn matvec(&self, x: &[f64], scale: f64) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, actual: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| scale * self.row(i).iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }

    /// `scale · Aᵀ r`.
    pub fn matvec_t(&self, r: &[f64], scale: f64) -> Result<Vec<f64>> {
        if r.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, actual: r.len() });
        }
        let mut out = vec![0.0; self.cols];
        for (i, &ri) in r.iter().enumerate() {
            let c = scale * ri;
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += c * a;
            }
        }
        Ok(out)
    }

    /// `scale · A x` for a sparse `x`, touching only its support columns.
    pub fn matvec_sparse(&self, x: &SparseSignal, scale: f64) -> Result<Vec<f64>> {
        if x.n() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, actual: x.n() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                scale * x.iter().map(|(j, v)| row[j] * v).sum::<f64>()
            })
            .collect())
    }
}

fn fill_gaussian_row(row: &mut [f64], seed: u64, i: usize) {
    let mut rng = substream(seed, &[i as u64]);
    for a in row.iter_mut() {
        *a = rng.sample(StandardNormal);
    }
}

/// Measurement count and the normalized budget `δ = M / (k ln(N/k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsDims {
    pub measurements: usize,
    pub delta: f64,
}

impl CsDims {
    /// `M = round(δ k ln(N/k))`, at least one measurement.
    pub fn from_delta(delta: f64, dims: &ProblemDims) -> Result<Self> {
        Ok(Self { measurements: measurements_for_delta(delta, dims)?, delta })
    }

    pub fn from_measurements(measurements: usize, dims: &ProblemDims) -> Result<Self> {
        Ok(Self { measurements, delta: delta_of(measurements, dims)? })
    }
}

/// `M / (k ln(N/k))`.
pub fn delta_of(measurements: usize, dims: &ProblemDims) -> Result<f64> {
    if dims.n <= dims.k {
        return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
    }
    if measurements == 0 {
        return Err(Error::Dimension("at least one measurement is required".into()));
    }
    Ok(measurements as f64 / (dims.k as f64 * dims.log_ratio()))
}

/// Inverse of [`delta_of`], rounded to the nearest integer (minimum 1).
pub fn measurements_for_delta(delta: f64, dims: &ProblemDims) -> Result<usize> {
    if dims.n <= dims.k {
        return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    Ok(((delta * dims.k as f64 * dims.log_ratio()).round() as usize).max(1))
}

fn gaussian_vector<R: Rng + ?Sized>(len: usize, variance: f64, rng: &mut R) -> Vec<f64> {
    let sd = variance.sqrt();
    (0..len).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// `y = x + ω` with `ω ~ N(0, σ²_eff I_N)`.
pub fn awgn_transmit<R: Rng + ?Sized>(x: &SparseSignal, noise: &NoiseModel, rng: &mut R) -> Vec<f64> {
    let mut y = gaussian_vector(x.n(), noise.sigma_eff_sq, rng);
    for (i, v) in x.iter() {
        y[i] += v;
    }
    y
}

/// `y = k^{-1/2} A x + w` with `w ~ N(0, σ² I_M)`.
pub fn cs_measure<R: Rng + ?Sized>(
    x: &SparseSignal,
    a: &SensingMatrix,
    sigma_sq: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if x.k() == 0 {
        return Err(Error::Dimension("signal must have at least one non-zero".into()));
    }
    let mut y = a.matvec_sparse(x, 1.0 / (x.k() as f64).sqrt())?;
    for (yi, w) in y.iter_mut().zip(gaussian_vector(a.rows(), sigma_sq, rng)) {
        *yi += w;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{sample_signal, Alphabet};
    use crate::stats::MeanEstimate;

    #[test]
    fn matrix_moments() {
        let a = SensingMatrix::gaussian(200, 500, 3);
        let n = a.entries().len() as f64;
        let mean = a.entries().iter().sum::<f64>() / n;
        let var = a.entries().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 3.0 / n.sqrt());
        // variance of the sample variance is about 2/n
        assert!((var - 1.0).abs() < 3.0 * (2.0 / n).sqrt());
    }

    #[test]
    fn matrix_rows_regenerate() {
        let a = SensingMatrix::gaussian(7, 33, 11);
        assert_eq!(SensingMatrix::regenerate_row(11, 5, 33), a.row(5));
        assert_eq!(a, SensingMatrix::gaussian(7, 33, 11));
    }

    #[test]
    fn noiseless_awgn_is_identity() {
        let dims = ProblemDims::new(20, 3).unwrap();
        let x = sample_signal(&dims, &Alphabet::unit(), &mut substream(1, &[]));
        let noise = NoiseModel::new(0.0, &dims).unwrap();
        assert_eq!(awgn_transmit(&x, &noise, &mut substream(2, &[])), x.to_dense());
    }

    #[test]
    fn awgn_noise_variance() {
        let dims = ProblemDims::new(100_000, 10).unwrap();
        let x = sample_signal(&dims, &Alphabet::unit(), &mut substream(1, &[]));
        let noise = NoiseModel::new(1.0, &dims).unwrap();
        let y = awgn_transmit(&x, &noise, &mut substream(4, &[]));
        let dense = x.to_dense();
        let sq: Vec<f64> = y.iter().zip(&dense).map(|(a, b)| (a - b).powi(2)).collect();
        let est = MeanEstimate::from_samples(&sq);
        assert!((est.mean - noise.sigma_eff_sq).abs() < 3.0 * est.std_err);
    }

    #[test]
    fn awgn_output_energy() {
        let dims = ProblemDims::new(64, 4).unwrap();
        let a = Alphabet::new(vec![1.0, -2.0]).unwrap();
        let noise = NoiseModel::new(0.5, &dims).unwrap();
        let energies: Vec<f64> = (0..5000)
            .map(|t| {
                let mut rng = substream(8, &[t]);
                let x = sample_signal(&dims, &a, &mut rng);
                awgn_transmit(&x, &noise, &mut rng).iter().map(|v| v * v).sum()
            })
            .collect();
        let est = MeanEstimate::from_samples(&energies);
        let expected = dims.k as f64 * a.mean_power() + dims.n as f64 * noise.sigma_eff_sq;
        assert!((est.mean - expected).abs() < 3.0 * est.std_err);
    }

    #[test]
    fn cs_all_ones_row() {
        let u = Alphabet::unit();
        let x = SparseSignal::new(8, vec![0, 2, 5, 7], vec![1.0; 4], &u).unwrap();
        let a = SensingMatrix::from_rows(vec![vec![1.0; 8]]).unwrap();
        let y = cs_measure(&x, &a, 0.0, &mut substream(0, &[])).unwrap();
        assert_eq!(y, vec![2.0]);
    }

    #[test]
    fn cs_single_column() {
        let u = Alphabet::new(vec![-1.5]).unwrap();
        let x = SparseSignal::new(6, vec![3], vec![-1.5], &u).unwrap();
        let a = SensingMatrix::gaussian(5, 6, 2);
        let y = cs_measure(&x, &a, 0.0, &mut substream(0, &[])).unwrap();
        for (i, yi) in y.iter().enumerate() {
            assert!((yi - (-1.5) * a.row(i)[3]).abs() < 1e-15);
        }
        let wrong = SensingMatrix::gaussian(5, 7, 2);
        assert!(cs_measure(&x, &wrong, 0.0, &mut substream(0, &[])).is_err());
    }

    #[test]
    fn cs_output_energy() {
        let dims = ProblemDims::new(200, 4).unwrap();
        let alphabet = Alphabet::unit();
        let m = 30;
        let sigma_sq = 0.2;
        let energies: Vec<f64> = (0..4000)
            .map(|t| {
                let mut rng = substream(12, &[t]);
                let x = sample_signal(&dims, &alphabet, &mut rng);
                let a = SensingMatrix::gaussian(m, dims.n, 1000 + t);
                cs_measure(&x, &a, sigma_sq, &mut rng).unwrap().iter().map(|v| v * v).sum()
            })
            .collect();
        let est = MeanEstimate::from_samples(&energies);
        let expected = m as f64 / dims.k as f64 * dims.k as f64 + m as f64 * sigma_sq;
        assert!((est.mean - expected).abs() < 3.0 * est.std_err);
    }

    #[test]
    fn delta_conversions() {
        let dims = ProblemDims::new(1 << 16, 16).unwrap();
        assert_eq!(measurements_for_delta(2.0, &dims).unwrap(), 266);
        assert!((delta_of(133, &dims).unwrap() - 0.9994).abs() < 1e-4);
        let exact = 16.0 * dims.log_ratio();
        assert!((133.0 / exact - delta_of(133, &dims).unwrap()).abs() < 1e-15);
        assert!(delta_of(0, &dims).is_err());
        assert!(measurements_for_delta(-1.0, &dims).is_err());
    }

    #[test]
    fn transpose_product_matches_dense() {
        let a = SensingMatrix::from_rows(vec![vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 0.0]]).unwrap();
        assert_eq!(a.matvec(&[1.0, 1.0, 1.0], 2.0).unwrap(), vec![12.0, -1.0]);
        assert_eq!(a.matvec_t(&[1.0, 2.0], 1.0).unwrap(), vec![-1.0, 3.0, 3.0]);
    }
}
