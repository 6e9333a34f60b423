//! Problem dimensions, signal alphabets and sparse vectors.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};

/// The finite set `U` of non-zero values a sparse signal may take.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    points: Vec<f64>,
    u_min: f64,
    u_max: f64,
    d_min: Option<f64>,
    d_max: Option<f64>,
}

impl Alphabet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Alphabet("alphabet is empty".into()));
        }
        for (i, &p) in points.iter().enumerate() {
            if !p.is_finite() || p == 0.0 {
                return Err(Error::Alphabet(format!("point {p} must be finite and non-zero")));
            }
            if points[..i].contains(&p) {
                return Err(Error::Alphabet(format!("point {p} listed twice")));
            }
        }
        let u_min = points.iter().map(|p| p.abs()).fold(f64::INFINITY, f64::min);
        let u_max = points.iter().map(|p| p.abs()).fold(0.0, f64::max);
        let mut d_min: Option<f64> = None;
        let mut d_max: Option<f64> = None;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let d = (a - b).abs();
                d_min = Some(d_min.map_or(d, |m| m.min(d)));
                d_max = Some(d_max.map_or(d, |m| m.max(d)));
            }
        }
        Ok(Self { points, u_min, u_max, d_min, d_max })
    }

    /// `U = {1}`.
    pub fn unit() -> Self {
        Self::new(vec![1.0]).expect("valid alphabet")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Smallest distance between distinct points; `None` when `M = 1`.
    pub fn d_min(&self) -> Option<f64> {
        self.d_min
    }

    /// Largest distance between distinct points; `None` when `M = 1`.
    pub fn d_max(&self) -> Option<f64> {
        self.d_max
    }

    /// Mean of `u²` under uniform value sampling.
    pub fn mean_power(&self) -> f64 {
        self.points.iter().map(|u| u * u).sum::<f64>() / self.points.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().sum::<f64>() / self.points.len() as f64
    }

    pub fn contains(&self, value: f64) -> bool {
        self.points.contains(&value)
    }

    /// True when `-u ∈ U` for every `u ∈ U`.
    pub fn is_sign_symmetric(&self) -> bool {
        self.points.iter().all(|&u| self.points.contains(&-u))
    }
}

/// Signal dimension `N`, sparsity `k` and an optional target `γ = ln k / ln N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemDims {
    pub n: usize,
    pub k: usize,
    pub gamma: Option<f64>,
}

impl ProblemDims {
    /// Requires `k ≥ 1` and `N ≥ 2k`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Dimension("sparsity k must be at least 1".into()));
        }
        if n < 2 * k {
            return Err(Error::Dimension(format!("need N >= 2k, got N={n}, k={k}")));
        }
        Ok(Self { n, k, gamma: None })
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::Parameter(format!("gamma must lie in [0, 1), got {gamma}")));
        }
        self.gamma = Some(gamma);
        Ok(self)
    }

    /// `N / k` as a real number.
    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.k as f64
    }

    /// `ln(N/k)`.
    pub fn log_ratio(&self) -> f64 {
        self.ratio().ln()
    }
}

/// Base noise coefficient `σ²` and the per-sample variance `σ²/ln(N/k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma_sq: f64,
    pub sigma_eff_sq: f64,
}

impl NoiseModel {
    /// `sigma_sq = 0` is accepted as a noiseless test mode.
    pub fn new(sigma_sq: f64, dims: &ProblemDims) -> Result<Self> {
        if !(sigma_sq >= 0.0 && sigma_sq.is_finite()) {
            return Err(Error::Parameter(format!("sigma^2 must be finite and >= 0, got {sigma_sq}")));
        }
        Ok(Self { sigma_sq, sigma_eff_sq: effective_noise_variance(sigma_sq, dims)? })
    }

    /// Noise model for an SNR `1/σ²` given in dB.
    pub fn from_snr_db(snr_db: f64, dims: &ProblemDims) -> Result<Self> {
        Self::new(10f64.powf(-snr_db / 10.0), dims)
    }
}

/// `σ² / ln(N/k)`.
pub fn effective_noise_variance(sigma_sq: f64, dims: &ProblemDims) -> Result<f64> {
    if dims.n <= dims.k {
        return Err(Error::Dimension(format!("need N > k, got N={}, k={}", dims.n, dims.k)));
    }
    Ok(sigma_sq / dims.log_ratio())
}

/// A `k`-sparse vector stored as sorted support plus values.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    n: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSignal {
    /// `support` must be strictly increasing and inside `[0, n)`; every value
    /// must belong to `alphabet`.
    pub fn new(n: usize, support: Vec<usize>, values: Vec<f64>, alphabet: &Alphabet) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch { expected: support.len(), actual: values.len() });
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("support must be strictly increasing".into()));
        }
        if support.last().is_some_and(|&i| i >= n) {
            return Err(Error::Parameter(format!("support index out of range for N={n}")));
        }
        if let Some(v) = values.iter().find(|v| !alphabet.contains(**v)) {
            return Err(Error::Alphabet(format!("value {v} is not in the alphabet")));
        }
        Ok(Self { n, support, values })
    }

    /// Builds from unsorted `(index, value)` pairs.
    pub fn from_pairs(n: usize, mut pairs: Vec<(usize, f64)>, alphabet: &Alphabet) -> Result<Self> {
        pairs.sort_by_key(|p| p.0);
        let (support, values) = pairs.into_iter().unzip();
        Self::new(n, support, values, alphabet)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (i, v) in self.iter() {
            x[i] = v;
        }
        x
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Value at `index`, zero off the support.
    pub fn get(&self, index: usize) -> f64 {
        self.support.binary_search(&index).map_or(0.0, |p| self.values[p])
    }

    /// `‖y − x‖²` against a dense vector of the same length.
    pub fn residual_sq(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: y.len() });
        }
        let dense = self.to_dense();
        Ok(y.iter().zip(&dense).map(|(a, b)| (a - b) * (a - b)).sum())
    }
}

/// Uniform random support of size `k` with i.i.d. uniform values from `U`.
pub fn sample_signal<R: Rng + ?Sized>(dims: &ProblemDims, alphabet: &Alphabet, rng: &mut R) -> SparseSignal {
    let mut support = index::sample(rng, dims.n, dims.k).into_vec();
    support.sort_unstable();
    let points = alphabet.points();
    let values = (0..dims.k).map(|_| points[rng.random_range(0..points.len())]).collect();
    SparseSignal { n: dims.n, support, values }
}

/// `‖x − x̂‖² / k`.
pub fn square_error(x: &SparseSignal, xhat: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Dimension("k must be positive".into()));
    }
    Ok(x.residual_sq(xhat)? / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn pm1() -> Alphabet {
        Alphabet::new(vec![1.0, -1.0]).unwrap()
    }

    #[test]
    fn alphabet_constants() {
        let u = Alphabet::unit();
        assert_eq!((u.u_min(), u.u_max()), (1.0, 1.0));
        assert_eq!(u.d_min(), None);
        let a = pm1();
        assert_eq!((a.d_min(), a.d_max()), (Some(2.0), Some(2.0)));
        let b = Alphabet::new(vec![1.0, 2.0, -0.5]).unwrap();
        assert_eq!((b.u_min(), b.u_max()), (0.5, 2.0));
        assert_eq!((b.d_min(), b.d_max()), (Some(1.0), Some(2.5)));
        assert!(b.d_max().unwrap() <= 2.0 * b.u_max());
    }

    #[test]
    fn alphabet_rejects_bad_points() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![0.0]).is_err());
        assert!(Alphabet::new(vec![1.0, 1.0]).is_err());
        assert!(Alphabet::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn dims_validation() {
        assert!(ProblemDims::new(4, 2).is_ok());
        assert!(ProblemDims::new(3, 2).is_err());
        assert!(ProblemDims::new(10, 0).is_err());
        assert!(ProblemDims::new(10, 2).unwrap().with_gamma(1.0).is_err());
    }

    #[test]
    fn effective_variance_values() {
        assert!(effective_noise_variance(1.0, &ProblemDims { n: 1, k: 1, gamma: None }).is_err());
        let dims = ProblemDims::new(1 << 16, 16).unwrap();
        let v = effective_noise_variance(1.0, &dims).unwrap();
        assert!((v - 0.120_224).abs() < 1e-6);
        let h = effective_noise_variance(0.5, &dims).unwrap();
        assert!((h - 0.060_112).abs() < 1e-6);
        assert_eq!(h, v / 2.0);
    }

    #[test]
    fn sampled_signal_shape() {
        let dims = ProblemDims::new(50, 5).unwrap();
        let a = pm1();
        for t in 0..20 {
            let x = sample_signal(&dims, &a, &mut substream(1, &[t]));
            assert_eq!(x.k(), 5);
            assert!(x.support().windows(2).all(|w| w[0] < w[1]));
            assert!(x.values().iter().all(|v| a.contains(*v)));
            assert_eq!(x.to_dense().iter().filter(|v| **v != 0.0).count(), 5);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let dims = ProblemDims::new(100, 7).unwrap();
        let a = pm1();
        let x1 = sample_signal(&dims, &a, &mut substream(9, &[3]));
        let x2 = sample_signal(&dims, &a, &mut substream(9, &[3]));
        assert_eq!(x1, x2);
    }

    #[test]
    fn inclusion_frequency_is_k_over_n() {
        let dims = ProblemDims::new(8, 2).unwrap();
        let a = Alphabet::unit();
        let trials = 100_000;
        let mut counts = [0usize; 8];
        let mut rng = substream(42, &[]);
        for _ in 0..trials {
            for &i in sample_signal(&dims, &a, &mut rng).support() {
                counts[i] += 1;
            }
        }
        let p = 0.25;
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        for c in counts {
            assert!((c as f64 / trials as f64 - p).abs() < 3.0 * sd, "count {c}");
        }
    }

    #[test]
    fn square_error_cases() {
        let u = Alphabet::unit();
        let x = SparseSignal::new(5, vec![1, 3], vec![1.0, 1.0], &u).unwrap();
        assert_eq!(square_error(&x, &x.to_dense(), 2).unwrap(), 0.0);
        assert_eq!(square_error(&x, &[0.0; 5], 2).unwrap(), 1.0);
        let e1 = SparseSignal::new(3, vec![0], vec![1.0], &u).unwrap();
        assert_eq!(square_error(&e1, &[0.0, 1.0, 0.0], 1).unwrap(), 2.0);
        assert!(square_error(&x, &[0.0; 4], 2).is_err());
    }

    #[test]
    fn zero_estimate_error_matches_mean_power() {
        let dims = ProblemDims::new(40, 4).unwrap();
        let a = Alphabet::new(vec![1.0, -2.0, 0.5]).unwrap();
        let zeros = vec![0.0; dims.n];
        let samples: Vec<f64> = (0..20_000)
            .map(|t| square_error(&sample_signal(&dims, &a, &mut substream(5, &[t])), &zeros, dims.k).unwrap())
            .collect();
        let est = crate::stats::MeanEstimate::from_samples(&samples);
        assert!((est.mean - a.mean_power()).abs() < 4.0 * est.std_err);
    }

    #[test]
    fn signal_validation() {
        let u = Alphabet::unit();
        assert!(SparseSignal::new(5, vec![3, 1], vec![1.0, 1.0], &u).is_err());
        assert!(SparseSignal::new(5, vec![1, 5], vec![1.0, 1.0], &u).is_err());
        assert!(SparseSignal::new(5, vec![1, 2], vec![1.0, 2.0], &u).is_err());
        let s = SparseSignal::from_pairs(5, vec![(4, 1.0), (0, 1.0)], &u).unwrap();
        assert_eq!(s.support(), &[0, 4]);
        assert_eq!(s.get(4), 1.0);
        assert_eq!(s.get(2), 0.0);
    }
}
