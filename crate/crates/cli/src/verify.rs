//! Oracle verification suites.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sublinear_core::amp::{finite_difference_divergence, Denoiser, NonseparableDenoiser, SeparableDenoiser};
use sublinear_core::bounds::{gaussian_bilinear_mgf, matching_coefficients, weighted_sparse_sum};
use sublinear_core::channel::awgn_transmit;
use sublinear_core::estimators::{
    brute_force_ml, hard_decision, ml_estimate, nonseparable_bayes, nonseparable_bayes_naive, residual_sq,
    xi_profile,
};
use sublinear_core::rng::{substream, TrialRng};
use sublinear_core::stats::MeanEstimate;
use sublinear_core::{sample_signal, Alphabet, NoiseModel, ProblemDims, SparseSignal};

use crate::error::CliResult;
use crate::output::fmt_f64;
use crate::spec::SweepSpec;

pub const ML_INSTANCES: usize = 1200;
pub const NONSEPARABLE_INSTANCES: usize = 300;
pub const DIVERGENCE_INSTANCES: usize = 40;
pub const MATCHING_ASSIGNMENTS: usize = 100;
pub const MATCHING_MAX_K: usize = 6;
pub const MGF_INPUTS: usize = 20;
pub const MGF_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub minimum: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub const HEADER: &'static str = "suite,instances,minimum,failures,max_deviation,tolerance,status";

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances >= self.minimum
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.suite,
            self.instances,
            self.minimum,
            self.failures,
            fmt_f64(self.max_deviation),
            fmt_f64(self.tolerance),
            if self.passed() { "pass" } else { "fail" }
        )
    }

    fn from_deviations(suite: &'static str, minimum: usize, tolerance: f64, deviations: &[f64]) -> Self {
        Self {
            suite,
            instances: deviations.len(),
            minimum,
            failures: deviations.iter().filter(|d| !(**d <= tolerance)).count(),
            max_deviation: deviations.iter().cloned().fold(0.0, f64::max),
            tolerance,
        }
    }
}

const TEST_ALPHABETS: &[&[f64]] = &[&[1.0], &[1.0, -1.0], &[1.0, 2.0], &[-0.5, 1.5]];

fn random_alphabet(rng: &mut TrialRng, max_len: usize) -> Alphabet {
    let candidates: Vec<&&[f64]> = TEST_ALPHABETS.iter().filter(|a| a.len() <= max_len).collect();
    Alphabet::new(candidates[rng.random_range(0..candidates.len())].to_vec()).expect("fixed alphabets are valid")
}

/// `leave_one_out` keeps `N − 1 ≥ 2k`, which the non-separable estimator needs.
fn random_instance(
    rng: &mut TrialRng,
    max_n: usize,
    max_k: usize,
    max_m: usize,
    leave_one_out: bool,
) -> (ProblemDims, Alphabet) {
    let k = rng.random_range(1..=max_k);
    let min_n = 2 * k + leave_one_out as usize;
    let n = rng.random_range(min_n..=max_n.max(min_n));
    (ProblemDims::new(n, k).expect("n >= 2k"), random_alphabet(rng, max_m))
}

/// ML with the objective's arg-max in place of its arg-min; a negative
/// control for the ML suite.
fn faulty_ml(y: &[f64], dims: &ProblemDims, alphabet: &Alphabet) -> sublinear_core::Result<SparseSignal> {
    let p = xi_profile(y, dims.k, alphabet)?;
    let mut worst = 0;
    for (k0, &v) in p.xi_values.iter().enumerate() {
        if v > p.xi_values[worst] {
            worst = k0;
        }
    }
    let pairs = p.top_indices[..worst]
        .iter()
        .chain(&p.bottom_indices[..dims.k - worst])
        .map(|&i| (i, hard_decision(y[i], alphabet)))
        .collect();
    SparseSignal::from_pairs(dims.n, pairs, alphabet)
}

/// Residual of the fast ML estimate minus that of exhaustive search, which
/// must be exactly zero.
pub fn ml_suite(seed: u64, instances: usize, inject_fault: bool) -> CliResult<SuiteReport> {
    const NOISE: [f64; 3] = [0.05, 0.5, 2.0];
    let deviations: Vec<f64> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, &[1, i]);
            let (dims, alphabet) = random_instance(&mut rng, 12, 3, 2, false);
            let noise = NoiseModel::new(NOISE[i as usize % 3], &dims)?;
            let x = sample_signal(&dims, &alphabet, &mut rng);
            let y = awgn_transmit(&x, &noise, &mut rng);
            let fast = if inject_fault { faulty_ml(&y, &dims, &alphabet)? } else { ml_estimate(&y, &dims, &alphabet)? };
            let exact = brute_force_ml(&y, &dims, &alphabet)?;
            Ok((residual_sq(&y, &fast.to_dense()) - residual_sq(&y, &exact.to_dense())).abs())
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(SuiteReport::from_deviations("ml-vs-brute-force", 1000, 0.0, &deviations))
}

/// Max abs difference between the windowed and the naive non-separable
/// estimator.
pub fn nonseparable_suite(seed: u64, instances: usize) -> CliResult<SuiteReport> {
    let deviations: Vec<f64> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, &[2, i]);
            let (dims, alphabet) = random_instance(&mut rng, 40, 5, 2, true);
            let noise = NoiseModel::new(rng.random_range(0.05..2.0), &dims)?;
            let x = sample_signal(&dims, &alphabet, &mut rng);
            let y = awgn_transmit(&x, &noise, &mut rng);
            let fast = nonseparable_bayes(&y, &dims, &alphabet, noise.sigma_eff_sq)?;
            let naive = nonseparable_bayes_naive(&y, &dims, &alphabet, noise.sigma_eff_sq)?;
            Ok(fast.iter().zip(&naive).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(SuiteReport::from_deviations("nonseparable-vs-naive", 200, 1e-10, &deviations))
}

/// Analytic divergence of both denoisers against central differences.
pub fn divergence_suite(seed: u64, instances: usize) -> CliResult<SuiteReport> {
    let deviations: Vec<f64> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, &[3, i]);
            let (dims, alphabet) = random_instance(&mut rng, 32, 3, 2, true);
            let v: f64 = rng.random_range(0.05..1.0);
            let x = sample_signal(&dims, &alphabet, &mut rng);
            let u: Vec<f64> =
                x.to_dense().iter().map(|xi| xi + v.sqrt() * rng.sample::<f64, _>(StandardNormal)).collect();
            let denoiser: Box<dyn Denoiser> = if i % 2 == 0 {
                Box::new(SeparableDenoiser { dims, alphabet })
            } else {
                Box::new(NonseparableDenoiser { dims, alphabet })
            };
            let analytic = denoiser.divergence(&u, v)?;
            let numeric = finite_difference_divergence(denoiser.as_ref(), &u, v, 1e-6)?;
            Ok((analytic - numeric).abs())
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(SuiteReport::from_deviations("divergence-vs-finite-difference", 40, 1e-5, &deviations))
}

/// Sum over weight-`w` sparse vectors is at most `⌈L⌉` times the sum over
/// weight-`w′` vectors, for non-negative factors with `f_i(0) ≤ Σ_m f_i(u_m)`.
/// Deviation is the relative excess of the left side, clipped at zero.
pub fn matching_suite(seed: u64, assignments: usize) -> CliResult<SuiteReport> {
    let mut cases = Vec::new();
    for k in 1..=MATCHING_MAX_K {
        for w in 0..k {
            for wp in w + 1..=k {
                cases.push((k, w, wp));
            }
        }
    }
    let deviations: Vec<f64> = cases
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, &(k, w, wp))| {
            (0..assignments as u64).map(move |a| {
                let mut rng = substream(seed, &[4, c as u64, a]);
                let m = rng.random_range(1..=2);
                let nonzero: Vec<Vec<f64>> =
                    (0..k).map(|_| (0..m).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
                let zero: Vec<f64> =
                    nonzero.iter().map(|row| rng.random_range(0.0..=1.0) * row.iter().sum::<f64>()).collect();
                let (_, ceil) = matching_coefficients(w, wp, k)?;
                let lhs = weighted_sparse_sum(w, &zero, &nonzero);
                let rhs = ceil as f64 * weighted_sparse_sum(wp, &zero, &nonzero);
                Ok(((lhs - rhs) / rhs.max(f64::MIN_POSITIVE)).max(0.0))
            })
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(SuiteReport::from_deviations("matching-inequality", assignments * cases.len(), 1e-12, &deviations))
}

/// Random `(v, u₁, u₂)` whose bilinear exponential has finite variance, so
/// the Monte Carlo mean has a meaningful standard error.
fn mgf_input(rng: &mut TrialRng) -> (f64, Vec<f64>, Vec<f64>) {
    loop {
        let d = rng.random_range(1..=4);
        let v: f64 = rng.random_range(0.0..0.2);
        let u1: Vec<f64> = (0..d).map(|_| rng.random_range(-0.3..0.3)).collect();
        let u2: Vec<f64> = (0..d).map(|_| rng.random_range(-0.3..0.3)).collect();
        // E[e^{2Z₁(vZ₁+Z₂)}] is the same form with (v/2, 2u₁, u₂)
        let doubled: Vec<f64> = u1.iter().map(|a| 2.0 * a).collect();
        if gaussian_bilinear_mgf(v / 2.0, &doubled, &u2).is_ok() {
            return (v, u1, u2);
        }
    }
}

/// Closed-form bilinear MGF against a Monte Carlo mean; deviation is in
/// standard errors.
pub fn mgf_suite(seed: u64, inputs: usize, samples: usize) -> CliResult<SuiteReport> {
    let deviations: Vec<f64> = (0..inputs as u64)
        .map(|i| {
            let mut rng = substream(seed, &[5, i]);
            let (v, u1, u2) = mgf_input(&mut rng);
            let exact = gaussian_bilinear_mgf(v, &u1, &u2)?;
            const CHUNK: u64 = 10_000;
            let chunks = (samples as u64).div_ceil(CHUNK);
            let values: Vec<f64> = (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let mut rng = substream(seed, &[6, i, c]);
                    let count = CHUNK.min(samples as u64 - c * CHUNK);
                    let (u1, u2) = (&u1, &u2);
                    (0..count)
                        .map(move |_| {
                            let (mut z1, mut z2) = (0.0, 0.0);
                            for (p, q) in u1.iter().zip(u2) {
                                let a: f64 = rng.sample(StandardNormal);
                                z1 += a * p;
                                z2 += a * q;
                            }
                            (z1 * (v * z1 + z2)).exp()
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            let est = MeanEstimate::from_samples(&values);
            Ok((est.mean - exact).abs() / est.std_err)
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(SuiteReport::from_deviations("bilinear-mgf-monte-carlo", MGF_INPUTS, 3.0, &deviations))
}

pub fn verify(spec: &SweepSpec) -> CliResult<Vec<SuiteReport>> {
    Ok(vec![
        ml_suite(spec.seed, ML_INSTANCES, spec.inject_fault)?,
        nonseparable_suite(spec.seed, NONSEPARABLE_INSTANCES)?,
        divergence_suite(spec.seed, DIVERGENCE_INSTANCES)?,
        matching_suite(spec.seed, MATCHING_ASSIGNMENTS)?,
        mgf_suite(spec.seed, MGF_INPUTS, MGF_SAMPLES)?,
    ])
}
