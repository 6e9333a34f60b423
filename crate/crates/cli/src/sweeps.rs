//! Monte Carlo sweeps: AWGN estimators over SNR, AMP over δ, and denoiser
//! transfer curves.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sublinear_core::amp::{
    amp_run, damping_search, default_damping_grid, AmpConfig, CsInstance, Denoiser, DenoiserPolicy,
    NonseparableDenoiser, SeparableDenoiser,
};
use sublinear_core::channel::measurements_for_delta;
use sublinear_core::estimators::{
    check_enumeration, exact_posterior_mean, ml_estimate, nonseparable_bayes, separable_bayes, ENUMERATION_LIMIT,
};
use sublinear_core::rng::substream;
use sublinear_core::stats::MeanEstimate;
use sublinear_core::{effective_noise_variance, sample_signal, Alphabet, ProblemDims};

use crate::error::CliResult;
use crate::output::{SweepRow, TransferRow};
use crate::spec::{Damping, SweepSpec};

// Top-level substream labels, kept apart from the per-trial paths of the
// SNR sweep.
const EVAL_PATH: u64 = 1 << 40;
const SEARCH_PATH: u64 = (1 << 40) + 1;
const CURVE_PATH: u64 = (1 << 40) + 2;
const TRAJECTORY_PATH: u64 = (1 << 40) + 3;

fn derive_seed(master: u64, path: &[u64]) -> u64 {
    substream(master, path).random()
}

/// Applies the named AWGN estimator to `y`.
pub fn estimate(
    name: &str,
    y: &[f64],
    dims: &ProblemDims,
    alphabet: &Alphabet,
    sigma_eff_sq: f64,
) -> sublinear_core::Result<Vec<f64>> {
    match name {
        "ml" => Ok(ml_estimate(y, dims, alphabet)?.to_dense()),
        "separable" => separable_bayes(y, dims, alphabet, sigma_eff_sq),
        "nonseparable" => nonseparable_bayes(y, dims, alphabet, sigma_eff_sq),
        "exact" => exact_posterior_mean(y, dims, alphabet, sigma_eff_sq),
        other => Err(sublinear_core::Error::Parameter(format!("unknown estimator `{other}`"))),
    }
}

fn summarize(samples: &[f64]) -> (f64, f64) {
    let e = MeanEstimate::from_samples(samples);
    (e.mean, e.std_err)
}

/// Square error of each estimator at each SNR point. Trial `t` draws the
/// signal and a unit-variance noise vector from substream `(seed, t)`; the
/// noise is rescaled per SNR point, so all points share it.
pub fn sweep_snr(spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    let dims = spec.dims;
    let alphabet = &spec.alphabet;
    if spec.estimators.iter().any(|e| e == "exact") {
        check_enumeration(dims.n, dims.k, alphabet.len(), ENUMERATION_LIMIT)?;
    }
    let sigmas: Vec<f64> = spec
        .snr_db
        .iter()
        .map(|&db| effective_noise_variance(SweepSpec::sigma_sq_of(db), &dims))
        .collect::<sublinear_core::Result<_>>()?;
    let (n_snr, n_est) = (sigmas.len(), spec.estimators.len());

    let per_trial: Vec<Vec<f64>> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(spec.seed, &[t]);
            let x = sample_signal(&dims, alphabet, &mut rng);
            let z: Vec<f64> = (0..dims.n).map(|_| rng.sample(StandardNormal)).collect();
            let x_dense = x.to_dense();
            let mut errors = Vec::with_capacity(n_snr * n_est);
            for &v in &sigmas {
                let sd = v.sqrt();
                let y: Vec<f64> = x_dense.iter().zip(&z).map(|(xi, zi)| xi + sd * zi).collect();
                for name in &spec.estimators {
                    let xhat = estimate(name, &y, &dims, alphabet, v)?;
                    errors.push(x.residual_sq(&xhat)? / dims.k as f64);
                }
            }
            Ok(errors)
        })
        .collect::<sublinear_core::Result<_>>()?;

    let mut rows = Vec::with_capacity(n_snr * n_est);
    let mut column = Vec::with_capacity(spec.trials);
    for (s, &db) in spec.snr_db.iter().enumerate() {
        for (e, name) in spec.estimators.iter().enumerate() {
            column.clear();
            column.extend(per_trial.iter().map(|errs| errs[s * n_est + e]));
            let (mse_mean, mse_stderr) = summarize(&column);
            rows.push(SweepRow {
                coordinate: db,
                estimator: name.clone(),
                n: dims.n,
                k: dims.k,
                trials: spec.trials,
                mse_mean,
                mse_stderr,
                seed: spec.seed,
            });
        }
    }
    SweepRow::sort(&mut rows);
    Ok(rows)
}

fn policy_of(name: &str, switch_db: f64) -> DenoiserPolicy {
    match name {
        "separable" => DenoiserPolicy::Separable,
        "nonseparable" => DenoiserPolicy::Nonseparable,
        _ => DenoiserPolicy::Switched { threshold_db: switch_db },
    }
}

fn amp_final_mse(
    spec: &SweepSpec,
    measurements: usize,
    sigma_sq: f64,
    config: &AmpConfig,
    instance_seed: u64,
) -> sublinear_core::Result<f64> {
    let inst = CsInstance::sample(&spec.dims, &spec.alphabet, measurements, sigma_sq, instance_seed)?;
    let trace = amp_run(&inst.y, &inst.a, None, config, &spec.dims, &spec.alphabet)?;
    Ok(trace.final_mse(&inst.x))
}

/// Damping used for `policy` at δ index `di`: either fixed or the grid point
/// with the smallest mean final error over `search_trials` instances that
/// are disjoint from the evaluation instances.
pub fn choose_damping(
    spec: &SweepSpec,
    policy: DenoiserPolicy,
    di: usize,
    measurements: usize,
    sigma_sq: f64,
) -> CliResult<f64> {
    match spec.damping {
        Damping::Fixed(theta) => Ok(theta),
        Damping::Search => {
            let search = damping_search(&default_damping_grid(), spec.search_trials, |theta, t| {
                let config = AmpConfig::new(spec.iters, theta, policy)?;
                amp_final_mse(spec, measurements, sigma_sq, &config, derive_seed(spec.seed, &[SEARCH_PATH, di as u64, t]))
            })?;
            Ok(search.best_theta)
        }
    }
}

/// Final AMP square error versus δ for each policy. Every policy sees the
/// same instances; each trial draws a fresh matrix.
pub fn sweep_delta(spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    let sigma_sq = SweepSpec::sigma_sq_of(spec.snr_db[0]);
    let mut rows = Vec::new();
    for (di, &delta) in spec.delta.iter().enumerate() {
        let measurements = measurements_for_delta(delta, &spec.dims)?;
        for name in &spec.estimators {
            let policy = policy_of(name, spec.switch_db);
            let theta = choose_damping(spec, policy, di, measurements, sigma_sq)?;
            let errors = delta_trial_errors(spec, di, policy, theta)?;
            let (mse_mean, mse_stderr) = summarize(&errors);
            rows.push(SweepRow {
                coordinate: delta,
                estimator: name.clone(),
                n: spec.dims.n,
                k: spec.dims.k,
                trials: spec.trials,
                mse_mean,
                mse_stderr,
                seed: spec.seed,
            });
        }
    }
    SweepRow::sort(&mut rows);
    Ok(rows)
}

fn denoiser_of(name: &str, dims: ProblemDims, alphabet: &Alphabet) -> Box<dyn Denoiser> {
    if name == "nonseparable" {
        Box::new(NonseparableDenoiser { dims, alphabet: alphabet.clone() })
    } else {
        Box::new(SeparableDenoiser { dims, alphabet: alphabet.clone() })
    }
}

/// Mean output error `‖η(x + √v z, v) − x‖²/k` of a standalone denoiser at
/// per-coordinate input variance `v`, over `trials` draws.
pub fn standalone_curve_point(
    denoiser: &dyn Denoiser,
    v: f64,
    trials: usize,
    seed: u64,
    dims: &ProblemDims,
    alphabet: &Alphabet,
) -> sublinear_core::Result<MeanEstimate> {
    let errors: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, &[t]);
            let x = sample_signal(dims, alphabet, &mut rng);
            let sd = v.sqrt();
            let u: Vec<f64> = x.to_dense().iter().map(|xi| xi + sd * rng.sample::<f64, _>(StandardNormal)).collect();
            let out = denoiser.denoise(&u, v)?;
            Ok(x.residual_sq(&out)? / dims.k as f64)
        })
        .collect::<sublinear_core::Result<_>>()?;
    Ok(MeanEstimate::from_samples(&errors))
}

/// Input/output square errors of denoisers: standalone AWGN curves over the
/// input-variance grid, and per-iteration pairs from AMP runs with the true
/// signal supplied. AMP pairs the separable denoiser with the separable
/// policy and the non-separable one with the switched policy.
pub fn denoiser_transfer(spec: &SweepSpec) -> CliResult<Vec<TransferRow>> {
    let dims = spec.dims;
    let alphabet = &spec.alphabet;
    let mut rows = Vec::new();
    for (e, name) in spec.estimators.iter().enumerate() {
        let denoiser = denoiser_of(name, dims, alphabet);
        for (i, &v) in spec.input_mse.iter().enumerate() {
            let seed = derive_seed(spec.seed, &[CURVE_PATH, e as u64, i as u64]);
            let est = standalone_curve_point(denoiser.as_ref(), v, spec.trials, seed, &dims, alphabet)?;
            rows.push(TransferRow { run: format!("bayes-{name}"), iteration: i, input_mse: v, output_mse: est.mean });
        }
    }

    let sigma_sq = SweepSpec::sigma_sq_of(spec.snr_db[0]);
    let measurements = measurements_for_delta(spec.delta[0], &dims)?;
    for name in &spec.estimators {
        let policy = if name == "nonseparable" {
            DenoiserPolicy::Switched { threshold_db: spec.switch_db }
        } else {
            DenoiserPolicy::Separable
        };
        let theta = choose_damping(spec, policy, 0, measurements, sigma_sq)?;
        let config = AmpConfig::new(spec.iters, theta, policy)?;
        let traces: Vec<Vec<(f64, f64)>> = (0..spec.runs as u64)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(spec.seed, &[TRAJECTORY_PATH, r]);
                let inst = CsInstance::sample(&dims, alphabet, measurements, sigma_sq, seed)?;
                let trace = amp_run(&inst.y, &inst.a, Some(&inst.x), &config, &dims, alphabet)?;
                Ok(trace
                    .states
                    .iter()
                    .map(|s| (s.input_mse.unwrap_or(f64::NAN), s.output_mse.unwrap_or(f64::NAN)))
                    .collect())
            })
            .collect::<sublinear_core::Result<_>>()?;
        for (r, trace) in traces.iter().enumerate() {
            for (t, &(input_mse, output_mse)) in trace.iter().enumerate() {
                rows.push(TransferRow { run: format!("amp-{}-{r}", policy.name()), iteration: t, input_mse, output_mse });
            }
        }
    }
    Ok(rows)
}

/// Final-error samples of one policy at one δ, on the evaluation instances
/// [`sweep_delta`] uses.
pub fn delta_trial_errors(spec: &SweepSpec, di: usize, policy: DenoiserPolicy, theta: f64) -> CliResult<Vec<f64>> {
    let sigma_sq = SweepSpec::sigma_sq_of(spec.snr_db[0]);
    let measurements = measurements_for_delta(spec.delta[di], &spec.dims)?;
    let config = AmpConfig::new(spec.iters, theta, policy)?;
    Ok((0..spec.trials as u64)
        .into_par_iter()
        .map(|t| amp_final_mse(spec, measurements, sigma_sq, &config, derive_seed(spec.seed, &[EVAL_PATH, di as u64, t])))
        .collect::<sublinear_core::Result<_>>()?)
}
