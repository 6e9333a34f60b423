use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sublinear_core::channel::awgn_transmit;
use sublinear_core::estimators::{ml_estimate, nonseparable_bayes, separable_bayes};
use sublinear_core::rng::substream;
use sublinear_core::{sample_signal, Alphabet, NoiseModel, ProblemDims};

fn observation(n: usize, k: usize) -> (ProblemDims, NoiseModel, Vec<f64>) {
    let dims = ProblemDims::new(n, k).unwrap();
    let noise = NoiseModel::new(0.25, &dims).unwrap();
    let mut rng = substream(1, &[]);
    let x = sample_signal(&dims, &Alphabet::unit(), &mut rng);
    let y = awgn_transmit(&x, &noise, &mut rng);
    (dims, noise, y)
}

fn estimators(c: &mut Criterion) {
    let alphabet = Alphabet::unit();
    let mut group = c.benchmark_group("awgn_estimators");
    for &(n, k) in &[(1usize << 12, 8usize), (1 << 16, 16)] {
        let (dims, noise, y) = observation(n, k);
        let v = noise.sigma_eff_sq;
        group.bench_with_input(BenchmarkId::new("ml", n), &y, |b, y| {
            b.iter(|| ml_estimate(black_box(y), &dims, &alphabet).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("separable", n), &y, |b, y| {
            b.iter(|| separable_bayes(black_box(y), &dims, &alphabet, v).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nonseparable", n), &y, |b, y| {
            b.iter(|| nonseparable_bayes(black_box(y), &dims, &alphabet, v).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, estimators);
criterion_main!(benches);
