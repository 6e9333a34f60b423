use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sublinear_core::amp::{amp_run, AmpConfig, CsInstance, DenoiserPolicy};
use sublinear_core::channel::{measurements_for_delta, SensingMatrix};
use sublinear_core::{Alphabet, ProblemDims};

fn amp(c: &mut Criterion) {
    let alphabet = Alphabet::unit();
    let dims = ProblemDims::new(1 << 12, 8).unwrap();
    let m = measurements_for_delta(4.0, &dims).unwrap();
    let inst = CsInstance::sample(&dims, &alphabet, m, 1e-4, 1).unwrap();

    let mut group = c.benchmark_group("amp");
    group.sample_size(20);
    group.bench_function("matrix_generation", |b| b.iter(|| SensingMatrix::gaussian(m, dims.n, 7)));
    for policy in [DenoiserPolicy::Separable, DenoiserPolicy::Switched { threshold_db: 6.0 }] {
        let config = AmpConfig::new(30, 0.8, policy).unwrap();
        group.bench_with_input(BenchmarkId::new("run_30_iterations", policy.name()), &config, |b, config| {
            b.iter(|| amp_run(&inst.y, &inst.a, None, config, &dims, &alphabet).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, amp);
criterion_main!(benches);
