use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use l2alpha::nets::best_approx_records;
use l2alpha::{smith_normal_form, SpectralModel, Tolerances};
use l2alpha_bench::{circle_point, counterexample, snf_input};

fn bench_snf(c: &mut Criterion) {
    let a = snf_input();
    c.bench_function("smith_normal_form_3x3", |b| b.iter(|| smith_normal_form(black_box(&a)).unwrap()));
}

fn bench_sample(c: &mut Criterion) {
    let model = SpectralModel::new(&counterexample(), Tolerances::default()).unwrap();
    let mut group = c.benchmark_group("spectral_sample");
    for i in [393u64, 2_690, 13_843] {
        group.bench_with_input(BenchmarkId::from_parameter(i), &i, |b, &i| b.iter(|| model.sample(i, i).unwrap()));
    }
    group.finish();
}

fn bench_records(c: &mut Criterion) {
    let a = circle_point();
    let mut group = c.benchmark_group("best_approx_records");
    group.sample_size(10);
    for n in [1_000u64, 10_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| best_approx_records(&a, 1, n).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_snf, bench_sample, bench_records);
criterion_main!(benches);
