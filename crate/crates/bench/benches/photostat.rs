use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use photostat::{
    coherent_distribution, compare, number_difference_distribution, order_profile,
    squeezed_distribution, thermal_distribution, SqueezedParams,
};

fn squeezed_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("squeezed");
    for (r_disp, r_sq) in [(2.0, 0.5), (2.298, -0.769), (0.0, 1.5)] {
        let params = SqueezedParams::new(r_disp, r_sq).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(params), &params, |b, &p| {
            b.iter(|| squeezed_distribution(black_box(p), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn difference_distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("number_difference");
    for mean in [1.0, 10.0, 100.0] {
        let d = thermal_distribution(mean, 1e-12).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(mean), &d, |b, d| {
            b.iter(|| number_difference_distribution(black_box(d)))
        });
    }
    group.finish();
}

fn ordered_comparison(c: &mut Criterion) {
    let t = thermal_distribution(50.0, 1e-12).unwrap();
    let k = coherent_distribution(50.0, 1e-12).unwrap();
    c.bench_function("compare/thermal50_coherent50", |b| {
        b.iter(|| compare(&order_profile(black_box(&t)), &order_profile(black_box(&k)), 1e-10).unwrap())
    });
}

criterion_group!(benches, squeezed_construction, difference_distribution, ordered_comparison);
criterion_main!(benches);
