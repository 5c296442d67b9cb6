use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use resonax_bench::{shear_fixtures, weight_fixtures};
use resonax_core::mc::{mc_volume, DomainSpec};
use resonax_core::{
    check_admissible, check_compliance, enumerate_weight_space, quasi_resonance, Character,
    WeightMatrix,
};

fn admissibility(c: &mut Criterion) {
    let mut g = c.benchmark_group("admissibility");
    for (name, a) in weight_fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| {
            b.iter(|| check_admissible(a).unwrap())
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("weight_space");
    for (name, a) in weight_fixtures() {
        let k = Character::new(vec![12.into(); a.r()]);
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| {
            b.iter(|| enumerate_weight_space(a, &k).unwrap())
        });
    }
    g.finish();
}

fn resonance(c: &mut Criterion) {
    let mut g = c.benchmark_group("quasi_resonance");
    for (name, a) in weight_fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| {
            b.iter(|| quasi_resonance(a, a).unwrap())
        });
    }
    g.finish();
}

fn compliance(c: &mut Criterion) {
    let mut g = c.benchmark_group("compliance");
    let source = WeightMatrix::from_weights(&[1, 1]).unwrap();
    for (k, f) in shear_fixtures() {
        let target = WeightMatrix::from_weights(&[1, i64::from(k)]).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(k), &f, |b, f| {
            b.iter(|| check_compliance(f, &source, &target).unwrap())
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("mc_volume");
    g.sample_size(10);
    for (name, spec) in [
        ("ball-2", DomainSpec::unit_ball(2)),
        ("shear-3", DomainSpec::shear_image_of_ball(3)),
    ] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| mc_volume(spec, 42, 100_000).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    admissibility,
    enumeration,
    resonance,
    compliance,
    monte_carlo
);
criterion_main!(benches);
