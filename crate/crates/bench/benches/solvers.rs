use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ness_core::entanglement::{boundary_t2, two_bath_config, DEFAULT_BRACKET};
use ness_core::rates::{golden_rule_rates, reduced_parameters};
use ness_core::solver::{
    bell_chain_steady, build_stationarity_system, solve_spectral_coherence, steady_identical_closed, steady_identical_linear,
};

fn steady_routes(c: &mut Criterion) {
    let cfg = two_bath_config(10.0, 1.0, 0.0, 0.1, 1000.0, 950.0);
    let gr = golden_rule_rates(&cfg).unwrap();
    let reduced = reduced_parameters(&gr).unwrap();

    let mut g = c.benchmark_group("steady");
    g.bench_function("closed", |b| b.iter(|| steady_identical_closed(black_box(&reduced)).unwrap()));
    g.bench_function("linear", |b| {
        b.iter(|| steady_identical_linear(&build_stationarity_system(black_box(&gr), 0.0)).unwrap())
    });
    g.bench_function("spectral", |b| b.iter(|| solve_spectral_coherence(black_box(&gr)).unwrap()));
    g.bench_function("bell_chain", |b| b.iter(|| bell_chain_steady(black_box(&gr)).unwrap()));
    g.finish();
}

fn boundary(c: &mut Criterion) {
    let template = two_bath_config(0.0, 1.0, 0.0, 0.0, 50.0, 50.0);
    c.bench_function("boundary_t2", |b| b.iter(|| boundary_t2(black_box(&template), 0.3, DEFAULT_BRACKET).unwrap()));
}

criterion_group!(benches, steady_routes, boundary);
criterion_main!(benches);
