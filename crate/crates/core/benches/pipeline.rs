use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use galois_ext::fixtures;
use galois_ext::harness;
use galois_ext::homological::{is_n_koszul, Resolution};
use galois_ext::linalg::Field;
use galois_ext::par;

const Q: Field = Field::Rationals;

fn schedules() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn fixture_construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("quiver fixture D=5");
    g.sample_size(10);
    for (name, on) in schedules() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_parallel(on);
            b.iter(|| fixtures::paper_quiver(Q, 5).unwrap())
        });
    }
    g.finish();
}

fn resolutions(c: &mut Criterion) {
    let fx = fixtures::paper_quiver(Q, 5).unwrap();
    let a = fx.algebra();
    let a0 = a.degree_zero_module();
    let mut g = c.benchmark_group("minimal resolution of A_0, n=4");
    g.sample_size(10);
    for (name, on) in schedules() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_parallel(on);
            b.iter(|| Resolution::new(a, &a0, 4).unwrap())
        });
    }
    g.finish();
    let mut g = c.benchmark_group("is_N_koszul(A, 2, 4)");
    g.sample_size(10);
    for (name, on) in schedules() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_parallel(on);
            b.iter(|| is_n_koszul(a, 2, 4).unwrap())
        });
    }
    g.finish();
}

fn smash_isomorphism(c: &mut Criterion) {
    let fx = fixtures::paper_quiver(Q, 5).unwrap();
    let mut g = c.benchmark_group("cor1 quiver A0, n=2");
    g.sample_size(10);
    for (name, on) in schedules() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_parallel(on);
            b.iter(|| harness::verify_cor1(&fx, "A0", 2, 20).unwrap())
        });
    }
    g.finish();
    par::set_parallel(true);
}

criterion_group!(benches, fixture_construction, resolutions, smash_isomorphism);
criterion_main!(benches);
