use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use simplectra::clt::{sigma_table, SigmaParams};
use simplectra::complex::{adjacency_matrix, PureComplex};
use simplectra::lm::{sample_lm, LMParams};
use simplectra::spectral::{eigenvalues_sym, moment_trace};
use simplectra::words::count_pair_classes;
use simplectra_bench::centered_fixture;

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_lm");
    for (n, d) in [(256, 1), (40, 2)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_d{d}")), &(n, d), |b, &(n, d)| {
            b.iter(|| sample_lm(LMParams::new(n, d, 0.5, black_box(3)).unwrap()).unwrap())
        });
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues_sym");
    g.sample_size(20);
    for (n, d) in [(128, 1), (256, 1), (32, 2)] {
        let h = centered_fixture(n, d, 0.5).h;
        g.bench_function(format!("n{n}_d{d}"), |b| b.iter(|| eigenvalues_sym(black_box(&h)).unwrap()));
    }
    g.finish();
}

fn traces(c: &mut Criterion) {
    let h = centered_fixture(128, 1, 0.5).h;
    c.bench_function("moment_trace_k4_n128", |b| b.iter(|| moment_trace(black_box(&h), 4).unwrap()));
}

fn adjacency(c: &mut Criterion) {
    let x = PureComplex::complete(14, 3);
    c.bench_function("adjacency_complete_n14_d3", |b| b.iter(|| adjacency_matrix(black_box(&x), 2).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_pair_classes");
    g.sample_size(10);
    for (d, k, l) in [(1, 6, 6), (2, 4, 4), (2, 6, 6)] {
        g.bench_function(format!("d{d}_k{k}_l{l}"), |b| b.iter(|| count_pair_classes(d, k, l).unwrap()));
    }
    g.finish();
}

fn sigma(c: &mut Criterion) {
    let params = SigmaParams::parse(2, "3/10").unwrap();
    c.bench_function("sigma_table_K12_d2", |b| b.iter(|| sigma_table(black_box(12), &params).unwrap()));
}

criterion_group!(benches, sampling, eigensolve, traces, adjacency, enumeration, sigma);
criterion_main!(benches);
