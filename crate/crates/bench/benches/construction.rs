use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use scargraph::certificate::{build_certificate, CertOptions};
use scargraph::graph::girth;
use scargraph::pair_trees;
use scargraph::scar::multi_glue;
use scargraph::spectral::{spectral_summary, Method, SpectralOptions};
use scargraph_bench::{cubic_1000, lps_5_29};

fn bench_girth(c: &mut Criterion) {
    let lps = lps_5_29();
    let cubic = cubic_1000();
    let mut group = c.benchmark_group("girth");
    group.sample_size(10);
    group.bench_function("lps_5_29", |b| b.iter(|| girth(black_box(&lps))));
    group.bench_function("cubic_1000", |b| b.iter(|| girth(black_box(&cubic))));
    group.finish();
}

fn bench_pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair_trees");
    for (d, depth) in [(2, 6), (3, 5), (4, 4)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_D{depth}")), &(d, depth), |b, &(d, depth)| {
            b.iter(|| pair_trees(d, depth, 1).unwrap())
        });
    }
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let lps = lps_5_29();
    let cubic = cubic_1000();
    let iterative = SpectralOptions {
        method: Some(Method::Iterative),
        ..SpectralOptions::default()
    };
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("lanczos_lps_5_29", |b| b.iter(|| spectral_summary(&lps, &iterative).unwrap()));
    group.bench_function("lanczos_cubic_1000", |b| b.iter(|| spectral_summary(&cubic, &iterative).unwrap()));
    group.bench_function("dense_cubic_1000", |b| {
        b.iter(|| spectral_summary(&cubic, &SpectralOptions::default()).unwrap())
    });
    group.finish();
}

fn bench_construction(c: &mut Criterion) {
    let cubic = cubic_1000();
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    group.bench_function("multi_glue_cubic_r2_k2", |b| b.iter(|| multi_glue(&cubic, 2, 2, 7).unwrap()));
    let sg = multi_glue(&cubic, 2, 2, 7).unwrap();
    let opts = CertOptions {
        localization_scan: false,
        ..CertOptions::default()
    };
    group.bench_function("certificate_cubic_r2_k2", |b| b.iter(|| build_certificate(&sg, &opts)));
    group.finish();
}

criterion_group!(benches, bench_girth, bench_pairing, bench_spectrum, bench_construction);
criterion_main!(benches);
