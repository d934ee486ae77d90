use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use waring_cli::scan::{run_scan, Bound, Format, ScanJob};
use waring_core::matrix::decompose_matrix;
use waring_core::ring::decompose_ring_element;
use waring_core::spectral::spectrum;
use waring_core::{build_field, field_of_order, gamma, FqMatrix, RingElem, RingSpec};

fn fields(c: &mut Criterion) {
    c.bench_function("build F_3^7", |b| b.iter(|| build_field(black_box(3), 7).unwrap()));
    c.bench_function("build F_65521", |b| b.iter(|| build_field(black_box(65521), 1).unwrap()));
}

fn gamma_engine(c: &mut Criterion) {
    c.bench_function("gamma(12, 13^3)", |b| b.iter(|| gamma(black_box(12), 2197).unwrap()));
    c.bench_function("gamma(20, 41^2)", |b| b.iter(|| gamma(black_box(20), 1681).unwrap()));
    c.bench_function("gamma(128, 65537) plain bitset", |b| b.iter(|| gamma(black_box(128), 65537).unwrap()));
}

fn spectra(c: &mut Criterion) {
    let ctx = field_of_order(1681).unwrap();
    c.bench_function("spectrum k=5 q=1681", |b| b.iter(|| spectrum(&ctx, black_box(5))));
}

fn pipelines(c: &mut Criterion) {
    let ctx = Arc::new(field_of_order(11).unwrap());
    let a = FqMatrix::from_codes(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).unwrap();
    c.bench_function("decompose 3x3 over F_11, k=3", |b| b.iter(|| decompose_matrix(&ctx, black_box(&a), 3).unwrap()));
    let ring = RingSpec::zn(5 * 5 * 11 * 13).unwrap();
    c.bench_function("decompose in Z_3575, k=7", |b| {
        b.iter(|| decompose_ring_element(&ring, black_box(RingElem(1234)), 7).unwrap())
    });
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan k=6 auto bound");
    group.sample_size(10);
    for jobs in [1usize, 4] {
        let job = ScanJob {
            ks: 6..=6,
            bound: Bound::Auto,
            filter: None,
            format: Format::Csv,
            out: None,
            jobs,
            checkpoint: None,
            chunk_size: 64,
            stop_after_chunks: None,
        };
        group.bench_function(format!("jobs={jobs}"), |b| {
            b.iter(|| {
                let mut sink = Vec::new();
                run_scan(&job, &mut sink).unwrap();
                sink
            })
        });
    }
    group.finish();
}

criterion_group!(benches, fields, gamma_engine, spectra, pipelines, scans);
criterion_main!(benches);
