use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lrs_sparts::harness::{scan_parallel, scan_sequential, ScanOptions};
use lrs_sparts::recurrence::{FloorPowerSpec, RecurrenceSpec, Sequence};
use lrs_sparts::sparts::{GpfOptions, PrimeSet};
use std::hint::black_box;

fn workloads() -> Vec<(&'static str, Sequence, PrimeSet, u64, u64, ScanOptions)> {
    let fib = Sequence::Recurrence(RecurrenceSpec::from_i64(&[1, 1], &[0, 1]).unwrap());
    let fp = Sequence::FloorPower(FloorPowerSpec::rational(1, 1, 3, 2).unwrap());
    let gpf = ScanOptions { gpf: Some(GpfOptions { budget: 20_000, mr_rounds: 16 }), ..Default::default() };
    vec![
        ("fibonacci_s23", fib.clone(), PrimeSet::parse("2,3").unwrap(), 500, 1000, ScanOptions::default()),
        ("fibonacci_gpf", fib, PrimeSet::parse("2,3").unwrap(), 100, 220, gpf),
        ("three_halves_s23", fp, PrimeSet::parse("2,3").unwrap(), 1000, 1500, ScanOptions::default()),
    ]
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    for (name, seq, s, lo, hi, opts) in workloads() {
        g.bench_with_input(BenchmarkId::new("sequential", name), &(), |b, _| {
            b.iter(|| scan_sequential(black_box(&seq), &s, lo, hi, &opts).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("parallel", name), &(), |b, _| {
            b.iter(|| scan_parallel(black_box(&seq), &s, lo, hi, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
