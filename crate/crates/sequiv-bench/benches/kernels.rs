//! Exact-arithmetic kernel benchmarks: determinants, signatures, Conway
//! polynomials, and sequence normalization.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sequiv::invariants::fingerprint;
use sequiv::moves::random_sequence;
use sequiv::normalize::{normalize_sequence, AnnotatedSequence};
use sequiv::sample;

fn bench_det(c: &mut Criterion) {
    let mut group = c.benchmark_group("det_bareiss");
    for n in [4usize, 8, 12] {
        let mut rng = sample::rng(n as u64);
        let m = sample::random_matrix(n, n, 9, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.det().unwrap())
        });
    }
    group.finish();
}

fn bench_signature(c: &mut Criterion) {
    let mut group = c.benchmark_group("signature");
    for n in [4usize, 8, 12] {
        let mut rng = sample::rng(100 + n as u64);
        let m = sample::random_symmetric(n, 9, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.signature().unwrap())
        });
    }
    group.finish();
}

fn bench_fingerprint(c: &mut Criterion) {
    let mut group = c.benchmark_group("fingerprint");
    for (m, g) in [(2usize, 1usize), (3, 2), (4, 3)] {
        let mut rng = sample::rng((10 * m + g) as u64);
        let s = sample::random_valid_osm(m, g, 4, &mut rng);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("m{m}_g{g}")),
            &s,
            |b, s| b.iter(|| fingerprint(s).unwrap()),
        );
    }
    group.finish();
}

fn bench_normalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("normalize");
    for len in [4usize, 8] {
        let mut rng = sample::rng(len as u64);
        let s = sample::random_valid_osm(2, 1, 2, &mut rng);
        let seq = AnnotatedSequence::new(random_sequence(&s, len, 2, 42)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(len), &seq, |b, seq| {
            b.iter(|| normalize_sequence(seq).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_det, bench_signature, bench_fingerprint, bench_normalize);
criterion_main!(benches);
