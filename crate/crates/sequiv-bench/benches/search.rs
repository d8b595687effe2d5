//! Search benchmarks: the counterexample pair and a planted witness.

use criterion::{criterion_group, criterion_main, Criterion};

use sequiv::moves::{apply_move, Move};
use sequiv::sample;
use sequiv::search::{classical_equiv_bounded, strong_equiv_bounded, SearchConfig};
use sequiv::{imat, osm};

fn bench_counterexample(c: &mut Criterion) {
    let m0 = imat![[-1, -1], [-1, -1]];
    let m1 = imat![[-1, 0], [0, 0]];
    let cfg = SearchConfig::classical(2, 1, 0, 0);
    c.bench_function("classical_counterexample", |b| {
        b.iter(|| classical_equiv_bounded(&m1, &m0, &cfg).unwrap())
    });

    let s0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
    let s1 = osm!(3, 0, [[-1, 0], [0, 0]]);
    let scfg = SearchConfig::strong(2, 1, 1, 0);
    c.bench_function("strong_distinguish", |b| {
        b.iter(|| strong_equiv_bounded(&s0, &s1, &scfg).unwrap())
    });
}

fn bench_planted(c: &mut Criterion) {
    let mut rng = sample::rng(7);
    let s = sample::random_valid_osm(2, 0, 2, &mut rng);
    // One enlargement, one genus-block congruence.
    let e = {
        let x = sample::random_vec(1, 2, &mut rng);
        Move::enlarge(sequiv::EnlargeForm::A, x.clone(), x, sample::random_int(2, &mut rng))
    };
    let mid = apply_move(&s, &e).unwrap();
    let a = sample::random_strong_congruence(2, 1, 1, 2, &mut rng);
    let target = apply_move(&mid, &Move::StrongCongruence(a)).unwrap();
    let cfg = SearchConfig::strong(2, 2, 2, 0);
    c.bench_function("strong_planted_depth2", |b| {
        b.iter(|| strong_equiv_bounded(&s, &target, &cfg).unwrap())
    });
}

criterion_group!(benches, bench_counterexample, bench_planted);
criterion_main!(benches);
