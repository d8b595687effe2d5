//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Every assertion is exact; the runtime bounds are part of the
//! criteria.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sequiv::factorize::{elementary_factorization, factor_de, split_blocks, stabilizes_x, ElementaryFactor};
use sequiv::generators;
use sequiv::invariants::{conway, fingerprint, signature_invariant};
use sequiv::moves::{
    self, apply_move, apply_sequence, trailing_enlargement, EnlargeForm, Move, MoveSequence,
};
use sequiv::normalize::{normalize_sequence, swap_congruence_enlarge, swap_reduce_enlarge, AnnotatedSequence, MoveKind};
use sequiv::sample;
use sequiv::search::{classical_equiv_bounded, strong_equiv_bounded, SearchConfig, SearchOutcome};
use sequiv::seifert::OrderedSeifertMatrix;
use sequiv::{imat, osm, IntMatrix};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn zpoly(cs: &[i64]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = cs.iter().map(|&c| bi(c)).collect();
    while v.last().is_some_and(|c| c == &bi(0)) {
        v.pop();
    }
    v
}

fn check_time(criterion: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{criterion}: runtime {elapsed:?} exceeded budget {budget:?}"
    );
    println!("PASS {criterion} ({elapsed:?})");
}

/// Random strong enlargement move applicable to `s`, entries within `bound`.
fn random_enlarge(s: &OrderedSeifertMatrix, bound: i64, rng: &mut ChaCha8Rng) -> Move {
    let n = s.dim();
    let m = s.components();
    let form = if rng.gen::<bool>() { EnlargeForm::A } else { EnlargeForm::B };
    let x = sample::random_vec(n, bound, rng);
    let mut y = sample::random_vec(n, bound, rng);
    y[..m - 1].clone_from_slice(&x[..m - 1]);
    Move::enlarge(form, x, y, sample::random_int(bound, rng))
}

/// Independent congruence oracle: plain triple product.
fn triple(m: &IntMatrix, a: &IntMatrix) -> IntMatrix {
    a.transpose().mul(m).unwrap().mul(a).unwrap()
}

#[test]
fn criterion_01_counterexample_reproduction() {
    let start = Instant::now();
    let m0_mat = imat![[-1, -1], [-1, -1]];
    let m1_mat = imat![[-1, 0], [0, 0]];

    // (a) Classically equivalent, with a short transvection witness.
    let cfg = SearchConfig::classical(2, 1, 0, 0);
    match classical_equiv_bounded(&m1_mat, &m0_mat, &cfg).unwrap() {
        SearchOutcome::Equivalent { witness, verified, .. } => {
            assert!(verified);
            assert!(witness.len() <= 2, "witness depth {} > 2", witness.len());
            let (end, _) = moves::apply_moves_classical(&m1_mat, &witness).unwrap();
            assert_eq!(end, m0_mat);
        }
        other => panic!("expected Equivalent, got {other:?}"),
    }

    // (b) Strongly distinguished by the linking table.
    let m0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
    let m1 = osm!(3, 0, [[-1, 0], [0, 0]]);
    let scfg = SearchConfig::strong(2, 1, 1, 0);
    match strong_equiv_bounded(&m0, &m1, &scfg).unwrap() {
        SearchOutcome::Distinguished { invariant, .. } => assert_eq!(invariant, "linking"),
        other => panic!("expected Distinguished, got {other:?}"),
    }
    let t0 = m0.linking_numbers().unwrap();
    assert_eq!(
        (t0.get(1, 2), t0.get(1, 3), t0.get(2, 3)),
        (&bi(-1), &bi(2), &bi(2))
    );
    let t1 = m1.linking_numbers().unwrap();
    assert_eq!(
        (t1.get(1, 2), t1.get(1, 3), t1.get(2, 3)),
        (&bi(0), &bi(1), &bi(0))
    );

    check_time("[1] counterexample reproduction", start, Duration::from_secs(1));
}

#[test]
fn criterion_02_congruence_enlarge_exchange() {
    let start = Instant::now();
    let mut rng = sample::rng(1002);
    let mut count = 0;
    while count < 1000 {
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(0..=3);
        let s = sample::random_valid_osm(m, g, 5, &mut rng);
        let p_mat = sample::random_strong_congruence(m, g, rng.gen_range(0..=4), 2, &mut rng);
        let p = Move::StrongCongruence(p_mat);
        let m2 = apply_move(&s, &p).unwrap();
        let e = random_enlarge(&m2, 5, &mut rng);
        let m3 = apply_move(&m2, &e).unwrap();

        let (e_prime, q) = swap_congruence_enlarge(&s, &p, &e).unwrap();
        // Q^t * M4 * Q = M3, by direct multiplication.
        let m4 = apply_move(&s, &e_prime).unwrap();
        let Move::StrongCongruence(q_mat) = &q else { panic!("Q must be a strong congruence") };
        assert_eq!(triple(m4.matrix(), q_mat), *m3.matrix());
        // Boundary-prefix condition on the rewritten enlargement.
        let Move::Enlarge { x, y, .. } = &e_prime else { panic!() };
        for k in 0..m - 1 {
            assert_eq!(x[k], y[k]);
        }
        count += 1;
    }
    check_time("[2] congruence/enlarge exchange identity (1000 instances)", start, Duration::from_secs(10));
}

#[test]
fn criterion_03_reduce_enlarge_exchange() {
    let start = Instant::now();
    let mut rng = sample::rng(1003);
    let combos = [
        (EnlargeForm::A, EnlargeForm::A),
        (EnlargeForm::A, EnlargeForm::B),
        (EnlargeForm::B, EnlargeForm::A),
        (EnlargeForm::B, EnlargeForm::B),
    ];
    for trial in 0..500 {
        let (form1, form3) = combos[trial % 4];
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(0..=2);
        let base = sample::random_valid_osm(m, g, 4, &mut rng);
        let n = base.dim();
        // Build M1 with a trailing block of the chosen form.
        let x1 = sample::random_vec(n, 4, &mut rng);
        let mut y1 = sample::random_vec(n, 4, &mut rng);
        y1[..m - 1].clone_from_slice(&x1[..m - 1]);
        let m1 = moves::enlarge(&base, form1, &x1, &y1, &sample::random_int(4, &mut rng)).unwrap();
        // Incoming enlargement of the reduced matrix.
        let x3 = sample::random_vec(n, 4, &mut rng);
        let mut y3 = sample::random_vec(n, 4, &mut rng);
        y3[..m - 1].clone_from_slice(&x3[..m - 1]);
        let e = Move::enlarge(form3, x3, y3, sample::random_int(4, &mut rng));

        let m3 = apply_move(&apply_move(&m1, &Move::Reduce).unwrap(), &e).unwrap();
        let (e2, c2, r2) = swap_reduce_enlarge(&m1, &Move::Reduce, &e).unwrap();
        let out = apply_move(&apply_move(&apply_move(&m1, &e2).unwrap(), &c2).unwrap(), &r2).unwrap();
        assert_eq!(out, m3, "trial {trial} ({form1:?} -> {form3:?})");
        assert_eq!(
            [MoveKind::of(&e2), MoveKind::of(&c2), MoveKind::of(&r2)],
            [MoveKind::Enlarge, MoveKind::Congruence, MoveKind::Reduce]
        );
    }
    check_time("[3] reduce/enlarge exchange replay (500 pairs)", start, Duration::from_secs(10));
}

#[test]
fn criterion_04_sequence_normalization() {
    let start = Instant::now();
    let mut rng = sample::rng(1004);
    for trial in 0..200 {
        let m = rng.gen_range(1..=3);
        let g = rng.gen_range(0..=2);
        let s = sample::random_valid_osm(m, g, 2, &mut rng);
        let len = rng.gen_range(0..=8);
        let seq = moves::random_sequence(&s, len, 2, 40_000 + trial);
        let annotated = AnnotatedSequence::new(seq).unwrap();

        let one = Instant::now();
        let out = normalize_sequence(&annotated).unwrap();
        assert!(
            one.elapsed() < Duration::from_secs(1),
            "trial {trial}: per-sequence budget exceeded"
        );

        // No reduction before a later enlargement.
        assert!(out.is_normalized(), "trial {trial}: {}", out.kind_string());
        assert_eq!(out.start(), annotated.start(), "trial {trial}");
        assert_eq!(out.end(), annotated.end(), "trial {trial}");
        assert_eq!(out.enlarge_count(), annotated.enlarge_count(), "trial {trial}");
        assert_eq!(out.reduce_count(), annotated.reduce_count(), "trial {trial}");
    }
    check_time("[4] sequence normalization (200 sequences)", start, Duration::from_secs(200));
}

#[test]
fn criterion_05_invariant_stability() {
    let start = Instant::now();
    let mut rng = sample::rng(1005);
    for trial in 0..1000 {
        let m = rng.gen_range(1..=3);
        let g = rng.gen_range(0..=1);
        let s = sample::random_valid_osm(m, g, 3, &mut rng);
        let before = fingerprint(&s).unwrap();
        let len = rng.gen_range(0..=6);
        let seq = moves::random_sequence(&s, len, 2, 50_000 + trial);
        let (end, _) = apply_sequence(&seq).unwrap();
        let after = fingerprint(&end).unwrap();
        assert_eq!(before, after, "trial {trial}");
        assert_eq!(before.canonical_bytes(), after.canonical_bytes(), "trial {trial}");
    }
    check_time("[5] invariant stability (1000 pairs)", start, Duration::from_secs(60));
}

#[test]
fn criterion_06_elementary_factorization() {
    let start = Instant::now();
    // Single-factor case at m = 4, g = 2: the lone 1 lands in row 1,
    // column 5 of the 7x7 identity.
    let single = ElementaryFactor { i: 1, j: 2, exponent: bi(1) };
    assert_eq!(
        single.matrix(4, 2),
        imat![
            [1, 0, 0, 0, 1, 0, 0],
            [0, 1, 0, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 0, 1]
        ]
    );

    let mut rng = sample::rng(1006);
    for trial in 0..500 {
        let m = rng.gen_range(2..=4);
        let g = rng.gen_range(1..=3);
        let c = sample::random_change_of_basis(m, g, 5, 4, &mut rng);
        let cb = split_blocks(&c, m, g).unwrap();
        let (_, e) = factor_de(&cb);
        let mut prod = IntMatrix::identity(m - 1 + 2 * g);
        for f in elementary_factorization(&cb) {
            prod = prod.mul(&f.matrix(m, g)).unwrap();
        }
        assert_eq!(prod, e, "trial {trial}");
    }
    check_time("[6] elementary factorization (500 random blocks)", start, Duration::from_secs(30));
}

#[test]
fn criterion_07_x_stabilization() {
    let start = Instant::now();
    let mut rng = sample::rng(1007);
    for trial in 0..500 {
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(0..=3);
        let c = sample::random_change_of_basis(m, g, 10, 2, &mut rng);
        assert!(stabilizes_x(&c, m, g).unwrap(), "trial {trial}");
    }
    let mut corrupted = 0;
    while corrupted < 100 {
        let m = rng.gen_range(1..=3);
        let g = rng.gen_range(1..=3);
        let mut c = sample::random_change_of_basis(m, g, 6, 2, &mut rng);
        let i = m - 1 + rng.gen_range(0..2 * g);
        let j = m - 1 + rng.gen_range(0..2 * g);
        let bump = c.entry(i, j) + bi(rng.gen_range(1..=3));
        c.set(i, j, bump);
        let s = c.block(m - 1, m - 1, 2 * g, 2 * g);
        if s.is_symplectic(g).unwrap() {
            continue; // the bump happened to produce another symplectic S
        }
        assert!(!stabilizes_x(&c, m, g).unwrap());
        corrupted += 1;
    }
    check_time("[7] X-stabilization (500 valid + 100 corrupted)", start, Duration::from_secs(30));
}

#[test]
fn criterion_08_conway_sanity() {
    let start = Instant::now();
    assert_eq!(conway(&osm!(1, 0, [])).unwrap(), zpoly(&[1]));
    assert_eq!(conway(&osm!(1, 1, [[0, 1], [0, 0]])).unwrap(), zpoly(&[1]));
    assert_eq!(conway(&osm!(1, 1, [[-1, 1], [0, -1]])).unwrap(), zpoly(&[1, 0, 1]));
    check_time("[8] Conway sanity values", start, Duration::from_secs(1));
}

#[test]
fn criterion_09_plant_and_recover() {
    let start = Instant::now();
    let mut rng = sample::rng(1009);
    for trial in 0..100 {
        let trial_start = Instant::now();
        let m = rng.gen_range(1..=2);
        let s = sample::random_valid_osm(m, 0, 2, &mut rng);
        let max_genus = s.genus() + 2;

        // Plant a sequence of depth <= 3 using only moves the bounded
        // search generates: single congruence generators, enlargements
        // with entries within the bound, and reductions.
        let len = rng.gen_range(1..=3);
        let mut current = s.clone();
        for _ in 0..len {
            let g = current.genus();
            let gens = generators::strong_congruence_generators(current.components(), g, 2);
            let can_reduce = g >= 1 && trailing_enlargement(current.matrix()).is_some();
            let mv = loop {
                match rng.gen_range(0..10) {
                    0..=4 if !gens.is_empty() => {
                        break Move::StrongCongruence(gens[rng.gen_range(0..gens.len())].clone())
                    }
                    5..=7 if g < max_genus => break random_enlarge(&current, 2, &mut rng),
                    8..=9 if can_reduce => break Move::Reduce,
                    _ => continue,
                }
            };
            current = apply_move(&current, &mv).unwrap();
        }

        let cfg = SearchConfig::strong(2, 2, max_genus, trial as u64);
        match strong_equiv_bounded(&s, &current, &cfg).unwrap() {
            SearchOutcome::Equivalent { witness, verified, .. } => {
                assert!(verified, "trial {trial}");
                let (end, _) = apply_sequence(&MoveSequence::new(s.clone(), witness)).unwrap();
                assert_eq!(end, current, "trial {trial}");
            }
            other => panic!("trial {trial}: expected Equivalent, got {other:?}"),
        }
        assert!(
            trial_start.elapsed() < Duration::from_secs(30),
            "trial {trial}: per-trial budget exceeded ({:?})",
            trial_start.elapsed()
        );
    }
    check_time("[9] plant-and-recover search (100 trials)", start, Duration::from_secs(3000));
}

#[test]
fn criterion_10_lambda_block_consistency() {
    let start = Instant::now();
    let mut rng = sample::rng(1010);
    for trial in 0..500 {
        let m = rng.gen_range(1..=5);
        let g = rng.gen_range(0..=2);
        let s = sample::random_valid_osm(m, g, 6, &mut rng);
        let table = s.linking_numbers().unwrap();
        let lambda = s.lambda_block();
        // Diagonal identity: lambda_{i,i} = -sum_{j != i} lambda_{i,j} - lk(i, m).
        for i in 1..m {
            let mut expected = -table.get(i, m).clone();
            for j in 1..m {
                if j != i {
                    expected -= table.get(i, j);
                }
            }
            assert_eq!(lambda.entry(i - 1, i - 1), &expected, "trial {trial}, row {i}");
        }
        // Round-trip through the linking table.
        assert_eq!(sequiv::seifert::lambda_from_linking(&table), lambda, "trial {trial}");
    }
    check_time("[10] lambda-block consistency (500 matrices)", start, Duration::from_secs(30));
}

/// The fifth criterion's companion check, kept separate so the signature
/// landscape is exercised too: signature changes sign under negation.
#[test]
fn signature_sign_sanity() {
    let s = osm!(1, 1, [[-1, 1], [0, -1]]);
    let neg = OrderedSeifertMatrix::new(1, 1, s.matrix().neg()).unwrap();
    assert_eq!(signature_invariant(&s), -2);
    assert_eq!(signature_invariant(&neg), 2);
}
