//! Deterministic random generators for matrices, symplectic words, and valid
//! ordered Seifert matrices. Everything is seeded explicitly; there is no
//! hidden global randomness.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::generators;
use crate::laurent::LaurentPoly;
use crate::matrix::IntMatrix;
use crate::seifert::OrderedSeifertMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_int(bound: i64, rng: &mut ChaCha8Rng) -> BigInt {
    BigInt::from(rng.gen_range(-bound..=bound))
}

pub fn random_vec(len: usize, bound: i64, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    (0..len).map(|_| random_int(bound, rng)).collect()
}

pub fn random_matrix(rows: usize, cols: usize, bound: i64, rng: &mut ChaCha8Rng) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| random_int(bound, rng))
}

pub fn random_symmetric(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = random_int(bound, rng);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

pub fn random_laurent(rng: &mut ChaCha8Rng, max_exp: i64, bound: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    let terms = rng.gen_range(0..=4);
    for _ in 0..terms {
        let e = rng.gen_range(-max_exp..=max_exp);
        p = &p + &LaurentPoly::term(e, random_int(bound, rng));
    }
    p
}

/// Random word in elementary unimodular generators (transvections, swaps,
/// sign flips); always has determinant +-1.
pub fn random_unimodular(n: usize, word_len: usize, bound: i64, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..word_len {
        let gen = match rng.gen_range(0..3) {
            0 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let mut t = IntMatrix::identity(n);
                t.set(i, j, random_int(bound, rng));
                t
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let mut images: Vec<usize> = (0..n).collect();
                images.swap(i, j);
                IntMatrix::permutation(&images)
            }
            _ => {
                let i = rng.gen_range(0..n);
                let mut t = IntMatrix::identity(n);
                t.set(i, i, -BigInt::one());
                t
            }
        };
        m = m.mul(&gen).expect("square");
    }
    m
}

/// Random word in symplectic transvections and the standard form itself;
/// always symplectic for the standard genus-`g` form.
pub fn random_symplectic(g: usize, word_len: usize, bound: i64, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut m = IntMatrix::identity(2 * g);
    if g == 0 {
        return m;
    }
    let dirs = generators::symplectic_directions(g);
    for _ in 0..word_len {
        let gen = if rng.gen_range(0..8) == 0 {
            IntMatrix::standard_sym(g)
        } else {
            let v = &dirs[rng.gen_range(0..dirs.len())];
            let c = loop {
                let c = rng.gen_range(-bound..=bound);
                if c != 0 {
                    break c;
                }
            };
            generators::symplectic_transvection(g, v, &BigInt::from(c))
        };
        m = m.mul(&gen).expect("square");
    }
    m
}

/// Random block-shaped matrix `(I B; 0 S)` with `S` a symplectic word: a
/// legal strong congruence whose lower block stabilizes the standard form.
pub fn random_change_of_basis(
    m: usize,
    g: usize,
    word_len: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> IntMatrix {
    let s = random_symplectic(g, word_len, bound, rng);
    let b = random_matrix(m - 1, 2 * g, bound, rng);
    let mut c = IntMatrix::identity(m - 1 + 2 * g);
    c.set_block(0, m - 1, &b);
    c.set_block(m - 1, m - 1, &s);
    c
}

/// Random word in the strong congruence generator set for the given shape.
pub fn random_strong_congruence(
    m: usize,
    g: usize,
    word_len: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> IntMatrix {
    let gens = generators::strong_congruence_generators(m, g, bound);
    let mut a = IntMatrix::identity(m - 1 + 2 * g);
    if gens.is_empty() {
        return a;
    }
    for _ in 0..word_len {
        a = a.mul(&gens[rng.gen_range(0..gens.len())]).expect("square");
    }
    a
}

/// Random strictly valid ordered Seifert matrix. The genus block is seeded
/// with the standard skew pattern so the intersection form is unimodular,
/// then the whole matrix is mixed by a random strong congruence.
pub fn random_valid_osm(
    m: usize,
    g: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> OrderedSeifertMatrix {
    assert!(m >= 1);
    let n = m - 1 + 2 * g;
    let mut mat = IntMatrix::zeros(n, n);
    // Symmetric lambda block.
    mat.set_block(0, 0, &random_symmetric(m - 1, bound, rng));
    // Boundary rows of the skew form must vanish: lower-left = upper-right^t.
    let a = random_matrix(m - 1, 2 * g, bound, rng);
    mat.set_block(0, m - 1, &a);
    mat.set_block(m - 1, 0, &a.transpose());
    // Genus block: symmetric part free, skew part equal to the standard form.
    let mut c = random_symmetric(2 * g, bound, rng);
    for k in 0..g {
        let bump = c.entry(2 * k, 2 * k + 1) + BigInt::one();
        c.set(2 * k + 1, 2 * k, bump);
    }
    mat.set_block(m - 1, m - 1, &c);
    let osm = OrderedSeifertMatrix::new(m, g, mat).expect("consistent dimensions");
    debug_assert!(osm.is_strictly_valid());
    // Mix with a random strong congruence; strict validity is preserved.
    let w = random_strong_congruence(m, g, 4, bound, rng);
    crate::moves::apply_strong_congruence(&osm, &w).expect("generated congruence applies")
}
