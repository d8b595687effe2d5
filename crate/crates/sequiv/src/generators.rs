//! Bounded generator sets for congruence moves: block-shaped transvections
//! for the strong calculus, symplectic transvections for the genus block,
//! and the full elementary set (transvections, sign flips, swaps) for
//! classical congruence. Enumeration order is fixed so that searches are
//! deterministic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix;

/// `I + c * e_{row, col}` (`row != col`).
pub fn transvection(n: usize, row: usize, col: usize, c: &BigInt) -> IntMatrix {
    assert!(row != col && row < n && col < n);
    let mut t = IntMatrix::identity(n);
    t.set(row, col, c.clone());
    t
}

/// Directions `v` for symplectic transvections: the standard basis vectors
/// and all pairwise sums/differences.
pub fn symplectic_directions(g: usize) -> Vec<Vec<BigInt>> {
    let n = 2 * g;
    let mut dirs = Vec::new();
    for k in 0..n {
        let mut v = vec![BigInt::zero(); n];
        v[k] = BigInt::one();
        dirs.push(v);
    }
    for k in 0..n {
        for l in k + 1..n {
            for sign in [1i64, -1] {
                let mut v = vec![BigInt::zero(); n];
                v[k] = BigInt::one();
                v[l] = BigInt::from(sign);
                dirs.push(v);
            }
        }
    }
    dirs
}

/// Symplectic transvection `I + c * v * (v^t * Sym)` for the standard
/// genus-`g` form; symplectic for every integer `c` because `v^t Sym v = 0`.
pub fn symplectic_transvection(g: usize, v: &[BigInt], c: &BigInt) -> IntMatrix {
    let n = 2 * g;
    assert_eq!(v.len(), n);
    let sym = IntMatrix::standard_sym(g);
    // w = v^t * Sym as a row vector.
    let w: Vec<BigInt> = (0..n)
        .map(|j| (0..n).map(|k| &v[k] * sym.entry(k, j)).sum())
        .collect();
    let mut t = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let add = c * &v[i] * &w[j];
            if !add.is_zero() {
                let cur = t.entry(i, j) + add;
                t.set(i, j, cur);
            }
        }
    }
    t
}

/// Lift a `2g x 2g` matrix to the block-diagonal strong congruence
/// `(I 0; 0 T)` on `m - 1 + 2g` coordinates.
pub fn lift_genus_block(m: usize, t: &IntMatrix) -> IntMatrix {
    let id = IntMatrix::identity(m - 1);
    IntMatrix::block_diag(&[&id, t])
}

/// Block transvection `I + c * e_{i, m-1+j}`: adds a boundary class to a
/// genus class, leaving the boundary prefix fixed.
pub fn block_transvection(m: usize, g: usize, i: usize, j: usize, c: &BigInt) -> IntMatrix {
    assert!(i < m - 1 && j < 2 * g);
    transvection(m - 1 + 2 * g, i, m - 1 + j, c)
}

/// Deterministic generator set for strong congruences at shape `(m, g)`:
/// all block transvections and lifted symplectic transvections with
/// coefficients `1..=bound` in both signs.
pub fn strong_congruence_generators(m: usize, g: usize, bound: i64) -> Vec<IntMatrix> {
    let mut gens = Vec::new();
    for i in 0..m - 1 {
        for j in 0..2 * g {
            for c in 1..=bound {
                gens.push(block_transvection(m, g, i, j, &BigInt::from(c)));
                gens.push(block_transvection(m, g, i, j, &BigInt::from(-c)));
            }
        }
    }
    for v in symplectic_directions(g) {
        for c in 1..=bound {
            gens.push(lift_genus_block(
                m,
                &symplectic_transvection(g, &v, &BigInt::from(c)),
            ));
            gens.push(lift_genus_block(
                m,
                &symplectic_transvection(g, &v, &BigInt::from(-c)),
            ));
        }
    }
    gens
}

/// Deterministic generator set for unrestricted unimodular congruences on
/// `n` coordinates: elementary transvections with coefficients up to
/// `bound`, sign flips, and transpositions.
pub fn classical_congruence_generators(n: usize, bound: i64) -> Vec<IntMatrix> {
    let mut gens = Vec::new();
    for row in 0..n {
        for col in 0..n {
            if row == col {
                continue;
            }
            for c in 1..=bound {
                gens.push(transvection(n, row, col, &BigInt::from(c)));
                gens.push(transvection(n, row, col, &BigInt::from(-c)));
            }
        }
    }
    for k in 0..n {
        let mut flip = IntMatrix::identity(n);
        flip.set(k, k, -BigInt::one());
        gens.push(flip);
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut images: Vec<usize> = (0..n).collect();
            images.swap(k, l);
            gens.push(IntMatrix::permutation(&images));
        }
    }
    gens
}
