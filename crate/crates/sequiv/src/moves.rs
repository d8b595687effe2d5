//! The S-equivalence rewriting alphabet: congruences (strong and classical),
//! the two enlargement forms, and reduction, with full precondition
//! enforcement and sequence replay.
//!
//! An enlargement appends two rows and columns to an `n x n` matrix `V`:
//!
//! ```text
//! A-form: (V    y^t  0)      B-form: (V    y^t  0)
//!         (x    z    1)              (x    z    0)
//!         (0    0    0)              (0    1    0)
//! ```
//!
//! Strong moves additionally require the first `m - 1` entries of `x` and
//! `y` to agree (boundary classes intersect nothing) and never reduce below
//! `(m-1) x (m-1)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::sample;
use crate::seifert::OrderedSeifertMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnlargeForm {
    /// Trailing pattern `(x z 1; 0 0 0)`: the 1 sits at the end of row n.
    A,
    /// Trailing pattern `(x z 0; 0 1 0)`: the 1 sits at the start of row n+1.
    B,
}

impl fmt::Display for EnlargeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnlargeForm::A => write!(f, "A"),
            EnlargeForm::B => write!(f, "B"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum Move {
    /// Congruence by a unimodular matrix of block shape `(I *; 0 *)`.
    StrongCongruence(IntMatrix),
    /// Congruence by an arbitrary unimodular matrix.
    ClassicalCongruence(IntMatrix),
    Enlarge {
        form: EnlargeForm,
        x: Vec<BigInt>,
        y: Vec<BigInt>,
        z: BigInt,
    },
    Reduce,
}

impl Move {
    pub fn enlarge(form: EnlargeForm, x: Vec<BigInt>, y: Vec<BigInt>, z: BigInt) -> Move {
        Move::Enlarge { form, x, y, z }
    }

    pub fn is_congruence(&self) -> bool {
        matches!(self, Move::StrongCongruence(_) | Move::ClassicalCongruence(_))
    }

    pub fn congruence_matrix(&self) -> Option<&IntMatrix> {
        match self {
            Move::StrongCongruence(a) | Move::ClassicalCongruence(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::StrongCongruence(a) => write!(f, "StrongCongruence({}x{})", a.rows(), a.cols()),
            Move::ClassicalCongruence(p) => {
                write!(f, "ClassicalCongruence({}x{})", p.rows(), p.cols())
            }
            Move::Enlarge { form, x, y, z } => {
                write!(f, "Enlarge({form}-form, x = {x:?}, y = {y:?}, z = {z})")
            }
            Move::Reduce => write!(f, "Reduce"),
        }
    }
}

/// A start matrix together with an ordered list of moves. Whether every move
/// is applicable is checked by replay ([`apply_sequence`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    pub start: OrderedSeifertMatrix,
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(start: OrderedSeifertMatrix, moves: Vec<Move>) -> Self {
        MoveSequence { start, moves }
    }
}

fn check_unimodular(a: &IntMatrix) -> Result<()> {
    let det = a.det()?;
    if det == BigInt::one() || det == -BigInt::one() {
        Ok(())
    } else {
        Err(Error::NotUnimodular { det })
    }
}

/// Block-shape test for a strong congruence: upper-left `(m-1) x (m-1)`
/// identity, lower-left zero.
fn is_block_shaped(a: &IntMatrix, boundary: usize) -> bool {
    let n = a.rows();
    for i in 0..boundary {
        for j in 0..boundary {
            let expect = BigInt::from(u8::from(i == j));
            if a.entry(i, j) != &expect {
                return false;
            }
        }
    }
    for i in boundary..n {
        for j in 0..boundary {
            if !a.entry(i, j).is_zero() {
                return false;
            }
        }
    }
    true
}

/// `A^t M A` for a unimodular block-shaped `A`; fixes the lambda block.
pub fn apply_strong_congruence(
    s: &OrderedSeifertMatrix,
    a: &IntMatrix,
) -> Result<OrderedSeifertMatrix> {
    let n = s.dim();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.rows(),
        });
    }
    check_unimodular(a)?;
    if !is_block_shaped(a, s.components() - 1) {
        return Err(Error::NotBlockShaped);
    }
    let conj = s.matrix().congruence(a)?;
    OrderedSeifertMatrix::new(s.components(), s.genus(), conj)
}

/// `P^t V P` for any unimodular `P`.
pub fn apply_classical_congruence(v: &IntMatrix, p: &IntMatrix) -> Result<IntMatrix> {
    if !v.is_square() {
        return Err(Error::NonSquare {
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    if p.rows() != v.rows() || p.cols() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: v.rows(),
            got: p.rows(),
        });
    }
    check_unimodular(p)?;
    v.congruence(p)
}

/// Raw enlargement pattern on a bare matrix; no boundary-prefix constraint.
pub fn enlarge_matrix(
    v: &IntMatrix,
    form: EnlargeForm,
    x: &[BigInt],
    y: &[BigInt],
    z: &BigInt,
) -> Result<IntMatrix> {
    let n = v.rows();
    if !v.is_square() {
        return Err(Error::NonSquare {
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    if x.len() != n {
        return Err(Error::VectorLengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if y.len() != n {
        return Err(Error::VectorLengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let mut w = IntMatrix::zeros(n + 2, n + 2);
    w.set_block(0, 0, v);
    for i in 0..n {
        w.set(i, n, y[i].clone());
        w.set(n, i, x[i].clone());
    }
    w.set(n, n, z.clone());
    match form {
        EnlargeForm::A => w.set(n, n + 1, BigInt::one()),
        EnlargeForm::B => w.set(n + 1, n, BigInt::one()),
    }
    Ok(w)
}

/// If the trailing two rows/columns of `w` match an enlargement pattern
/// exactly, return the deleted data `(form, x, y, z)`.
pub fn trailing_enlargement(w: &IntMatrix) -> Option<(EnlargeForm, Vec<BigInt>, Vec<BigInt>, BigInt)> {
    if !w.is_square() || w.rows() < 2 {
        return None;
    }
    let n = w.rows() - 2;
    let last_row_zero = (0..n + 2).all(|j| w.entry(n + 1, j).is_zero());
    let last_col_zero = (0..n + 2).all(|i| w.entry(i, n + 1).is_zero());
    let form = if last_row_zero
        && (0..n).all(|i| w.entry(i, n + 1).is_zero())
        && w.entry(n, n + 1).is_one()
    {
        EnlargeForm::A
    } else if last_col_zero
        && (0..n).all(|j| w.entry(n + 1, j).is_zero())
        && w.entry(n + 1, n).is_one()
    {
        EnlargeForm::B
    } else {
        return None;
    };
    let x = (0..n).map(|j| w.entry(n, j).clone()).collect();
    let y = (0..n).map(|i| w.entry(i, n).clone()).collect();
    Some((form, x, y, w.entry(n, n).clone()))
}

/// Raw reduction: delete the trailing enlargement block.
pub fn reduce_matrix(w: &IntMatrix) -> Result<IntMatrix> {
    if trailing_enlargement(w).is_none() {
        return Err(Error::PatternMismatch);
    }
    Ok(w.block(0, 0, w.rows() - 2, w.cols() - 2))
}

/// Strong enlargement: the first `m - 1` entries of `x` and `y` must agree.
/// The genus rises by one.
pub fn enlarge(
    s: &OrderedSeifertMatrix,
    form: EnlargeForm,
    x: &[BigInt],
    y: &[BigInt],
    z: &BigInt,
) -> Result<OrderedSeifertMatrix> {
    let n = s.dim();
    if x.len() != n {
        return Err(Error::VectorLengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if y.len() != n {
        return Err(Error::VectorLengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    for k in 0..s.components() - 1 {
        if x[k] != y[k] {
            return Err(Error::BoundaryEntriesDiffer { index: k });
        }
    }
    let w = enlarge_matrix(s.matrix(), form, x, y, z)?;
    OrderedSeifertMatrix::new(s.components(), s.genus() + 1, w)
}

/// Strong reduction: the trailing block must match an enlargement pattern
/// and the result may not shrink below `(m-1) x (m-1)`.
pub fn reduce(s: &OrderedSeifertMatrix) -> Result<OrderedSeifertMatrix> {
    if s.genus() == 0 {
        return Err(Error::SizeUnderflow {
            floor: s.components() - 1,
        });
    }
    let reduced = reduce_matrix(s.matrix())?;
    OrderedSeifertMatrix::new(s.components(), s.genus() - 1, reduced)
}

/// Apply one move with strong (ordered) semantics. Classical congruences are
/// accepted and act on the underlying matrix without the block-shape
/// restriction; they may destroy ordered structure.
pub fn apply_move(s: &OrderedSeifertMatrix, mv: &Move) -> Result<OrderedSeifertMatrix> {
    match mv {
        Move::StrongCongruence(a) => apply_strong_congruence(s, a),
        Move::ClassicalCongruence(p) => {
            let conj = apply_classical_congruence(s.matrix(), p)?;
            OrderedSeifertMatrix::new(s.components(), s.genus(), conj)
        }
        Move::Enlarge { form, x, y, z } => enlarge(s, *form, x, y, z),
        Move::Reduce => reduce(s),
    }
}

/// Apply one move with classical semantics on a bare matrix: congruences of
/// either flavor are plain congruences and enlargements carry no
/// boundary-prefix constraint.
pub fn apply_move_classical(v: &IntMatrix, mv: &Move) -> Result<IntMatrix> {
    match mv {
        Move::StrongCongruence(p) | Move::ClassicalCongruence(p) => {
            apply_classical_congruence(v, p)
        }
        Move::Enlarge { form, x, y, z } => enlarge_matrix(v, *form, x, y, z),
        Move::Reduce => reduce_matrix(v),
    }
}

/// Replay a sequence, returning the final matrix and every snapshot
/// (including the start, so the trace has `moves + 1` entries). The first
/// failing move's error is reported with its index.
pub fn apply_sequence(seq: &MoveSequence) -> Result<(OrderedSeifertMatrix, Vec<OrderedSeifertMatrix>)> {
    let mut trace = vec![seq.start.clone()];
    let mut current = seq.start.clone();
    for (index, mv) in seq.moves.iter().enumerate() {
        current = apply_move(&current, mv).map_err(|e| e.at_move(index))?;
        trace.push(current.clone());
    }
    Ok((current, trace))
}

/// Classical replay of a move list from a bare matrix.
pub fn apply_moves_classical(start: &IntMatrix, moves: &[Move]) -> Result<(IntMatrix, Vec<IntMatrix>)> {
    let mut trace = vec![start.clone()];
    let mut current = start.clone();
    for (index, mv) in moves.iter().enumerate() {
        current = apply_move_classical(&current, mv).map_err(|e| e.at_move(index))?;
        trace.push(current.clone());
    }
    Ok((current, trace))
}

/// Deterministic random strong sequence: every generated move is applicable
/// to the matrix produced by its predecessors; reductions are only emitted
/// when a trailing pattern exists.
pub fn random_sequence(
    start: &OrderedSeifertMatrix,
    length: usize,
    entry_bound: i64,
    seed: u64,
) -> MoveSequence {
    assert!(entry_bound >= 0, "entry bound must be non-negative");
    let mut rng = sample::rng(seed);
    let mut moves = Vec::with_capacity(length);
    let mut current = start.clone();
    for _ in 0..length {
        let m = current.components();
        let g = current.genus();
        let n = current.dim();
        let can_congruence = g >= 1;
        let can_reduce = g >= 1 && trailing_enlargement(current.matrix()).is_some();
        let mv = loop {
            match rng.gen_range(0..10) {
                0..=4 if can_congruence => {
                    let a = sample::random_strong_congruence(m, g, 2, entry_bound, &mut rng);
                    break Move::StrongCongruence(a);
                }
                5..=7 => {
                    let form = if rng.gen::<bool>() { EnlargeForm::A } else { EnlargeForm::B };
                    let x = sample::random_vec(n, entry_bound, &mut rng);
                    let mut y = sample::random_vec(n, entry_bound, &mut rng);
                    y[..m - 1].clone_from_slice(&x[..m - 1]);
                    break Move::enlarge(form, x, y, sample::random_int(entry_bound, &mut rng));
                }
                _ if can_reduce => break Move::Reduce,
                _ => continue,
            }
        };
        current = apply_move(&current, &mv).expect("generated move applies");
        moves.push(mv);
    }
    MoveSequence::new(start.clone(), moves)
}
