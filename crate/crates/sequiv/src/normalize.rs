//! Constructive sequence rewriting: push every enlargement in front of every
//! reduction without changing the endpoints, then read off a common matrix
//! at the boundary between the growing prefix and the shrinking suffix.
//!
//! The two local rewrites are
//!
//! * reduce-then-enlarge -> enlarge, permutation congruence, reduce: the
//!   deleted block and the new block are stacked side by side and then the
//!   two trailing pairs of basis elements are exchanged;
//! * congruence-then-enlarge -> enlarge, congruence: the enlargement data is
//!   pulled back through the congruence and the congruence is re-applied as
//!   a block extension on the enlarged matrix.
//!
//! Every rewritten fragment is validated by replay; a fragment that fails to
//! replay is reported as an error rather than silently patched.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::moves::{
    self, apply_move, apply_sequence, Move, MoveSequence,
};
use crate::seifert::OrderedSeifertMatrix;

/// Coarse move classification used by the ordering algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Enlarge,
    Reduce,
    Congruence,
}

impl MoveKind {
    pub fn of(mv: &Move) -> MoveKind {
        match mv {
            Move::Enlarge { .. } => MoveKind::Enlarge,
            Move::Reduce => MoveKind::Reduce,
            Move::StrongCongruence(_) | Move::ClassicalCongruence(_) => MoveKind::Congruence,
        }
    }

    pub fn arrow(&self) -> char {
        match self {
            MoveKind::Enlarge => '↗',
            MoveKind::Reduce => '↘',
            MoveKind::Congruence => '≅',
        }
    }
}

/// A move sequence together with its replay snapshots (one per move, plus
/// the start). Construction replays the sequence, so the snapshots are
/// consistent by definition.
#[derive(Clone, PartialEq, Eq)]
pub struct AnnotatedSequence {
    seq: MoveSequence,
    snapshots: Vec<OrderedSeifertMatrix>,
}

impl AnnotatedSequence {
    pub fn new(seq: MoveSequence) -> Result<Self> {
        let (_, snapshots) = apply_sequence(&seq)?;
        Ok(AnnotatedSequence { seq, snapshots })
    }

    pub fn from_parts(start: OrderedSeifertMatrix, moves: Vec<Move>) -> Result<Self> {
        AnnotatedSequence::new(MoveSequence::new(start, moves))
    }

    pub fn sequence(&self) -> &MoveSequence {
        &self.seq
    }

    pub fn moves(&self) -> &[Move] {
        &self.seq.moves
    }

    pub fn start(&self) -> &OrderedSeifertMatrix {
        &self.seq.start
    }

    pub fn end(&self) -> &OrderedSeifertMatrix {
        self.snapshots.last().expect("snapshots include the start")
    }

    /// Snapshot after `i` moves; index 0 is the start.
    pub fn snapshot(&self, i: usize) -> &OrderedSeifertMatrix {
        &self.snapshots[i]
    }

    pub fn snapshots(&self) -> &[OrderedSeifertMatrix] {
        &self.snapshots
    }

    pub fn kinds(&self) -> Vec<MoveKind> {
        self.seq.moves.iter().map(MoveKind::of).collect()
    }

    pub fn kind_string(&self) -> String {
        self.kinds().iter().map(MoveKind::arrow).collect()
    }

    /// True iff no reduction occurs before a later enlargement.
    pub fn is_normalized(&self) -> bool {
        first_inversion(&self.kinds()).is_none()
    }

    pub fn enlarge_count(&self) -> usize {
        self.kinds().iter().filter(|k| **k == MoveKind::Enlarge).count()
    }

    pub fn reduce_count(&self) -> usize {
        self.kinds().iter().filter(|k| **k == MoveKind::Reduce).count()
    }
}

impl fmt::Debug for AnnotatedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AnnotatedSequence({} moves, kinds = {})",
            self.seq.moves.len(),
            self.kind_string()
        )
    }
}

/// First (reduce index, later enlarge index) pair, if any.
fn first_inversion(kinds: &[MoveKind]) -> Option<(usize, usize)> {
    let mut first_reduce: Option<usize> = None;
    for (i, k) in kinds.iter().enumerate() {
        match k {
            MoveKind::Reduce if first_reduce.is_none() => first_reduce = Some(i),
            MoveKind::Enlarge => {
                if let Some(r) = first_reduce {
                    return Some((r, i));
                }
            }
            _ => {}
        }
    }
    None
}

/// Number of (reduction, later enlargement) inversions; the termination
/// measure of the ordering algorithm.
pub fn inversion_count(kinds: &[MoveKind]) -> usize {
    let mut reduces = 0usize;
    let mut count = 0usize;
    for k in kinds {
        match k {
            MoveKind::Reduce => reduces += 1,
            MoveKind::Enlarge => count += reduces,
            MoveKind::Congruence => {}
        }
    }
    count
}

/// Rewrite a reduce-then-enlarge pair into enlarge, congruence, reduce.
///
/// `m1` is the matrix before the reduction; its trailing block is the data
/// deleted by the reduction. The new enlargement stacks the incoming
/// enlargement data (extended by two zeros) on top of `m1`, the congruence
/// exchanges the two trailing pairs of basis elements, and the final
/// reduction deletes the relocated original block. Works for all four form
/// combinations; correctness is checked by replay.
pub fn swap_reduce_enlarge(
    m1: &OrderedSeifertMatrix,
    reduce_mv: &Move,
    enlarge_mv: &Move,
) -> Result<(Move, Move, Move)> {
    if !matches!(reduce_mv, Move::Reduce) {
        return Err(Error::WrongMoveKind { expected: "reduce" });
    }
    let Move::Enlarge { form, x, y, z } = enlarge_mv else {
        return Err(Error::WrongMoveKind { expected: "enlarge" });
    };
    // Replay the original pair to know the target.
    let m2 = apply_move(m1, reduce_mv)?;
    let m3 = moves::enlarge(&m2, *form, x, y, z)?;

    let n = m2.dim();
    let mut x_ext = x.clone();
    let mut y_ext = y.clone();
    x_ext.extend([BigInt::zero(), BigInt::zero()]);
    y_ext.extend([BigInt::zero(), BigInt::zero()]);
    let e_prime = Move::enlarge(*form, x_ext, y_ext, z.clone());

    // Exchange basis pairs (n, n+1) <-> (n+2, n+3).
    let dim = n + 4;
    let mut images: Vec<usize> = (0..dim).collect();
    images.swap(n, n + 2);
    images.swap(n + 1, n + 3);
    let c_prime = Move::StrongCongruence(IntMatrix::permutation(&images));

    let m4 = apply_move(m1, &e_prime)?;
    let m5 = apply_move(&m4, &c_prime)?;
    let m3_again = apply_move(&m5, &Move::Reduce)?;
    if m3_again != m3 {
        return Err(Error::ReplayMismatch {
            context: "reduce/enlarge exchange".to_string(),
        });
    }
    Ok((e_prime, c_prime, Move::Reduce))
}

/// Rewrite a congruence-then-enlarge pair into enlarge-then-congruence.
///
/// If the congruence is by `P` and the enlargement data is `(x, y, z)`, the
/// new enlargement uses `x * P^-1` and `(P^-1)^t * y`, and the trailing
/// congruence is the block extension `(P 0; 0 I)`. The returned congruence
/// has the same flavor (strong or classical) as the input.
pub fn swap_congruence_enlarge(
    m1: &OrderedSeifertMatrix,
    congruence_mv: &Move,
    enlarge_mv: &Move,
) -> Result<(Move, Move)> {
    let p = congruence_mv
        .congruence_matrix()
        .ok_or(Error::WrongMoveKind {
            expected: "congruence",
        })?;
    let Move::Enlarge { form, x, y, z } = enlarge_mv else {
        return Err(Error::WrongMoveKind { expected: "enlarge" });
    };
    let m2 = apply_move(m1, congruence_mv)?;
    let m3 = moves::enlarge(&m2, *form, x, y, z)?;

    let p_inv = p.inverse_unimodular()?;
    let n = m1.dim();
    if x.len() != n {
        return Err(Error::VectorLengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    // Both vectors contract the first index of P^-1: x' = x * P^-1 (row
    // vector), y' = (P^-1)^t * y (column vector).
    let pull_back = |v: &[BigInt]| -> Vec<BigInt> {
        (0..n)
            .map(|j| (0..n).map(|k| &v[k] * p_inv.entry(k, j)).sum())
            .collect()
    };
    let e_prime = Move::enlarge(*form, pull_back(x), pull_back(y), z.clone());

    let q_mat = IntMatrix::block_diag(&[p, &IntMatrix::identity(2)]);
    let q = match congruence_mv {
        Move::StrongCongruence(_) => Move::StrongCongruence(q_mat),
        _ => Move::ClassicalCongruence(q_mat),
    };

    let m4 = apply_move(m1, &e_prime)?;
    let m3_again = apply_move(&m4, &q)?;
    if m3_again != m3 {
        return Err(Error::ReplayMismatch {
            context: "congruence/enlarge exchange".to_string(),
        });
    }
    Ok((e_prime, q))
}

/// Rewrite a sequence so that every enlargement precedes every reduction,
/// preserving both endpoints exactly and never increasing the number of
/// enlargements or reductions. Adjacent congruences in the result are fused
/// by matrix product.
pub fn normalize_sequence(input: &AnnotatedSequence) -> Result<AnnotatedSequence> {
    let start = input.start().clone();
    let mut moves: Vec<Move> = input.moves().to_vec();
    let mut inversions = inversion_count(&input.kinds());
    // Each pass clears every inversion involving the first offending
    // enlargement, so the measure strictly decreases.
    let mut guard = inversions + 1;
    loop {
        let kinds: Vec<MoveKind> = moves.iter().map(MoveKind::of).collect();
        let Some((_, mut t)) = first_inversion(&kinds) else {
            break;
        };
        if guard == 0 {
            return Err(Error::ReplayMismatch {
                context: "ordering failed to terminate".to_string(),
            });
        }
        guard -= 1;
        // Bubble the enlargement at `t` left until no reduction precedes it.
        while moves[..t]
            .iter()
            .any(|mv| MoveKind::of(mv) == MoveKind::Reduce)
        {
            let prev = t - 1;
            let before = snapshot_before(&start, &moves, prev)?;
            match MoveKind::of(&moves[prev]) {
                MoveKind::Congruence => {
                    let (e2, q) = swap_congruence_enlarge(&before, &moves[prev], &moves[t])?;
                    moves[prev] = e2;
                    moves[t] = q;
                }
                MoveKind::Reduce => {
                    let (e2, c2, r2) = swap_reduce_enlarge(&before, &moves[prev], &moves[t])?;
                    moves.splice(prev..=t, [e2, c2, r2]);
                }
                MoveKind::Enlarge => unreachable!("t is the first offending enlargement"),
            }
            t = prev;
        }
        let now = inversion_count(&moves.iter().map(MoveKind::of).collect::<Vec<_>>());
        debug_assert!(now < inversions, "inversion count must strictly decrease");
        inversions = now;
    }
    fuse_adjacent_congruences(&mut moves)?;

    let output = AnnotatedSequence::from_parts(start, moves)?;
    if output.end() != input.end() {
        return Err(Error::ReplayMismatch {
            context: "normalized sequence changed the final matrix".to_string(),
        });
    }
    if output.enlarge_count() != input.enlarge_count()
        || output.reduce_count() != input.reduce_count()
    {
        return Err(Error::ReplayMismatch {
            context: "normalized sequence changed move counts".to_string(),
        });
    }
    Ok(output)
}

fn snapshot_before(
    start: &OrderedSeifertMatrix,
    moves: &[Move],
    index: usize,
) -> Result<OrderedSeifertMatrix> {
    let mut current = start.clone();
    for (i, mv) in moves[..index].iter().enumerate() {
        current = apply_move(&current, mv).map_err(|e| e.at_move(i))?;
    }
    Ok(current)
}

/// Fuse runs of adjacent congruences into a single congruence by matrix
/// product (applying A then B is the congruence by A*B).
fn fuse_adjacent_congruences(moves: &mut Vec<Move>) -> Result<()> {
    let mut i = 0;
    while i + 1 < moves.len() {
        if moves[i].is_congruence() && moves[i + 1].is_congruence() {
            let a = moves[i].congruence_matrix().expect("congruence");
            let b = moves[i + 1].congruence_matrix().expect("congruence");
            let prod = a.mul(b)?;
            let fused = match (&moves[i], &moves[i + 1]) {
                (Move::StrongCongruence(_), Move::StrongCongruence(_)) => {
                    Move::StrongCongruence(prod)
                }
                _ => Move::ClassicalCongruence(prod),
            };
            moves.splice(i..=i + 1, [fused]);
        } else {
            i += 1;
        }
    }
    Ok(())
}

/// The snapshot at the boundary between the enlargement/congruence prefix
/// and the reduction/congruence suffix of a normalized sequence: the matrix
/// realizable from both endpoints.
pub fn common_matrix(seq: &AnnotatedSequence) -> Result<OrderedSeifertMatrix> {
    let kinds = seq.kinds();
    if let Some((r, e)) = first_inversion(&kinds) {
        return Err(Error::NotNormalized {
            reduce_index: r,
            enlarge_index: e,
        });
    }
    let boundary = kinds
        .iter()
        .position(|k| *k == MoveKind::Reduce)
        .unwrap_or(kinds.len());
    Ok(seq.snapshot(boundary).clone())
}
