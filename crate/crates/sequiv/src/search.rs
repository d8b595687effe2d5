//! Bounded decision procedure for S-equivalence of two matrices: an
//! invariant pre-filter that can definitively distinguish, then a
//! deterministic bidirectional breadth-first search over generated moves
//! with meeting detection via canonical matrix keys.
//!
//! Each side explores up to `max_depth` levels. Children of the final level
//! on each side are streamed against the opposite visited set instead of
//! being stored, so any witness of combined length up to
//! `2 * max_depth - 1` is guaranteed to be found within the node budget;
//! enlarging the bounds only grows the explored sets.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators;
use crate::invariants::{self, differing_parts};
use crate::matrix::IntMatrix;
use crate::moves::{
    self, apply_moves_classical, apply_sequence, trailing_enlargement, EnlargeForm, Move,
    MoveSequence,
};
use crate::seifert::OrderedSeifertMatrix;

pub const DEFAULT_MAX_NODES: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    Strong,
    Classical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Levels explored per side.
    pub max_depth: usize,
    /// Absolute bound on entries of generated congruence generators and
    /// enlargement data.
    pub entry_bound: i64,
    /// Strong mode: cap on the genus during search. Classical mode: number
    /// of enlargement pairs allowed above the larger input dimension.
    pub max_genus: usize,
    pub mode: SearchMode,
    /// Determinism anchor, echoed in reports. The search itself is fully
    /// deterministic: moves are generated in a fixed canonical order.
    pub seed: u64,
    /// Safety budget on generated states; exceeding it yields Inconclusive.
    pub max_nodes: usize,
}

impl SearchConfig {
    pub fn strong(max_depth: usize, entry_bound: i64, max_genus: usize, seed: u64) -> Self {
        SearchConfig {
            max_depth,
            entry_bound,
            max_genus,
            mode: SearchMode::Strong,
            seed,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }

    pub fn classical(max_depth: usize, entry_bound: i64, max_genus: usize, seed: u64) -> Self {
        SearchConfig {
            mode: SearchMode::Classical,
            ..SearchConfig::strong(max_depth, entry_bound, max_genus, seed)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundHit {
    Depth,
    Nodes,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_generated: usize,
    pub nodes_expanded: usize,
    pub frontier_forward: usize,
    pub frontier_backward: usize,
    pub visited_forward: usize,
    pub visited_backward: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A witness replaying exactly from the first matrix to the second,
    /// meeting at `meeting`. `verified` records the replay check performed
    /// before returning.
    Equivalent {
        witness: Vec<Move>,
        meeting: IntMatrix,
        verified: bool,
        stats: SearchStats,
    },
    /// The named invariant differs; no move sequence of any length can
    /// connect the matrices. `left` and `right` are the rendered values of
    /// the differing invariant for the two inputs.
    Distinguished {
        invariant: String,
        left: String,
        right: String,
        stats: SearchStats,
    },
    Inconclusive {
        stats: SearchStats,
        bound_hit: BoundHit,
    },
}

impl SearchOutcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            SearchOutcome::Equivalent { .. } => 0,
            SearchOutcome::Distinguished { .. } => 2,
            SearchOutcome::Inconclusive { .. } => 3,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Equivalent { stats, .. }
            | SearchOutcome::Distinguished { stats, .. }
            | SearchOutcome::Inconclusive { stats, .. } => stats,
        }
    }
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Equivalent { witness, verified, .. } => write!(
                f,
                "equivalent: witness of {} moves, replay check = {}",
                witness.len(),
                if *verified { "pass" } else { "FAIL" }
            ),
            SearchOutcome::Distinguished {
                invariant,
                left,
                right,
                ..
            } => {
                write!(f, "distinguished by invariant: {invariant} ({left} vs {right})")
            }
            SearchOutcome::Inconclusive { stats, bound_hit } => write!(
                f,
                "inconclusive: {} nodes generated, {} expanded, bound hit = {:?}",
                stats.nodes_generated, stats.nodes_expanded, bound_hit
            ),
        }
    }
}

/// Rendered value of one fingerprint part, for distinguishing reports.
fn render_fingerprint_part(f: &crate::invariants::InvariantFingerprint, name: &str) -> String {
    match name {
        "linking" => {
            let vals: Vec<String> = f.linking.pairs().map(|(_, _, v)| v.to_string()).collect();
            format!("{{{}}}", vals.join(", "))
        }
        "conway" => f.conway_string(),
        "signature" => f.signature.to_string(),
        "determinant" => f.determinant.to_string(),
        _ => String::new(),
    }
}

/// Injective, platform-stable byte encoding of a matrix: big-endian
/// dimensions, then each entry as a sign byte plus a length-prefixed
/// big-endian magnitude.
pub fn canonical_key(m: &IntMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 6 * m.rows() * m.cols());
    out.extend((m.rows() as u32).to_be_bytes());
    out.extend((m.cols() as u32).to_be_bytes());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.entry(i, j);
            let sign = match e.sign() {
                Sign::NoSign => 0u8,
                Sign::Plus => 1,
                Sign::Minus => 2,
            };
            out.push(sign);
            if sign == 0 {
                out.extend(0u32.to_be_bytes());
            } else {
                let bytes = e.magnitude().to_bytes_be();
                out.extend((bytes.len() as u32).to_be_bytes());
                out.extend(bytes);
            }
        }
    }
    out
}

/// Lazy enumeration of bounded enlargement data `(x, y, z)` in a fixed
/// canonical order: `x` free, `y` sharing its first `shared` entries with
/// `x`, entries running `-bound..=bound`.
fn enlargement_data(
    n: usize,
    shared: usize,
    bound: i64,
) -> impl Iterator<Item = (Vec<BigInt>, Vec<BigInt>, BigInt)> {
    assert!(bound >= 0, "entry bound must be non-negative");
    let base = (2 * bound + 1) as u128;
    let free = n + (n - shared) + 1;
    let total = base.checked_pow(free as u32).unwrap_or(u128::MAX);
    (0..total).map(move |idx| {
        let mut digits = Vec::with_capacity(free);
        let mut rest = idx;
        for _ in 0..free {
            digits.push((rest % base) as i64 - bound);
            rest /= base;
        }
        let x: Vec<BigInt> = digits[..n].iter().map(|&d| BigInt::from(d)).collect();
        let mut y: Vec<BigInt> = x[..shared].to_vec();
        y.extend(digits[n..2 * n - shared].iter().map(|&d| BigInt::from(d)));
        let z = BigInt::from(digits[free - 1]);
        (x, y, z)
    })
}

/// One search domain: strong moves on ordered matrices or classical moves on
/// bare matrices.
trait Space {
    type State: Clone;

    fn key(&self, s: &Self::State) -> Vec<u8>;

    /// Children via forward moves, in a fixed canonical order.
    fn successors<'a>(&'a self, s: &'a Self::State)
        -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a>;

    /// Predecessors: pairs `(mv, u)` with `apply(u, mv) = s`, in a fixed
    /// canonical order.
    fn predecessors<'a>(
        &'a self,
        s: &'a Self::State,
    ) -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a>;
}

struct StrongSpace {
    entry_bound: i64,
    max_genus: usize,
}

impl Space for StrongSpace {
    type State = OrderedSeifertMatrix;

    fn key(&self, s: &Self::State) -> Vec<u8> {
        canonical_key(s.matrix())
    }

    fn successors<'a>(
        &'a self,
        s: &'a Self::State,
    ) -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a> {
        let m = s.components();
        let g = s.genus();
        let congruences = generators::strong_congruence_generators(m, g, self.entry_bound)
            .into_iter()
            .map(move |a| {
                let child = moves::apply_strong_congruence(s, &a).expect("generator applies");
                (Move::StrongCongruence(a), child)
            });
        let reduce = moves::reduce(s).ok().map(|r| (Move::Reduce, r));
        let enlarges = if g < self.max_genus {
            Some(
                [EnlargeForm::A, EnlargeForm::B].into_iter().flat_map(move |form| {
                    enlargement_data(s.dim(), m - 1, self.entry_bound).map(move |(x, y, z)| {
                        let child = moves::enlarge(s, form, &x, &y, &z)
                            .expect("bounded enlargement applies");
                        (Move::enlarge(form, x, y, z), child)
                    })
                }),
            )
        } else {
            None
        };
        Box::new(
            congruences
                .chain(reduce)
                .chain(enlarges.into_iter().flatten()),
        )
    }

    fn predecessors<'a>(
        &'a self,
        s: &'a Self::State,
    ) -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a> {
        let m = s.components();
        let g = s.genus();
        let congruences = generators::strong_congruence_generators(m, g, self.entry_bound)
            .into_iter()
            .map(move |a| {
                let inv = a.inverse_unimodular().expect("generators are unimodular");
                let pred = moves::apply_strong_congruence(s, &inv).expect("inverse applies");
                (Move::StrongCongruence(a), pred)
            });
        // Predecessor via a forward Enlarge: the reduction of `s`, with the
        // deleted data as the move.
        let enlarge_pred = moves::reduce(s).ok().map(|r| {
            let (form, x, y, z) =
                trailing_enlargement(s.matrix()).expect("reducible matrix has a trailing block");
            (Move::enlarge(form, x, y, z), r)
        });
        // Predecessors via a forward Reduce: every bounded enlargement of `s`.
        let reduce_preds = if g < self.max_genus {
            Some(
                [EnlargeForm::A, EnlargeForm::B].into_iter().flat_map(move |form| {
                    enlargement_data(s.dim(), m - 1, self.entry_bound).map(move |(x, y, z)| {
                        let pred = moves::enlarge(s, form, &x, &y, &z)
                            .expect("bounded enlargement applies");
                        (Move::Reduce, pred)
                    })
                }),
            )
        } else {
            None
        };
        Box::new(
            congruences
                .chain(enlarge_pred)
                .chain(reduce_preds.into_iter().flatten()),
        )
    }
}

struct ClassicalSpace {
    entry_bound: i64,
    max_dim: usize,
}

impl Space for ClassicalSpace {
    type State = IntMatrix;

    fn key(&self, s: &Self::State) -> Vec<u8> {
        canonical_key(s)
    }

    fn successors<'a>(
        &'a self,
        s: &'a Self::State,
    ) -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a> {
        let n = s.rows();
        let congruences = generators::classical_congruence_generators(n, self.entry_bound)
            .into_iter()
            .map(move |p| {
                let child = moves::apply_classical_congruence(s, &p).expect("generator applies");
                (Move::ClassicalCongruence(p), child)
            });
        let reduce = moves::reduce_matrix(s).ok().map(|r| (Move::Reduce, r));
        let enlarges = if n + 2 <= self.max_dim {
            Some(
                [EnlargeForm::A, EnlargeForm::B].into_iter().flat_map(move |form| {
                    enlargement_data(n, 0, self.entry_bound).map(move |(x, y, z)| {
                        let child = moves::enlarge_matrix(s, form, &x, &y, &z)
                            .expect("bounded enlargement applies");
                        (Move::enlarge(form, x, y, z), child)
                    })
                }),
            )
        } else {
            None
        };
        Box::new(
            congruences
                .chain(reduce)
                .chain(enlarges.into_iter().flatten()),
        )
    }

    fn predecessors<'a>(
        &'a self,
        s: &'a Self::State,
    ) -> Box<dyn Iterator<Item = (Move, Self::State)> + 'a> {
        let n = s.rows();
        let congruences = generators::classical_congruence_generators(n, self.entry_bound)
            .into_iter()
            .map(move |p| {
                let inv = p.inverse_unimodular().expect("generators are unimodular");
                let pred = moves::apply_classical_congruence(s, &inv).expect("inverse applies");
                (Move::ClassicalCongruence(p), pred)
            });
        let enlarge_pred = trailing_enlargement(s).map(|(form, x, y, z)| {
            let r = moves::reduce_matrix(s).expect("trailing pattern present");
            (Move::enlarge(form, x, y, z), r)
        });
        let reduce_preds = if n + 2 <= self.max_dim {
            Some(
                [EnlargeForm::A, EnlargeForm::B].into_iter().flat_map(move |form| {
                    enlargement_data(n, 0, self.entry_bound).map(move |(x, y, z)| {
                        let pred = moves::enlarge_matrix(s, form, &x, &y, &z)
                            .expect("bounded enlargement applies");
                        (Move::Reduce, pred)
                    })
                }),
            )
        } else {
            None
        };
        Box::new(
            congruences
                .chain(enlarge_pred)
                .chain(reduce_preds.into_iter().flatten()),
        )
    }
}

struct Record {
    parent: Option<Vec<u8>>,
    mv: Option<Move>,
}

struct SideData<S> {
    visited: HashMap<Vec<u8>, Record>,
    frontier: Vec<(Vec<u8>, S)>,
}

impl<S> SideData<S> {
    fn new(key: Vec<u8>, state: S) -> Self {
        let mut visited = HashMap::new();
        visited.insert(
            key.clone(),
            Record {
                parent: None,
                mv: None,
            },
        );
        SideData {
            visited,
            frontier: vec![(key, state)],
        }
    }
}

/// Moves from the root of the forward tree to `key`.
fn forward_path(visited: &HashMap<Vec<u8>, Record>, key: &[u8]) -> Vec<Move> {
    let mut path = Vec::new();
    let mut cursor = key.to_vec();
    loop {
        let rec = &visited[&cursor];
        match (&rec.parent, &rec.mv) {
            (Some(parent), Some(mv)) => {
                path.push(mv.clone());
                cursor = parent.clone();
            }
            _ => break,
        }
    }
    path.reverse();
    path
}

/// Moves from `key` to the root of the backward tree (each record's move
/// maps the node to its parent).
fn backward_path(visited: &HashMap<Vec<u8>, Record>, key: &[u8]) -> Vec<Move> {
    let mut path = Vec::new();
    let mut cursor = key.to_vec();
    loop {
        let rec = &visited[&cursor];
        match (&rec.parent, &rec.mv) {
            (Some(parent), Some(mv)) => {
                path.push(mv.clone());
                cursor = parent.clone();
            }
            _ => break,
        }
    }
    path
}

enum LevelEnd {
    Done,
    Budget,
    Meet { witness: Vec<Move>, meeting_key: Vec<u8> },
}

/// Witness moves and the canonical key of the meeting matrix.
type Meet = (Vec<Move>, Vec<u8>);

fn bidirectional<Sp: Space>(
    sp: &Sp,
    start_f: Sp::State,
    start_b: Sp::State,
    cfg: &SearchConfig,
) -> (Option<Meet>, SearchStats, BoundHit) {
    let mut stats = SearchStats::default();
    let kf = sp.key(&start_f);
    let kb = sp.key(&start_b);
    if kf == kb {
        return (Some((Vec::new(), kf)), stats, BoundHit::Depth);
    }
    let mut fwd = SideData::new(kf, start_f);
    let mut bwd = SideData::new(kb, start_b);

    for depth in 1..=cfg.max_depth {
        let store = depth < cfg.max_depth;
        for is_forward in [true, false] {
            let end = if is_forward {
                expand_level(sp, &mut fwd, &bwd, true, store, cfg, &mut stats)
            } else {
                expand_level(sp, &mut bwd, &fwd, false, store, cfg, &mut stats)
            };
            match end {
                LevelEnd::Done => {}
                LevelEnd::Budget => {
                    finish_stats(&mut stats, &fwd, &bwd);
                    return (None, stats, BoundHit::Nodes);
                }
                LevelEnd::Meet { witness, meeting_key } => {
                    finish_stats(&mut stats, &fwd, &bwd);
                    return (Some((witness, meeting_key)), stats, BoundHit::Depth);
                }
            }
        }
    }
    finish_stats(&mut stats, &fwd, &bwd);
    (None, stats, BoundHit::Depth)
}

fn finish_stats<S>(stats: &mut SearchStats, fwd: &SideData<S>, bwd: &SideData<S>) {
    stats.frontier_forward = fwd.frontier.len();
    stats.frontier_backward = bwd.frontier.len();
    stats.visited_forward = fwd.visited.len();
    stats.visited_backward = bwd.visited.len();
}

fn expand_level<Sp: Space>(
    sp: &Sp,
    own: &mut SideData<Sp::State>,
    other: &SideData<Sp::State>,
    is_forward: bool,
    store: bool,
    cfg: &SearchConfig,
    stats: &mut SearchStats,
) -> LevelEnd {
    let frontier = std::mem::take(&mut own.frontier);
    let mut next = Vec::new();
    for (node_key, state) in &frontier {
        stats.nodes_expanded += 1;
        let children: Box<dyn Iterator<Item = (Move, Sp::State)>> = if is_forward {
            sp.successors(state)
        } else {
            sp.predecessors(state)
        };
        for (mv, child) in children {
            stats.nodes_generated += 1;
            let child_key = sp.key(&child);
            if other.visited.contains_key(&child_key) {
                // Meeting: assemble the witness from both trees.
                let witness = if is_forward {
                    let mut w = forward_path(&own.visited, node_key);
                    w.push(mv);
                    w.extend(backward_path(&other.visited, &child_key));
                    w
                } else {
                    let mut w = forward_path(&other.visited, &child_key);
                    w.push(mv);
                    w.extend(backward_path(&own.visited, node_key));
                    w
                };
                return LevelEnd::Meet {
                    witness,
                    meeting_key: child_key,
                };
            }
            if store && !own.visited.contains_key(&child_key) {
                own.visited.insert(
                    child_key.clone(),
                    Record {
                        parent: Some(node_key.clone()),
                        mv: Some(mv),
                    },
                );
                next.push((child_key, child));
            }
            if stats.nodes_generated >= cfg.max_nodes {
                own.frontier = next;
                return LevelEnd::Budget;
            }
        }
    }
    own.frontier = next;
    LevelEnd::Done
}

/// Bounded Strong S-equivalence: invariant pre-filter, then bidirectional
/// search over strong moves. A `Distinguished` outcome is definitive; an
/// `Equivalent` outcome carries a witness that has been replayed before
/// returning.
pub fn strong_equiv_bounded(
    s1: &OrderedSeifertMatrix,
    s2: &OrderedSeifertMatrix,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    if s1.components() != s2.components() {
        return Err(Error::ComponentCountMismatch {
            left: s1.components(),
            right: s2.components(),
        });
    }
    let f1 = invariants::fingerprint(s1)?;
    let f2 = invariants::fingerprint(s2)?;
    let differing = differing_parts(&f1, &f2);
    if let Some(name) = differing.first() {
        return Ok(SearchOutcome::Distinguished {
            invariant: name.to_string(),
            left: render_fingerprint_part(&f1, name),
            right: render_fingerprint_part(&f2, name),
            stats: SearchStats::default(),
        });
    }
    // A max_genus below the starting genus would make the config unusable;
    // repair to the least legal value.
    let max_genus = cfg.max_genus.max(s1.genus()).max(s2.genus());
    let space = StrongSpace {
        entry_bound: cfg.entry_bound,
        max_genus,
    };
    let (meet, stats, bound_hit) = bidirectional(&space, s1.clone(), s2.clone(), cfg);
    match meet {
        Some((witness, meeting_key)) => {
            let seq = MoveSequence::new(s1.clone(), witness.clone());
            let (end, trace) = apply_sequence(&seq)?;
            if end != *s2 {
                return Err(Error::ReplayMismatch {
                    context: "witness does not replay to the target".to_string(),
                });
            }
            let meeting = trace
                .iter()
                .find(|m| canonical_key(m.matrix()) == meeting_key)
                .expect("meeting matrix occurs on the witness path")
                .matrix()
                .clone();
            Ok(SearchOutcome::Equivalent {
                witness,
                meeting,
                verified: true,
                stats,
            })
        }
        None => Ok(SearchOutcome::Inconclusive { stats, bound_hit }),
    }
}

/// Bounded classical S-equivalence on bare matrices: the pre-filter uses
/// only the classical invariants (Conway, signature, determinant), and the
/// move generators are unrestricted unimodular congruences plus classical
/// enlargements.
pub fn classical_equiv_bounded(
    v: &IntMatrix,
    w: &IntMatrix,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    for m in [v, w] {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    let stats0 = SearchStats::default();
    let (cv, cw) = (invariants::conway_of_matrix(v)?, invariants::conway_of_matrix(w)?);
    if cv != cw {
        return Ok(SearchOutcome::Distinguished {
            invariant: "conway".to_string(),
            left: invariants::render_z_poly(&cv),
            right: invariants::render_z_poly(&cw),
            stats: stats0,
        });
    }
    let (sv, sw) = (invariants::signature_of_matrix(v)?, invariants::signature_of_matrix(w)?);
    if sv != sw {
        return Ok(SearchOutcome::Distinguished {
            invariant: "signature".to_string(),
            left: sv.to_string(),
            right: sw.to_string(),
            stats: stats0,
        });
    }
    let (dv, dw) = (invariants::determinant_of_matrix(v)?, invariants::determinant_of_matrix(w)?);
    if dv != dw {
        return Ok(SearchOutcome::Distinguished {
            invariant: "determinant".to_string(),
            left: dv.to_string(),
            right: dw.to_string(),
            stats: stats0,
        });
    }
    let space = ClassicalSpace {
        entry_bound: cfg.entry_bound,
        max_dim: v.rows().max(w.rows()) + 2 * cfg.max_genus,
    };
    let (meet, stats, bound_hit) = bidirectional(&space, v.clone(), w.clone(), cfg);
    match meet {
        Some((witness, meeting_key)) => {
            let (end, trace) = apply_moves_classical(v, &witness)?;
            if end != *w {
                return Err(Error::ReplayMismatch {
                    context: "witness does not replay to the target".to_string(),
                });
            }
            let meeting = trace
                .iter()
                .find(|m| canonical_key(m) == meeting_key)
                .expect("meeting matrix occurs on the witness path")
                .clone();
            Ok(SearchOutcome::Equivalent {
                witness,
                meeting,
                verified: true,
                stats,
            })
        }
        None => Ok(SearchOutcome::Inconclusive { stats, bound_hit }),
    }
}
