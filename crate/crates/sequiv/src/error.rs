use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("row {row} has a different length from row 0")]
    RaggedRows { row: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: BigInt },

    #[error("congruence matrix does not have the required (I *; 0 *) block shape")]
    NotBlockShaped,

    #[error("component count must be at least 1")]
    InvalidComponentCount,

    #[error("vector length mismatch: expected {expected}, got {got}")]
    VectorLengthMismatch { expected: usize, got: usize },

    #[error("enlargement vectors differ at boundary index {index}")]
    BoundaryEntriesDiffer { index: usize },

    #[error("trailing rows/columns do not match an enlargement pattern")]
    PatternMismatch,

    #[error("reduction would shrink the matrix below {floor}x{floor}")]
    SizeUnderflow { floor: usize },

    #[error("matrix failed strict validation: {check}")]
    InvalidMatrix { check: String },

    #[error("move {index} failed: {source}")]
    MoveFailed { index: usize, source: Box<Error> },

    #[error("expected a {expected} move")]
    WrongMoveKind { expected: &'static str },

    #[error("sequence is not normalized: reduction at step {reduce_index} precedes enlargement at step {enlarge_index}")]
    NotNormalized {
        reduce_index: usize,
        enlarge_index: usize,
    },

    #[error("rewrite replay mismatch: {context}")]
    ReplayMismatch { context: String },

    #[error("Laurent determinant is not a polynomial in z = t - 1/t")]
    NotAConwayPolynomial,

    #[error("component counts differ: {left} vs {right}")]
    ComponentCountMismatch { left: usize, right: usize },

    #[error("change of basis is not in (I B; 0 S) block form: {detail}")]
    NotBlockForm { detail: String },

    #[error("lower-right block of the change of basis is not symplectic")]
    SNotSymplectic,

    #[error("parse error: {message}")]
    Parse { message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn at_move(self, index: usize) -> Error {
        Error::MoveFailed {
            index,
            source: Box::new(self),
        }
    }
}
