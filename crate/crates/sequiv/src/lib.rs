//! Exact integer calculus for S-equivalence of ordered Seifert matrices:
//! matrix moves, equivalence invariants, sequence normalization, symplectic
//! change-of-basis factorization, and a bounded bidirectional witness search.

pub mod error;
pub mod factorize;
pub mod generators;
pub mod invariants;
pub mod io;
pub mod laurent;
pub mod matrix;
pub mod moves;
pub mod normalize;
pub mod sample;
pub mod search;
pub mod seifert;

pub use error::{Error, Result};
pub use invariants::InvariantFingerprint;
pub use laurent::LaurentPoly;
pub use matrix::IntMatrix;
pub use moves::{EnlargeForm, Move, MoveSequence};
pub use search::{SearchConfig, SearchMode, SearchOutcome};
pub use seifert::{LinkingTable, OrderedSeifertMatrix, ValidationMode, ValidationReport};
