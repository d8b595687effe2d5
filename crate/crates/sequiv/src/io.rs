//! JSON interchange formats for matrices, moves, and reports, plus report
//! persistence. Integers are written as JSON numbers when they fit in 64
//! bits and as decimal strings otherwise, so documents stay hand-writable
//! while entries may be arbitrarily large.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::{self, InvariantFingerprint};
use crate::matrix::IntMatrix;
use crate::moves::{EnlargeForm, Move};
use crate::normalize::AnnotatedSequence;
use crate::search::{BoundHit, SearchConfig, SearchOutcome, SearchStats};
use crate::seifert::{OrderedSeifertMatrix, ValidationMode, ValidationReport};

/// Arbitrary-precision integer with the number-or-decimal-string JSON
/// encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocInt(pub BigInt);

impl From<BigInt> for DocInt {
    fn from(v: BigInt) -> Self {
        DocInt(v)
    }
}

impl Serialize for DocInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for DocInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = DocInt;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<DocInt, E> {
                Ok(DocInt(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<DocInt, E> {
                Ok(DocInt(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<DocInt, E> {
                v.parse::<BigInt>()
                    .map(DocInt)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }

        deserializer.deserialize_any(IntVisitor)
    }
}

fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<DocInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().cloned().map(DocInt).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<DocInt>]) -> Result<IntMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(Error::RaggedRows { row: i });
        }
    }
    IntMatrix::new(
        r,
        c,
        rows.iter()
            .flat_map(|row| row.iter().map(|d| d.0.clone()))
            .collect(),
    )
}

/// A matrix with its component count and genus tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub genus: Option<usize>,
    pub entries: Vec<Vec<DocInt>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn from_osm(s: &OrderedSeifertMatrix, label: Option<String>) -> Self {
        MatrixDocument {
            components: Some(s.components()),
            genus: Some(s.genus()),
            entries: matrix_to_rows(s.matrix()),
            label,
        }
    }

    pub fn from_matrix(m: &IntMatrix, label: Option<String>) -> Self {
        MatrixDocument {
            components: None,
            genus: None,
            entries: matrix_to_rows(m),
            label,
        }
    }

    /// The bare entries, shape-checked only.
    pub fn to_matrix(&self) -> Result<IntMatrix> {
        rows_to_matrix(&self.entries)
    }

    /// Build the ordered Seifert matrix and validate it in the given mode.
    pub fn to_osm(&self, mode: ValidationMode) -> Result<OrderedSeifertMatrix> {
        let m = self.components.ok_or_else(|| Error::Parse {
            message: "missing field `components`".to_string(),
        })?;
        let g = self.genus.ok_or_else(|| Error::Parse {
            message: "missing field `genus`".to_string(),
        })?;
        let matrix = self.to_matrix()?;
        let osm = OrderedSeifertMatrix::new(m, g, matrix)?;
        if mode == ValidationMode::Strict {
            osm.require_strictly_valid()?;
        }
        Ok(osm)
    }
}

/// Tagged move encoding mirroring [`Move`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MoveDocument {
    StrongCongruence {
        #[serde(rename = "A")]
        a: Vec<Vec<DocInt>>,
    },
    ClassicalCongruence {
        #[serde(rename = "P")]
        p: Vec<Vec<DocInt>>,
    },
    Enlarge {
        form: String,
        x: Vec<DocInt>,
        y: Vec<DocInt>,
        z: DocInt,
    },
    Reduce,
}

impl MoveDocument {
    pub fn from_move(mv: &Move) -> Self {
        match mv {
            Move::StrongCongruence(a) => MoveDocument::StrongCongruence {
                a: matrix_to_rows(a),
            },
            Move::ClassicalCongruence(p) => MoveDocument::ClassicalCongruence {
                p: matrix_to_rows(p),
            },
            Move::Enlarge { form, x, y, z } => MoveDocument::Enlarge {
                form: form.to_string(),
                x: x.iter().cloned().map(DocInt).collect(),
                y: y.iter().cloned().map(DocInt).collect(),
                z: DocInt(z.clone()),
            },
            Move::Reduce => MoveDocument::Reduce,
        }
    }

    pub fn to_move(&self) -> Result<Move> {
        Ok(match self {
            MoveDocument::StrongCongruence { a } => Move::StrongCongruence(rows_to_matrix(a)?),
            MoveDocument::ClassicalCongruence { p } => {
                Move::ClassicalCongruence(rows_to_matrix(p)?)
            }
            MoveDocument::Enlarge { form, x, y, z } => {
                let form = match form.as_str() {
                    "A" => EnlargeForm::A,
                    "B" => EnlargeForm::B,
                    other => {
                        return Err(Error::Parse {
                            message: format!("unknown enlargement form {other:?}"),
                        })
                    }
                };
                Move::Enlarge {
                    form,
                    x: x.iter().map(|d| d.0.clone()).collect(),
                    y: y.iter().map(|d| d.0.clone()).collect(),
                    z: z.0.clone(),
                }
            }
            MoveDocument::Reduce => Move::Reduce,
        })
    }
}

pub fn moves_to_documents(moves: &[Move]) -> Vec<MoveDocument> {
    moves.iter().map(MoveDocument::from_move).collect()
}

pub fn documents_to_moves(docs: &[MoveDocument]) -> Result<Vec<Move>> {
    docs.iter().map(MoveDocument::to_move).collect()
}

fn parse_error(err: &serde_json::Error) -> Error {
    Error::Parse {
        message: format!("line {}, column {}: {err}", err.line(), err.column()),
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(&e))
}

pub fn parse_matrix_document(text: &str) -> Result<MatrixDocument> {
    parse_json(text)
}

/// Parse and validate a matrix document into an ordered Seifert matrix.
pub fn parse_matrix(text: &str, mode: ValidationMode) -> Result<OrderedSeifertMatrix> {
    parse_matrix_document(text)?.to_osm(mode)
}

pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    documents_to_moves(&parse_json::<Vec<MoveDocument>>(text)?)
}

/// A batch catalog: either a bare array of matrix documents or an object
/// with a `matrices` field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatalogDocument {
    Bare(Vec<MatrixDocument>),
    Wrapped { matrices: Vec<MatrixDocument> },
}

impl CatalogDocument {
    pub fn matrices(&self) -> &[MatrixDocument] {
        match self {
            CatalogDocument::Bare(v) => v,
            CatalogDocument::Wrapped { matrices } => matrices,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDocument {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDocument {
    pub mode: String,
    pub valid: bool,
    pub checks: Vec<CheckDocument>,
}

impl ValidationDocument {
    pub fn from_report(report: &ValidationReport) -> Self {
        ValidationDocument {
            mode: match report.mode {
                ValidationMode::Strict => "strict".to_string(),
                ValidationMode::Classical => "classical".to_string(),
            },
            valid: report.all_passed(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckDocument {
                    name: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingEntry {
    pub i: usize,
    pub j: usize,
    pub lk: DocInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintDocument {
    pub components: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    pub linking: Vec<LinkingEntry>,
    /// Conway coefficients, low degree to high.
    pub conway: Vec<DocInt>,
    pub conway_string: String,
    pub signature: i64,
    pub determinant: DocInt,
    /// Canonical serialization used as a comparison/hash key.
    pub canonical: String,
}

impl FingerprintDocument {
    pub fn from_fingerprint(f: &InvariantFingerprint, label: Option<String>) -> Self {
        FingerprintDocument {
            components: f.linking.components(),
            label,
            linking: f
                .linking
                .pairs()
                .map(|(i, j, v)| LinkingEntry {
                    i,
                    j,
                    lk: DocInt(v.clone()),
                })
                .collect(),
            conway: f.conway.iter().cloned().map(DocInt).collect(),
            conway_string: f.conway_string(),
            signature: f.signature,
            determinant: DocInt(f.determinant.clone()),
            canonical: String::from_utf8(f.canonical_bytes()).expect("canonical bytes are ASCII"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplyDocument {
    pub result: MatrixDocument,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<MatrixDocument>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeDocument {
    pub moves: Vec<MoveDocument>,
    pub kinds: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub common: Option<MatrixDocument>,
}

impl NormalizeDocument {
    pub fn from_sequence(seq: &AnnotatedSequence, common: Option<&OrderedSeifertMatrix>) -> Self {
        NormalizeDocument {
            moves: moves_to_documents(seq.moves()),
            kinds: seq.kind_string(),
            common: common.map(|c| MatrixDocument::from_osm(c, None)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub i: usize,
    pub j: usize,
    pub exponent: DocInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDocument {
    pub components: usize,
    pub genus: usize,
    pub b_block: Vec<Vec<DocInt>>,
    pub s_block: Vec<Vec<DocInt>>,
    pub d: Vec<Vec<DocInt>>,
    pub e: Vec<Vec<DocInt>>,
    pub factors: Vec<FactorEntry>,
    pub stabilizes_x: bool,
}

impl FactorDocument {
    pub fn new(
        cb: &crate::factorize::ChangeOfBasis,
        d: &IntMatrix,
        e: &IntMatrix,
        factors: &[crate::factorize::ElementaryFactor],
        stabilizes: bool,
    ) -> Self {
        FactorDocument {
            components: cb.components(),
            genus: cb.genus(),
            b_block: matrix_to_rows(cb.b_block()),
            s_block: matrix_to_rows(cb.s_block()),
            d: matrix_to_rows(d),
            e: matrix_to_rows(e),
            factors: factors
                .iter()
                .map(|f| FactorEntry {
                    i: f.i,
                    j: f.j,
                    exponent: DocInt(f.exponent.clone()),
                })
                .collect(),
            stabilizes_x: stabilizes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReportDocument {
    pub mode: String,
    pub seed: u64,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant_left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant_right: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<MoveDocument>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meeting: Option<Vec<Vec<DocInt>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub replay_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_hit: Option<String>,
    pub stats: SearchStats,
    pub exit_code: i32,
}

/// The machine-readable search report; the human-readable side is the
/// outcome's `Display` plus this document's `human()` rendering.
pub fn search_report(outcome: &SearchOutcome, cfg: &SearchConfig) -> SearchReportDocument {
    let mode = match cfg.mode {
        crate::search::SearchMode::Strong => "strong",
        crate::search::SearchMode::Classical => "classical",
    };
    let mut doc = SearchReportDocument {
        mode: mode.to_string(),
        seed: cfg.seed,
        outcome: String::new(),
        invariant: None,
        invariant_left: None,
        invariant_right: None,
        witness: None,
        meeting: None,
        replay_verified: None,
        bound_hit: None,
        stats: *outcome.stats(),
        exit_code: outcome.exit_code(),
    };
    match outcome {
        SearchOutcome::Equivalent {
            witness,
            meeting,
            verified,
            ..
        } => {
            doc.outcome = "equivalent".to_string();
            doc.witness = Some(moves_to_documents(witness));
            doc.meeting = Some(matrix_to_rows(meeting));
            doc.replay_verified = Some(*verified);
        }
        SearchOutcome::Distinguished {
            invariant,
            left,
            right,
            ..
        } => {
            doc.outcome = "distinguished".to_string();
            doc.invariant = Some(invariant.clone());
            doc.invariant_left = Some(left.clone());
            doc.invariant_right = Some(right.clone());
        }
        SearchOutcome::Inconclusive { bound_hit, .. } => {
            doc.outcome = "inconclusive".to_string();
            doc.bound_hit = Some(
                match bound_hit {
                    BoundHit::Depth => "depth",
                    BoundHit::Nodes => "nodes",
                }
                .to_string(),
            );
        }
    }
    doc
}

impl SearchReportDocument {
    pub fn human(&self) -> String {
        let mut out = format!("mode: {}\noutcome: {}\n", self.mode, self.outcome);
        if let Some(inv) = &self.invariant {
            out.push_str(&format!("distinguished by: {inv}"));
            if let (Some(l), Some(r)) = (&self.invariant_left, &self.invariant_right) {
                out.push_str(&format!(" ({l} vs {r})"));
            }
            out.push('\n');
        }
        if let Some(witness) = &self.witness {
            out.push_str(&format!(
                "witness: {} moves, replay check = {}\n",
                witness.len(),
                match self.replay_verified {
                    Some(true) => "pass",
                    _ => "FAIL",
                }
            ));
        }
        if let Some(bound) = &self.bound_hit {
            out.push_str(&format!("bound hit: {bound}\n"));
        }
        out.push_str(&format!(
            "nodes generated: {}, expanded: {}, visited: {}+{}\n",
            self.stats.nodes_generated,
            self.stats.nodes_expanded,
            self.stats.visited_forward,
            self.stats.visited_backward
        ));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDistinction {
    pub left: usize,
    pub right: usize,
    pub differs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchDocument {
    pub fingerprints: Vec<FingerprintDocument>,
    /// One entry per unordered pair, listing the invariants that differ
    /// (empty means not distinguished).
    pub pairwise: Vec<PairDistinction>,
}

/// Fingerprint every catalog entry and compare all pairs with matching
/// component counts.
pub fn batch_fingerprints(catalog: &CatalogDocument) -> Result<BatchDocument> {
    let mut fingerprints = Vec::new();
    let mut parsed = Vec::new();
    for (idx, doc) in catalog.matrices().iter().enumerate() {
        let osm = doc.to_osm(ValidationMode::Strict).map_err(|e| Error::Parse {
            message: format!("catalog entry {idx}: {e}"),
        })?;
        let f = invariants::fingerprint(&osm)?;
        fingerprints.push(FingerprintDocument::from_fingerprint(&f, doc.label.clone()));
        parsed.push(f);
    }
    let mut pairwise = Vec::new();
    for i in 0..parsed.len() {
        for j in i + 1..parsed.len() {
            let differs = if parsed[i].linking.components() == parsed[j].linking.components() {
                invariants::differing_parts(&parsed[i], &parsed[j])
                    .into_iter()
                    .map(str::to_string)
                    .collect()
            } else {
                vec!["components".to_string()]
            };
            pairwise.push(PairDistinction {
                left: i,
                right: j,
                differs,
            });
        }
    }
    Ok(BatchDocument {
        fingerprints,
        pairwise,
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// Deterministic serialization to disk: the document is fully rendered
/// first and moved into place via a temporary file, so a failed write never
/// leaves a partial report.
pub fn persist_report<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = format!("{}\n", to_json_pretty(value));
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, &text).map_err(io_err)?;
    if let Err(e) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io_err(e));
    }
    Ok(())
}
