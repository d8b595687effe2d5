//! Command-line front end: validation, invariants, move application,
//! sequence normalization, change-of-basis factorization, bounded
//! equivalence search, the built-in counterexample demo, and batch catalog
//! fingerprinting.
//!
//! Human-readable output goes to stdout by default; `--json` switches
//! stdout to machine-readable JSON. Errors go to stderr. Exit codes:
//! 0 success (search: equivalent), 1 error or failed validation,
//! 2 search distinguished, 3 search inconclusive.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sequiv::factorize;
use sequiv::invariants;
use sequiv::io::{
    self, ApplyDocument, CatalogDocument, FactorDocument, MatrixDocument, NormalizeDocument,
    ValidationDocument,
};
use sequiv::moves::{self, MoveSequence};
use sequiv::normalize::{common_matrix, normalize_sequence, AnnotatedSequence};
use sequiv::search::{classical_equiv_bounded, strong_equiv_bounded, SearchConfig, SearchOutcome};
use sequiv::seifert::ValidationMode;
use sequiv::osm;

#[derive(Parser)]
#[command(
    name = "sequiv",
    version,
    about = "Strong S-equivalence calculus on ordered Seifert matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Emit machine-readable JSON on stdout instead of human text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the ordered block structure of a matrix document.
    Validate {
        matrix: PathBuf,
        /// Check squareness only, ignoring ordered structure.
        #[arg(long)]
        classical: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Compute the invariant fingerprint: linking table, Conway polynomial,
    /// signature, determinant.
    Invariants {
        matrix: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Apply a move list to a matrix and print the result.
    Apply {
        matrix: PathBuf,
        moves: PathBuf,
        /// Include every intermediate snapshot.
        #[arg(long)]
        trace: bool,
        /// Replay with classical semantics (no ordered-structure checks).
        #[arg(long)]
        classical: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Rewrite a move sequence so every enlargement precedes every
    /// reduction.
    Normalize {
        matrix: PathBuf,
        moves: PathBuf,
        /// Also report the common matrix at the grow/shrink boundary.
        #[arg(long)]
        common: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Split a change-of-basis matrix into blocks and elementary factors.
    Factor {
        matrix: PathBuf,
        /// Component count (overrides the document).
        #[arg(long)]
        m: Option<usize>,
        /// Genus (overrides the document).
        #[arg(long)]
        g: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Bounded equivalence search between two matrices.
    Search {
        matrix_a: PathBuf,
        matrix_b: PathBuf,
        /// Levels explored per side.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Absolute bound on generated move entries.
        #[arg(long, default_value_t = 1)]
        bound: i64,
        /// Strong mode: genus cap. Classical mode: enlargement pairs above
        /// the larger input dimension.
        #[arg(long = "max-genus", default_value_t = 1)]
        max_genus: usize,
        /// Classical S-equivalence (unrestricted congruences).
        #[arg(long)]
        classical: bool,
        /// Determinism anchor echoed in reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the witness move list (JSON array) to this path.
        #[arg(long = "witness-out")]
        witness_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
    /// Fingerprint a catalog of matrices and compare all pairs.
    Batch {
        catalog: PathBuf,
        /// Persist the results document to this path.
        #[arg(long = "out")]
        out_file: Option<PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// The 3-component pair that is classically S-equivalent yet strongly
    /// distinguished by its linking numbers.
    Counterexample {
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_doc<T: serde::Serialize>(doc: &T, json: bool, human: impl FnOnce() -> String) {
    if json {
        println!("{}", io::to_json_pretty(doc));
    } else {
        print!("{}", human());
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Validate { matrix, classical, out } => {
            let text = read_file(&matrix)?;
            let mode = if classical { ValidationMode::Classical } else { ValidationMode::Strict };
            let doc = io::parse_matrix_document(&text).map_err(|e| e.to_string())?;
            let osm = doc.to_osm(ValidationMode::Classical).map_err(|e| e.to_string())?;
            let report = osm.validate(mode);
            let vdoc = ValidationDocument::from_report(&report);
            print_doc(&vdoc, out.json, || format!("{report}"));
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Invariants { matrix, out } => {
            let text = read_file(&matrix)?;
            let doc = io::parse_matrix_document(&text).map_err(|e| e.to_string())?;
            let osm = doc.to_osm(ValidationMode::Strict).map_err(|e| e.to_string())?;
            let f = invariants::fingerprint(&osm).map_err(|e| e.to_string())?;
            let fdoc = io::FingerprintDocument::from_fingerprint(&f, doc.label.clone());
            print_doc(&fdoc, out.json, || {
                let mut s = String::new();
                for (i, j, v) in f.linking.pairs() {
                    s.push_str(&format!("lk({i},{j}) = {v}\n"));
                }
                s.push_str(&format!("conway      = {}\n", f.conway_string()));
                s.push_str(&format!("signature   = {}\n", f.signature));
                s.push_str(&format!("determinant = {}\n", f.determinant));
                s
            });
            Ok(0)
        }
        Command::Apply { matrix, moves: moves_path, trace, classical, out } => {
            let mtext = read_file(&matrix)?;
            let moves = io::parse_moves(&read_file(&moves_path)?).map_err(|e| e.to_string())?;
            if classical {
                let doc = io::parse_matrix_document(&mtext).map_err(|e| e.to_string())?;
                let v = doc.to_matrix().map_err(|e| e.to_string())?;
                let (end, snapshots) =
                    moves::apply_moves_classical(&v, &moves).map_err(|e| e.to_string())?;
                let adoc = ApplyDocument {
                    result: MatrixDocument::from_matrix(&end, None),
                    trace: trace.then(|| {
                        snapshots.iter().map(|s| MatrixDocument::from_matrix(s, None)).collect()
                    }),
                };
                print_doc(&adoc, out.json, || {
                    let mut s = String::new();
                    if trace {
                        for (k, snap) in snapshots.iter().enumerate() {
                            s.push_str(&format!("step {k}:\n{snap}"));
                        }
                    } else {
                        s.push_str(&format!("{end}"));
                    }
                    s
                });
            } else {
                let start =
                    io::parse_matrix(&mtext, ValidationMode::Strict).map_err(|e| e.to_string())?;
                let seq = MoveSequence::new(start, moves);
                let (end, snapshots) = moves::apply_sequence(&seq).map_err(|e| e.to_string())?;
                let adoc = ApplyDocument {
                    result: MatrixDocument::from_osm(&end, None),
                    trace: trace.then(|| {
                        snapshots.iter().map(|s| MatrixDocument::from_osm(s, None)).collect()
                    }),
                };
                print_doc(&adoc, out.json, || {
                    let mut s = String::new();
                    if trace {
                        for (k, snap) in snapshots.iter().enumerate() {
                            s.push_str(&format!("step {k}:\n{snap}"));
                        }
                    } else {
                        s.push_str(&format!("{end}"));
                    }
                    s
                });
            }
            Ok(0)
        }
        Command::Normalize { matrix, moves: moves_path, common, out } => {
            let start = io::parse_matrix(&read_file(&matrix)?, ValidationMode::Strict)
                .map_err(|e| e.to_string())?;
            let moves = io::parse_moves(&read_file(&moves_path)?).map_err(|e| e.to_string())?;
            let seq = AnnotatedSequence::from_parts(start, moves).map_err(|e| e.to_string())?;
            let normalized = normalize_sequence(&seq).map_err(|e| e.to_string())?;
            let common_m = if common {
                Some(common_matrix(&normalized).map_err(|e| e.to_string())?)
            } else {
                None
            };
            let ndoc = NormalizeDocument::from_sequence(&normalized, common_m.as_ref());
            print_doc(&ndoc, out.json, || {
                let mut s = format!(
                    "kinds: {} -> {}\nmoves: {}\n",
                    seq.kind_string(),
                    normalized.kind_string(),
                    normalized.moves().len()
                );
                if let Some(c) = &common_m {
                    s.push_str(&format!("common matrix:\n{c}"));
                }
                s
            });
            Ok(0)
        }
        Command::Factor { matrix, m, g, out } => {
            let text = read_file(&matrix)?;
            let doc = io::parse_matrix_document(&text).map_err(|e| e.to_string())?;
            let m = m.or(doc.components).ok_or("component count required (--m or `components`)")?;
            let g = g.or(doc.genus).ok_or("genus required (--g or `genus`)")?;
            let c = doc.to_matrix().map_err(|e| e.to_string())?;
            let cb = factorize::split_blocks(&c, m, g).map_err(|e| e.to_string())?;
            let (d, e) = factorize::factor_de(&cb);
            let factors = factorize::elementary_factorization(&cb);
            let stabilizes = factorize::stabilizes_x(&c, m, g).map_err(|e| e.to_string())?;
            let fdoc = FactorDocument::new(&cb, &d, &e, &factors, stabilizes);
            print_doc(&fdoc, out.json, || {
                let mut s = format!(
                    "B block:\n{}S block (symplectic):\n{}D:\n{}E:\n{}",
                    cb.b_block(),
                    cb.s_block(),
                    d,
                    e
                );
                s.push_str("factors:");
                if factors.is_empty() {
                    s.push_str(" (none)\n");
                } else {
                    s.push('\n');
                    for f in &factors {
                        s.push_str(&format!("  {f}\n"));
                    }
                }
                s.push_str(&format!("stabilizes X: {stabilizes}\n"));
                s
            });
            Ok(0)
        }
        Command::Search {
            matrix_a,
            matrix_b,
            depth,
            bound,
            max_genus,
            classical,
            seed,
            witness_out,
            out,
        } => {
            let a_text = read_file(&matrix_a)?;
            let b_text = read_file(&matrix_b)?;
            let (outcome, cfg) = if classical {
                let cfg = SearchConfig::classical(depth, bound, max_genus, seed);
                let a = io::parse_matrix_document(&a_text)
                    .and_then(|d| d.to_matrix())
                    .map_err(|e| e.to_string())?;
                let b = io::parse_matrix_document(&b_text)
                    .and_then(|d| d.to_matrix())
                    .map_err(|e| e.to_string())?;
                (classical_equiv_bounded(&a, &b, &cfg).map_err(|e| e.to_string())?, cfg)
            } else {
                let cfg = SearchConfig::strong(depth, bound, max_genus, seed);
                let a = io::parse_matrix(&a_text, ValidationMode::Strict).map_err(|e| e.to_string())?;
                let b = io::parse_matrix(&b_text, ValidationMode::Strict).map_err(|e| e.to_string())?;
                (strong_equiv_bounded(&a, &b, &cfg).map_err(|e| e.to_string())?, cfg)
            };
            let report = io::search_report(&outcome, &cfg);
            if let Some(path) = witness_out {
                if let SearchOutcome::Equivalent { witness, .. } = &outcome {
                    io::persist_report(&io::moves_to_documents(witness), &path)
                        .map_err(|e| e.to_string())?;
                } else {
                    return Err("no witness to write: outcome is not equivalent".to_string());
                }
            }
            print_doc(&report, out.json, || report.human());
            Ok(outcome.exit_code() as u8)
        }
        Command::Demo { which } => match which {
            DemoCommand::Counterexample { out } => demo_counterexample(out.json),
        },
        Command::Batch { catalog, out_file, out } => {
            let catalog: CatalogDocument =
                io::parse_json(&read_file(&catalog)?).map_err(|e| e.to_string())?;
            let batch = io::batch_fingerprints(&catalog).map_err(|e| e.to_string())?;
            if let Some(path) = &out_file {
                io::persist_report(&batch, path).map_err(|e| e.to_string())?;
            }
            print_doc(&batch, out.json, || {
                let mut s = String::new();
                for (idx, f) in batch.fingerprints.iter().enumerate() {
                    let label = f.label.clone().unwrap_or_else(|| format!("#{idx}"));
                    s.push_str(&format!(
                        "{label}: conway = {}, signature = {}, determinant = {}\n",
                        f.conway_string, f.signature, f.determinant.0
                    ));
                }
                for p in &batch.pairwise {
                    let verdict = if p.differs.is_empty() {
                        "not distinguished".to_string()
                    } else {
                        format!("differs in {}", p.differs.join(", "))
                    };
                    s.push_str(&format!("({}, {}): {verdict}\n", p.left, p.right));
                }
                s
            });
            Ok(0)
        }
    }
}

/// Run the built-in 3-component counterexample end to end: the classical
/// search finds a congruence witness, while the strong calculus
/// distinguishes the pair by its pairwise linking numbers.
fn demo_counterexample(json: bool) -> Result<u8, String> {
    let m0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
    let m1 = osm!(3, 0, [[-1, 0], [0, 0]]);

    let classical_cfg = SearchConfig::classical(2, 1, 0, 0);
    let classical = classical_equiv_bounded(m1.matrix(), m0.matrix(), &classical_cfg)
        .map_err(|e| e.to_string())?;
    let strong_cfg = SearchConfig::strong(2, 1, 1, 0);
    let strong = strong_equiv_bounded(&m0, &m1, &strong_cfg).map_err(|e| e.to_string())?;

    let classical_ok = matches!(&classical, SearchOutcome::Equivalent { .. });
    let strong_ok =
        matches!(&strong, SearchOutcome::Distinguished { invariant, .. } if invariant == "linking");

    if json {
        let doc = serde_json::json!({
            "matrices": {
                "first": MatrixDocument::from_osm(&m0, Some("L0".to_string())),
                "second": MatrixDocument::from_osm(&m1, Some("L1".to_string())),
            },
            "classical": io::search_report(&classical, &classical_cfg),
            "strong": io::search_report(&strong, &strong_cfg),
            "as_expected": classical_ok && strong_ok,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("pair: [[-1,-1],[-1,-1]] and [[-1,0],[0,0]] with m = 3, g = 0");
        println!("classical search: {classical}");
        println!("strong search:    {strong}");
        let t0 = m0.linking_numbers().map_err(|e| e.to_string())?;
        let t1 = m1.linking_numbers().map_err(|e| e.to_string())?;
        println!(
            "linking tables:   {{{}, {}, {}}} vs {{{}, {}, {}}}",
            t0.get(1, 2),
            t0.get(1, 3),
            t0.get(2, 3),
            t1.get(1, 2),
            t1.get(1, 3),
            t1.get(2, 3)
        );
        println!(
            "verdict: classically S-equivalent, NOT strongly S-equivalent ({})",
            if classical_ok && strong_ok { "as expected" } else { "UNEXPECTED" }
        );
    }
    Ok(if classical_ok && strong_ok { 0 } else { 1 })
}
