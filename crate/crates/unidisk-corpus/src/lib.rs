//! Worked-example corpus for linear fractional disk dynamics, with a replay
//! runner.
//!
//! The corpus is a JSON array of records. Each record has:
//!
//! ```json
//! {
//!   "id": "example_3_1",
//!   "note": "what the record demonstrates",
//!   "maps": {
//!     "f":   {"a": [-1, 0], "b": [1, 0], "c": [0, 0], "d": [2, 0]},
//!     "phi": {"a": [1, 0], "b": [1, 0], "c": [0, 0], "d": [2, 0]},
//!     "psi": "example_2_2_exp"
//!   },
//!   "expected": [ {"check": "...", ...}, ... ]
//! }
//! ```
//!
//! A map is either an inline coefficient quadruple (complex entries as
//! `[re, im]`) or the name of a bundled evaluator from [`registry`]. Points
//! of the sphere are `[re, im]` or `"inf"`. The `expected` list holds tagged
//! check objects; see [`record::Check`] for every variant and its fields.
//! [`runner::run`] replays records in order and reports measured values
//! beside expectations; failures are data in the report, never panics.

pub mod record;
pub mod registry;
pub mod runner;

use std::path::Path;

use thiserror::Error;

pub use record::{Check, ExampleRecord, MapSpec, PointSpec, Quad};
pub use runner::{run, run_record, CheckOutcome, RecordReport, Report};

/// Loader failures: I/O, schema violations, or unknown map names.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus file: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("record \"{record}\" references unknown registry map \"{name}\"")]
    UnknownMapName { record: String, name: String },
    #[error("record \"{record}\" check references missing map \"{name}\"")]
    MissingMap { record: String, name: String },
}

/// Parse records from JSON text; empty or whitespace-only text is an empty
/// corpus.
pub fn parse(text: &str) -> Result<Vec<ExampleRecord>, CorpusError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let records: Vec<ExampleRecord> =
        serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    validate(&records)?;
    Ok(records)
}

/// Load records from a file.
pub fn load(path: &Path) -> Result<Vec<ExampleRecord>, CorpusError> {
    parse(&std::fs::read_to_string(path)?)
}

fn validate(records: &[ExampleRecord]) -> Result<(), CorpusError> {
    for record in records {
        for spec in record.maps.values() {
            if let MapSpec::Named(name) = spec {
                if registry::lookup(name).is_none() {
                    return Err(CorpusError::UnknownMapName {
                        record: record.id.clone(),
                        name: name.clone(),
                    });
                }
            }
        }
        for check in &record.expected {
            for name in check.map_names() {
                if !record.maps.contains_key(name) {
                    return Err(CorpusError::MissingMap {
                        record: record.id.clone(),
                        name: name.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The corpus shipped with the crate.
pub fn bundled() -> Vec<ExampleRecord> {
    parse(include_str!("../data/corpus.json")).expect("bundled corpus is valid")
}
