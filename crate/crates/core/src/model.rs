//! Domain types shared by every stage of the pipeline.
//!
//! Everything here is an immutable value type. Raw string maps are turned
//! into [`ModificationRecord`]s by [`validate_record`], which reports the
//! first offending field as a structured [`RecordError`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One-letter codes accepted for residues: the 20 standard amino acids plus `X`.
pub const RESIDUE_CODES: &str = "ACDEFGHIKLMNPQRSTVWYX";

/// Canonical column names of a modification table, in canonical order.
pub const RECORD_FIELDS: [&str; 6] = [
    "accession",
    "position",
    "residue",
    "mod_type",
    "classification",
    "is_mutation",
];

pub fn is_residue_code(c: char) -> bool {
    RESIDUE_CODES.contains(c)
}

/// A single modification event on one residue of one protein.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModificationRecord {
    pub accession: String,
    /// 1-based index into the protein sequence.
    pub position: u32,
    pub residue: char,
    pub mod_type: String,
    pub classification: String,
    pub is_mutation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecordError {
    #[error("missing field `{field}`")]
    MissingField { field: String },
    #[error("field `{field}` is empty")]
    EmptyValue { field: String },
    #[error("bad position {value:?}: expected an integer >= 1")]
    BadPosition { value: String },
    #[error("bad residue {value:?}: expected one of {RESIDUE_CODES}")]
    BadResidue { value: String },
    #[error("bad mutation flag {value:?}: expected true/false")]
    BadMutationFlag { value: String },
}

impl RecordError {
    /// Name of the field the error refers to.
    pub fn field(&self) -> &str {
        match self {
            RecordError::MissingField { field } | RecordError::EmptyValue { field } => field,
            RecordError::BadPosition { .. } => "position",
            RecordError::BadResidue { .. } => "residue",
            RecordError::BadMutationFlag { .. } => "is_mutation",
        }
    }
}

/// Validates a raw field map into a typed record.
///
/// Fields are checked in canonical column order and the first failure is
/// returned, so every input yields either a record or exactly one error.
pub fn validate_record(raw: &HashMap<String, String>) -> Result<ModificationRecord, RecordError> {
    validate_fields(|name| raw.get(name).map(String::as_str))
}

/// Same as [`validate_record`] but reads fields through a lookup closure, so
/// table parsers can validate rows without building an intermediate map.
pub fn validate_fields<'a, F>(get: F) -> Result<ModificationRecord, RecordError>
where
    F: Fn(&str) -> Option<&'a str>,
{
    let field = |name: &str| -> Result<&'a str, RecordError> {
        let value = get(name)
            .ok_or_else(|| RecordError::MissingField {
                field: name.to_string(),
            })?
            .trim();
        if value.is_empty() {
            return Err(RecordError::EmptyValue {
                field: name.to_string(),
            });
        }
        Ok(value)
    };

    let accession = field("accession")?;
    let position_raw = field("position")?;
    let position = match position_raw.parse::<u32>() {
        Ok(p) if p >= 1 => p,
        _ => {
            return Err(RecordError::BadPosition {
                value: position_raw.to_string(),
            });
        }
    };
    let residue_raw = field("residue")?;
    let residue = parse_residue(residue_raw).ok_or_else(|| RecordError::BadResidue {
        value: residue_raw.to_string(),
    })?;
    let mod_type = field("mod_type")?;
    let classification = field("classification")?;
    let flag_raw = field("is_mutation")?;
    let is_mutation = parse_flag(flag_raw).ok_or_else(|| RecordError::BadMutationFlag {
        value: flag_raw.to_string(),
    })?;

    Ok(ModificationRecord {
        accession: accession.to_string(),
        position,
        residue,
        mod_type: mod_type.to_string(),
        classification: classification.to_string(),
        is_mutation,
    })
}

fn parse_residue(raw: &str) -> Option<char> {
    let mut chars = raw.chars();
    let c = chars.next()?.to_ascii_uppercase();
    if chars.next().is_some() || !is_residue_code(c) {
        return None;
    }
    Some(c)
}

fn parse_flag(raw: &str) -> Option<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "t" | "yes" | "y" | "1" => Some(true),
        "false" | "f" | "no" | "n" | "0" => Some(false),
        _ => None,
    }
}

/// A protein and its primary sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProteinEntry {
    pub accession: String,
    pub name: String,
    pub species: String,
    pub sequence: String,
}

impl ProteinEntry {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Residue letter at a 1-based position.
    pub fn residue_at(&self, position: u32) -> Option<char> {
        let idx = (position as usize).checked_sub(1)?;
        self.sequence.as_bytes().get(idx).map(|&b| b as char)
    }

    /// Checks records against this sequence. Records are never dropped here;
    /// out-of-range positions and residue mismatches are collected as issues.
    pub fn check_records<'a, I>(&self, records: I) -> Vec<JoinIssue>
    where
        I: IntoIterator<Item = (usize, &'a ModificationRecord)>,
    {
        let mut issues = Vec::new();
        for (index, record) in records {
            match self.residue_at(record.position) {
                None => issues.push(JoinIssue::PositionOutOfRange {
                    record_index: index,
                    position: record.position,
                    length: self.len(),
                }),
                Some(expected) if expected != record.residue => issues.push(JoinIssue::ResidueMismatch {
                    record_index: index,
                    position: record.position,
                    expected,
                    found: record.residue,
                }),
                Some(_) => {}
            }
        }
        issues
    }
}

/// Problem found when joining a record to its protein sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JoinIssue {
    PositionOutOfRange {
        record_index: usize,
        position: u32,
        length: usize,
    },
    ResidueMismatch {
        record_index: usize,
        position: u32,
        expected: char,
        found: char,
    },
}

/// A table row that failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedRow {
    /// 1-based line number in the source text.
    pub line: u64,
    pub error: RecordError,
}

/// Everything a parse or join step chose not to treat as fatal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rejected: Vec<RejectedRow>,
    pub unknown_columns: Vec<String>,
    pub join_issues: Vec<JoinIssue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.rejected.is_empty() && self.unknown_columns.is_empty() && self.join_issues.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.rejected.extend(other.rejected);
        for col in other.unknown_columns {
            if !self.unknown_columns.contains(&col) {
                self.unknown_columns.push(col);
            }
        }
        self.join_issues.extend(other.join_issues);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("duplicate row label {0:?}")]
    DuplicateLabel(String),
    #[error("expected {expected} counts, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Rows are categories, columns are sequence positions (column `c` is position `c + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupancyMatrix {
    row_labels: Vec<String>,
    len: usize,
    counts: Vec<u32>,
}

impl OccupancyMatrix {
    pub fn new(row_labels: Vec<String>, len: usize, counts: Vec<u32>) -> Result<Self, MatrixError> {
        let mut seen = std::collections::HashSet::new();
        for label in &row_labels {
            if !seen.insert(label.as_str()) {
                return Err(MatrixError::DuplicateLabel(label.clone()));
            }
        }
        let expected = row_labels.len() * len;
        if counts.len() != expected {
            return Err(MatrixError::DimensionMismatch {
                expected,
                actual: counts.len(),
            });
        }
        Ok(Self {
            row_labels,
            len,
            counts,
        })
    }

    pub fn from_rows(rows: Vec<(String, Vec<u32>)>, len: usize) -> Result<Self, MatrixError> {
        let mut labels = Vec::with_capacity(rows.len());
        let mut counts = Vec::with_capacity(rows.len() * len);
        for (label, row) in rows {
            if row.len() != len {
                return Err(MatrixError::DimensionMismatch {
                    expected: len,
                    actual: row.len(),
                });
            }
            labels.push(label);
            counts.extend(row);
        }
        Self::new(labels, len, counts)
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    /// Sequence length (number of columns).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.row_labels.is_empty()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.counts[r * self.len..(r + 1) * self.len]
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.counts[r * self.len + c]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.n_rows()).map(|r| self.get(r, c)).collect()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n_rows())
            .map(|r| self.row(r).iter().map(|&v| v as u64).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.len];
        for r in 0..self.n_rows() {
            for (s, &v) in sums.iter_mut().zip(self.row(r)) {
                *s += v as u64;
            }
        }
        sums
    }
}

/// Hot-spot category of a per-residue modification count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HotspotBin {
    /// No modification.
    None,
    /// 1 to 10 modifications.
    Low,
    /// 11 or more.
    High,
}

impl HotspotBin {
    pub const LOW_MIN: u32 = 1;
    pub const HIGH_MIN: u32 = 11;

    pub fn from_count(count: u32) -> Self {
        if count >= Self::HIGH_MIN {
            HotspotBin::High
        } else if count >= Self::LOW_MIN {
            HotspotBin::Low
        } else {
            HotspotBin::None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window start must be >= 1")]
    StartBelowOne,
    #[error("window end {end} precedes start {start}")]
    Inverted { start: u32, end: u32 },
    #[error("cannot parse window {0:?}: expected START:END")]
    Syntax(String),
}

/// Inclusive range of sequence positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    start: u32,
    end: u32,
}

impl Window {
    pub fn new(start: u32, end: u32) -> Result<Self, WindowError> {
        if start < 1 {
            return Err(WindowError::StartBelowOne);
        }
        if end < start {
            return Err(WindowError::Inverted { start, end });
        }
        Ok(Self { start, end })
    }

    /// Window spanning a whole sequence of length `len` (`len >= 1`).
    pub fn full(len: usize) -> Self {
        Self {
            start: 1,
            end: (len as u32).max(1),
        }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.end
    }

    pub fn width(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn contains(&self, position: u32) -> bool {
        self.start <= position && position <= self.end
    }

    /// `end <- min(end, len)`, then `start <- min(start, end)`.
    pub fn clamp(self, len: usize) -> Self {
        let len = (len as u32).max(1);
        let end = self.end.min(len);
        let start = self.start.min(end);
        Self { start, end }
    }

    pub fn fits(&self, len: usize) -> bool {
        (self.end as usize) <= len
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl std::str::FromStr for Window {
    type Err = WindowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| WindowError::Syntax(s.to_string()))?;
        let start = a.trim().parse().map_err(|_| WindowError::Syntax(s.to_string()))?;
        let end = b.trim().parse().map_err(|_| WindowError::Syntax(s.to_string()))?;
        Window::new(start, end)
    }
}
