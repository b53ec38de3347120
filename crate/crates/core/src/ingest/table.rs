//! Modification tables: CSV (canonical) or TSV with a header row naming the
//! six record columns in any order and any case.

use thiserror::Error;

use crate::model::{validate_fields, ModificationRecord, RejectedRow, ValidationReport, RECORD_FIELDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    #[default]
    Comma,
    Tab,
}

impl Dialect {
    fn delimiter(self) -> u8 {
        match self {
            Dialect::Comma => b',',
            Dialect::Tab => b'\t',
        }
    }

    /// Tab for `.tsv`/`.tab` paths, comma otherwise.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "tsv" || ext == "tab" => Dialect::Tab,
            _ => Dialect::Comma,
        }
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("modification table has no header row")]
    MissingHeader,
    #[error("header is missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("malformed table: {0}")]
    Csv(#[from] csv::Error),
}

/// Parses a modification table. Rows failing validation are reported, not fatal.
pub fn parse_modification_table(
    text: &str,
    dialect: Dialect,
) -> Result<(Vec<ModificationRecord>, ValidationReport), TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(dialect.delimiter())
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows = reader.records();
    let header = loop {
        match rows.next() {
            None => return Err(TableError::MissingHeader),
            Some(row) => {
                let row = row?;
                if row.iter().any(|f| !f.is_empty()) {
                    break row;
                }
            }
        }
    };

    let mut report = ValidationReport::default();
    let mut columns: [Option<usize>; 6] = [None; 6];
    for (idx, name) in header.iter().enumerate() {
        let name = name.trim_start_matches('\u{feff}').to_ascii_lowercase();
        match RECORD_FIELDS.iter().position(|f| *f == name) {
            Some(slot) if columns[slot].is_none() => columns[slot] = Some(idx),
            _ => report.unknown_columns.push(name),
        }
    }
    for (slot, col) in columns.iter().enumerate() {
        if col.is_none() {
            return Err(TableError::MissingColumn(RECORD_FIELDS[slot]));
        }
    }

    let mut records = Vec::new();
    for row in rows {
        let row = row?;
        if row.iter().all(str::is_empty) {
            continue;
        }
        let line = row.position().map(|p| p.line()).unwrap_or_default();
        let lookup = |name: &str| {
            let slot = RECORD_FIELDS.iter().position(|f| *f == name)?;
            row.get(columns[slot]?)
        };
        match validate_fields(lookup) {
            Ok(record) => records.push(record),
            Err(error) => report.rejected.push(RejectedRow { line, error }),
        }
    }
    Ok((records, report))
}

/// Writes records as a table with the canonical header and column order.
pub fn serialize_modification_table(records: &[ModificationRecord], dialect: Dialect) -> String {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(dialect.delimiter())
        .from_writer(Vec::new());
    // Writing into a Vec cannot fail.
    writer.write_record(RECORD_FIELDS).expect("in-memory write");
    for r in records {
        let position = r.position.to_string();
        let residue = r.residue.to_string();
        writer
            .write_record([
                r.accession.as_str(),
                position.as_str(),
                residue.as_str(),
                r.mod_type.as_str(),
                r.classification.as_str(),
                if r.is_mutation { "true" } else { "false" },
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
