use std::collections::BTreeMap;
use std::path::Path;

use modview::ingest::{parse_fasta, parse_modification_table, Dialect};
use modview::model::{JoinIssue, ModificationRecord, ProteinEntry, RejectedRow};
use modview::pipeline::group_by_accession;
use serde::Serialize;

use crate::output::{read_text, write_atomic, Failure};

/// One protein with the records that joined cleanly to its sequence.
#[derive(Debug, Clone)]
pub struct Protein {
    pub entry: ProteinEntry,
    pub records: Vec<ModificationRecord>,
}

/// Validation findings for one run. Join issue indices refer to the
/// accession's records in table order.
#[derive(Debug, Clone, Default, Serialize)]
pub struct InputReport {
    pub table: String,
    pub fasta: String,
    pub rejected: Vec<RejectedRow>,
    pub unknown_columns: Vec<String>,
    pub missing_sequences: Vec<String>,
    pub join_issues: BTreeMap<String, Vec<JoinIssue>>,
}

impl InputReport {
    /// Rejected rows, unknown accessions and out-of-range positions fail the
    /// run; residue mismatches and unknown columns are warnings.
    pub fn is_fatal(&self) -> bool {
        !self.rejected.is_empty()
            || !self.missing_sequences.is_empty()
            || self
                .join_issues
                .values()
                .flatten()
                .any(|i| matches!(i, JoinIssue::PositionOutOfRange { .. }))
    }

    pub fn warn(&self) {
        for r in &self.rejected {
            eprintln!("warning: {}:{}: {}", self.table, r.line, r.error);
        }
        for c in &self.unknown_columns {
            eprintln!("warning: {}: ignoring unknown column {c:?}", self.table);
        }
        for acc in &self.missing_sequences {
            eprintln!("warning: {acc}: no sequence in {}", self.fasta);
        }
        for (acc, issues) in &self.join_issues {
            for issue in issues {
                match issue {
                    JoinIssue::PositionOutOfRange { position, length, .. } => {
                        eprintln!("warning: {acc}: position {position} outside sequence of length {length}")
                    }
                    JoinIssue::ResidueMismatch {
                        position,
                        expected,
                        found,
                        ..
                    } => {
                        eprintln!(
                            "warning: {acc}: position {position} is {expected} in the sequence, {found} in the table"
                        )
                    }
                }
            }
        }
    }

    pub fn write(&self, out: &Path) -> Result<(), Failure> {
        let mut json = serde_json::to_string_pretty(self).expect("report serializes");
        json.push('\n');
        write_atomic(out, "validation.json", json.as_bytes()).map(|_| ())
    }
}

pub struct Inputs {
    /// Accessions with at least one record, sorted.
    pub proteins: Vec<Protein>,
    /// Every sequence in the FASTA file.
    pub entries: BTreeMap<String, ProteinEntry>,
    pub report: InputReport,
}

/// Reads and joins the table and the FASTA file. Only accessions present in
/// both are returned; records outside their sequence are dropped and reported.
pub fn load(table: &Path, fasta: &Path) -> Result<Inputs, Failure> {
    let table_text = read_text(table)?;
    let fasta_text = read_text(fasta)?;
    let (records, parsed) = parse_modification_table(&table_text, Dialect::from_path(table))
        .map_err(|e| Failure::validation(format!("{}: {e}", table.display())))?;
    let entries = parse_fasta(&fasta_text).map_err(|e| Failure::validation(format!("{}: {e}", fasta.display())))?;
    let entries: BTreeMap<String, ProteinEntry> = entries.into_iter().map(|e| (e.accession.clone(), e)).collect();

    let mut report = InputReport {
        table: table.display().to_string(),
        fasta: fasta.display().to_string(),
        rejected: parsed.rejected,
        unknown_columns: parsed.unknown_columns,
        ..InputReport::default()
    };
    let mut proteins = Vec::new();
    for (accession, records) in group_by_accession(&records) {
        let Some(entry) = entries.get(&accession) else {
            report.missing_sequences.push(accession);
            continue;
        };
        let issues = entry.check_records(records.iter().enumerate());
        let records = records
            .into_iter()
            .filter(|r| entry.residue_at(r.position).is_some())
            .collect();
        if !issues.is_empty() {
            report.join_issues.insert(accession.clone(), issues);
        }
        proteins.push(Protein {
            entry: entry.clone(),
            records,
        });
    }
    Ok(Inputs {
        proteins,
        entries,
        report,
    })
}
