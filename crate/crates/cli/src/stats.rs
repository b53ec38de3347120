use std::path::Path;

use modview::analytics::{self, PatternGroup, ProteinSummary, RowKey};
use modview::exec;
use modview::model::ModificationRecord;
use serde::Serialize;

use crate::inputs::Protein;
use crate::output::{write_atomic, Failure};

#[derive(Debug, Serialize)]
pub struct StatsDocument {
    #[serde(flatten)]
    pub summary: ProteinSummary,
    pub name: String,
    pub species: String,
    pub max_residue: Option<char>,
    pub include_mutations_in_counts: bool,
    pub row_key: RowKey,
    pub repeated_patterns: Vec<PatternGroup>,
}

/// Records that count towards totals and bins.
pub fn counted(records: &[ModificationRecord], include_mutations: bool) -> Vec<ModificationRecord> {
    records
        .iter()
        .filter(|r| include_mutations || !r.is_mutation)
        .cloned()
        .collect()
}

pub fn stats_for(protein: &Protein, row_key: RowKey, include_mutations: bool) -> Result<StatsDocument, Failure> {
    let entry = &protein.entry;
    let records = counted(&protein.records, include_mutations);
    let fail = |e: &dyn std::fmt::Display| Failure::validation(e.to_string());
    let mut summary = analytics::summarize(&entry.accession, &records, entry.len()).map_err(|e| fail(&e))?;
    summary.mutation_sites = analytics::mutation_sites(&protein.records);
    let matrix = analytics::occupancy_matrix(&records, row_key, entry.len()).map_err(|e| fail(&e))?;
    let max_residue = (summary.stats.max_count > 0)
        .then(|| entry.residue_at(summary.stats.max_position))
        .flatten();
    Ok(StatsDocument {
        summary,
        name: entry.name.clone(),
        species: entry.species.clone(),
        max_residue,
        include_mutations_in_counts: include_mutations,
        row_key,
        repeated_patterns: analytics::find_repeated_patterns(&matrix),
    })
}

/// Writes `<ACC>.stats.json` for every protein. Returns the documents that
/// were written and the per-accession failures.
pub fn run(
    proteins: &[Protein],
    out: &Path,
    row_key: RowKey,
    include_mutations: bool,
) -> (Vec<StatsDocument>, Vec<(String, Failure)>) {
    let results = exec::map_coarse(proteins, |p| {
        let doc = stats_for(p, row_key, include_mutations)?;
        let mut json = serde_json::to_string_pretty(&doc).expect("stats serialize");
        json.push('\n');
        write_atomic(out, &format!("{}.stats.json", p.entry.accession), json.as_bytes())?;
        Ok(doc)
    });
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for (p, r) in proteins.iter().zip(results) {
        match r {
            Ok(doc) => docs.push(doc),
            Err(f) => failures.push((p.entry.accession.clone(), f)),
        }
    }
    (docs, failures)
}
