use std::path::Path;

use modview::analytics;
use modview::exec;
use modview::ingest::manifest::{download_id, kind_for_id};
use modview::ingest::{
    parse_pdb_with, select_best_model, FetchError, Fetcher, Manifest, ManifestEntry, PdbOptions, SourceKind, Transport,
};
use modview::layout::HotspotColors;
use modview::render::{emit_3dmol_script, emit_structure_coloring};
use serde::Serialize;

use crate::inputs::Inputs;
use crate::output::{write_atomic, Failure};
use crate::stats::counted;

#[derive(Debug, Clone, Serialize)]
pub struct ColorSummary {
    pub accession: String,
    pub source_id: String,
    pub source_kind: SourceKind,
    pub resolution: Option<f64>,
    pub chain: char,
    pub residues: usize,
    pub unmatched: usize,
}

fn fetch_failure(e: FetchError) -> Failure {
    match e {
        FetchError::Io { .. } => Failure::io(e.to_string()),
        FetchError::InvalidId(_) => Failure::validation(e.to_string()),
        _ => Failure::fetch(e.to_string()),
    }
}

/// Colours one protein. A coloring is written whenever at least one
/// candidate loads; failed candidates are still reported.
fn color_one<T: Transport>(
    item: &ManifestEntry,
    inputs: &Inputs,
    fetcher: &Fetcher<T>,
    out: &Path,
    include_mutations: bool,
    colors: &HotspotColors,
) -> (Option<ColorSummary>, Vec<Failure>) {
    let acc = &item.accession;
    let Some(entry) = inputs.entries.get(acc) else {
        return (None, vec![Failure::validation("no sequence in the FASTA file")]);
    };
    let records = inputs
        .proteins
        .iter()
        .find(|p| &p.entry.accession == acc)
        .map(|p| counted(&p.records, include_mutations))
        .unwrap_or_default();
    let stats = match analytics::residue_counts(&records, entry.len()) {
        Ok(s) => s,
        Err(e) => return (None, vec![Failure::validation(e.to_string())]),
    };
    let bins = analytics::bin_hotspots(&stats);

    let mut failures = Vec::new();
    let mut candidates = Vec::new();
    let mut texts = Vec::new();
    for id in &item.structure_ids {
        let kind = kind_for_id(id);
        let loaded = fetcher
            .fetch_structure(download_id(id), kind)
            .map_err(fetch_failure)
            .and_then(|path| {
                std::fs::read_to_string(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
            })
            .and_then(|text| {
                let options = PdbOptions {
                    source_id: Some(id.clone()),
                    source_kind: Some(kind),
                };
                let model = parse_pdb_with(&text, &options).map_err(|e| Failure::validation(format!("{id}: {e}")))?;
                Ok((model, text))
            });
        match loaded {
            Ok((model, text)) => {
                candidates.push(model);
                texts.push(text);
            }
            Err(f) => failures.push(f),
        }
    }

    let Some(best) = select_best_model(&candidates) else {
        return (None, failures);
    };
    let text = &texts[candidates
        .iter()
        .position(|m| m.source_id == best.source_id)
        .expect("chosen from candidates")];
    let Some(chain) = item.preferred_chain.or_else(|| best.default_chain(acc)) else {
        failures.push(Failure::validation(format!("{}: no chains", best.source_id)));
        return (None, failures);
    };
    let written = emit_structure_coloring(best, chain, acc, &bins, colors)
        .map_err(|e| Failure::validation(format!("{}: {e}", best.source_id)))
        .and_then(|(coloring, json)| {
            write_atomic(out, &format!("{acc}.coloring.json"), json.as_bytes())?;
            write_atomic(out, &format!("{acc}.3dmol.js"), emit_3dmol_script(&coloring).as_bytes())?;
            write_atomic(out, &format!("{acc}.pdb"), text.as_bytes())?;
            Ok(ColorSummary {
                accession: acc.clone(),
                source_id: best.source_id.clone(),
                source_kind: best.source_kind,
                resolution: best.resolution,
                chain,
                residues: coloring.entries.len(),
                unmatched: coloring.unmatched().count(),
            })
        });
    match written {
        Ok(summary) => (Some(summary), failures),
        Err(f) => {
            failures.push(f);
            (None, failures)
        }
    }
}

pub fn run<T: Transport + Sync>(
    manifest: &Manifest,
    inputs: &Inputs,
    fetcher: &Fetcher<T>,
    out: &Path,
    include_mutations: bool,
    colors: &HotspotColors,
) -> (Vec<ColorSummary>, Vec<(String, Failure)>) {
    let results = exec::map_coarse(&manifest.entries, |item| {
        color_one(item, inputs, fetcher, out, include_mutations, colors)
    });
    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    for (item, (summary, errs)) in manifest.entries.iter().zip(results) {
        summaries.extend(summary);
        failures.extend(errs.into_iter().map(|f| (item.accession.clone(), f)));
    }
    (summaries, failures)
}

/// Fixed-width table of the chosen models.
pub fn summary_table(summaries: &[ColorSummary]) -> String {
    let mut out = format!(
        "{:<12} {:<16} {:<10} {:>10} {:>5} {:>9}\n",
        "accession", "source_id", "kind", "resolution", "chain", "residues"
    );
    for s in summaries {
        let kind = match s.source_kind {
            SourceKind::XRay => "x-ray",
            SourceKind::Predicted => "predicted",
        };
        let resolution = s.resolution.map(|r| format!("{r:.2}")).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<12} {:<16} {:<10} {:>10} {:>5} {:>9}\n",
            s.accession, s.source_id, kind, resolution, s.chain, s.residues
        ));
    }
    out
}
