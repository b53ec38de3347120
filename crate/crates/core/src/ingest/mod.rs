//! Input parsing and structure acquisition.

pub mod fasta;
pub mod fetch;
pub mod manifest;
pub mod pdb;
pub mod table;

use std::cmp::Ordering;

pub use fasta::{parse_fasta, FastaError};
pub use fetch::{FetchError, Fetcher, Transport, TransportError, UrlTemplates};
pub use manifest::{parse_manifest, Manifest, ManifestEntry, ManifestError};
pub use pdb::{parse_pdb, parse_pdb_with, PdbError, PdbOptions, SourceKind, StructureModel};
pub use table::{parse_modification_table, serialize_modification_table, Dialect, TableError};

/// Picks the model to color for one protein.
///
/// X-ray models with a stated resolution win, smallest resolution first; then
/// X-ray models without one; then predicted models. Remaining ties go to the
/// lexicographically smallest `source_id`, so the choice does not depend on
/// input order. Returns `None` only for an empty slice.
pub fn select_best_model(candidates: &[StructureModel]) -> Option<&StructureModel> {
    candidates.iter().min_by(|a, b| compare_candidates(a, b))
}

fn rank(model: &StructureModel) -> u8 {
    match (model.source_kind, model.resolution) {
        (SourceKind::XRay, Some(_)) => 0,
        (SourceKind::XRay, None) => 1,
        (SourceKind::Predicted, _) => 2,
    }
}

fn compare_candidates(a: &StructureModel, b: &StructureModel) -> Ordering {
    rank(a)
        .cmp(&rank(b))
        .then_with(|| match (rank(a), a.resolution, b.resolution) {
            (0, Some(x), Some(y)) => x.total_cmp(&y),
            _ => Ordering::Equal,
        })
        .then_with(|| a.source_id.cmp(&b.source_id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(id: &str, kind: SourceKind, resolution: Option<f64>) -> StructureModel {
        StructureModel {
            source_id: id.into(),
            source_kind: kind,
            resolution,
            chains: Vec::new(),
            accession_offset: 0,
            dbrefs: Vec::new(),
            skipped_insertions: Vec::new(),
        }
    }

    #[test]
    fn highest_resolution_xray_wins() {
        let c = [
            model("2AAA", SourceKind::XRay, Some(2.5)),
            model("3BBB", SourceKind::XRay, Some(1.9)),
        ];
        assert_eq!(select_best_model(&c).unwrap().source_id, "3BBB");
    }

    #[test]
    fn xray_preferred_over_predicted() {
        let c = [
            model("AF-P1", SourceKind::Predicted, None),
            model("1AAA", SourceKind::XRay, Some(2.0)),
        ];
        assert_eq!(select_best_model(&c).unwrap().source_id, "1AAA");
        let c = [
            model("AF-P1", SourceKind::Predicted, None),
            model("1AAA", SourceKind::XRay, None),
        ];
        assert_eq!(select_best_model(&c).unwrap().source_id, "1AAA");
    }

    #[test]
    fn predicted_only() {
        let c = [model("AF-P1", SourceKind::Predicted, None)];
        assert_eq!(select_best_model(&c).unwrap().source_id, "AF-P1");
        assert!(select_best_model(&[]).is_none());
    }

    #[test]
    fn resolution_tie_goes_to_smallest_id() {
        let c = [
            model("9ZZZ", SourceKind::XRay, Some(1.5)),
            model("1AAA", SourceKind::XRay, Some(1.5)),
        ];
        assert_eq!(select_best_model(&c).unwrap().source_id, "1AAA");
        let rev: Vec<_> = c.iter().rev().cloned().collect();
        assert_eq!(select_best_model(&rev).unwrap().source_id, "1AAA");
    }
}
