use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::pdb::SourceKind;

/// Structures to consider for one protein.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub accession: String,
    pub structure_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferred_chain: Option<char>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("accession {0:?} appears more than once")]
    DuplicateAccession(String),
    #[error("accession {0:?} lists no structure ids")]
    NoStructures(String),
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let manifest: Manifest = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for entry in &manifest.entries {
        if !seen.insert(entry.accession.as_str()) {
            return Err(ManifestError::DuplicateAccession(entry.accession.clone()));
        }
        if entry.structure_ids.is_empty() {
            return Err(ManifestError::NoStructures(entry.accession.clone()));
        }
    }
    Ok(manifest)
}

/// Four-character ids starting with a digit are PDB entries; anything else
/// (a UniProt accession or an `AF-...` id) names a predicted model.
pub fn kind_for_id(id: &str) -> SourceKind {
    let bytes = id.as_bytes();
    if bytes.len() == 4 && bytes[0].is_ascii_digit() && bytes.iter().all(u8::is_ascii_alphanumeric) {
        SourceKind::XRay
    } else {
        SourceKind::Predicted
    }
}

/// Id as used in download templates: predicted ids are reduced to the bare
/// accession (`AF-P04075-F1` -> `P04075`).
pub fn download_id(id: &str) -> &str {
    match kind_for_id(id) {
        SourceKind::XRay => id,
        SourceKind::Predicted => id
            .strip_prefix("AF-")
            .map(|rest| rest.split('-').next().unwrap_or(rest))
            .unwrap_or(id),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let m = parse_manifest(
            r#"[{"accession":"P04075","structure_ids":["1ALD","4ALD"],"preferred_chain":"A"},
                {"accession":"P05064","structure_ids":["AF-P05064-F1"]}]"#,
        )
        .unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[0].preferred_chain, Some('A'));
        assert_eq!(m.entries[1].preferred_chain, None);
    }

    #[test]
    fn rejects_duplicates_and_empty_lists() {
        let dup = r#"[{"accession":"P1","structure_ids":["1ABC"]},{"accession":"P1","structure_ids":["2ABC"]}]"#;
        assert!(matches!(parse_manifest(dup), Err(ManifestError::DuplicateAccession(_))));
        let empty = r#"[{"accession":"P1","structure_ids":[]}]"#;
        assert!(matches!(parse_manifest(empty), Err(ManifestError::NoStructures(_))));
    }

    #[test]
    fn id_kinds() {
        assert_eq!(kind_for_id("1ALD"), SourceKind::XRay);
        assert_eq!(kind_for_id("P04075"), SourceKind::Predicted);
        assert_eq!(kind_for_id("AF-P04075-F1"), SourceKind::Predicted);
        assert_eq!(download_id("AF-P04075-F1"), "P04075");
        assert_eq!(download_id("P04075"), "P04075");
        assert_eq!(download_id("1ALD"), "1ALD");
    }
}
