use thiserror::Error;

use crate::model::{is_residue_code, ProteinEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FastaError {
    #[error("line {line}: sequence data before any '>' header")]
    NoHeader { line: usize },
    #[error("record {accession:?} has no sequence")]
    EmptySequence { accession: String },
    #[error("record {accession:?}: invalid residue {residue:?} on line {line}")]
    InvalidResidue {
        accession: String,
        residue: char,
        line: usize,
    },
}

/// Parses FASTA text. UniProt headers (`>sp|ACC|NAME desc OS=... OX=...`)
/// are unwrapped into accession, name and species.
pub fn parse_fasta(text: &str) -> Result<Vec<ProteinEntry>, FastaError> {
    let mut entries = Vec::new();
    let mut current: Option<(ProteinEntry, usize)> = None;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            if let Some((entry, _)) = current.take() {
                entries.push(finish(entry)?);
            }
            current = Some((parse_header(header), line_no));
            continue;
        }
        let Some((entry, _)) = current.as_mut() else {
            return Err(FastaError::NoHeader { line: line_no });
        };
        for c in line.chars().filter(|c| !c.is_whitespace() && *c != '*') {
            let c = c.to_ascii_uppercase();
            if !is_residue_code(c) {
                return Err(FastaError::InvalidResidue {
                    accession: entry.accession.clone(),
                    residue: c,
                    line: line_no,
                });
            }
            entry.sequence.push(c);
        }
    }
    if let Some((entry, _)) = current {
        entries.push(finish(entry)?);
    }
    Ok(entries)
}

fn finish(entry: ProteinEntry) -> Result<ProteinEntry, FastaError> {
    if entry.sequence.is_empty() {
        return Err(FastaError::EmptySequence {
            accession: entry.accession,
        });
    }
    Ok(entry)
}

fn parse_header(header: &str) -> ProteinEntry {
    let header = header.trim();
    let (id, description) = match header.split_once(char::is_whitespace) {
        Some((id, rest)) => (id, rest.trim()),
        None => (header, ""),
    };

    let parts: Vec<&str> = id.split('|').collect();
    let (accession, mnemonic) = match parts.as_slice() {
        [db, acc, name, ..] if db.len() == 2 => (*acc, *name),
        [db, acc] if db.len() == 2 => (*acc, ""),
        _ => (id, ""),
    };

    let (title, species) = match description.find(" OS=") {
        Some(i) => {
            let os = &description[i + 4..];
            let end = os.find(" OX=").or_else(|| os.find(" GN=")).unwrap_or(os.len());
            (description[..i].trim(), os[..end].trim())
        }
        None => (description, ""),
    };
    let name = if !title.is_empty() { title } else { mnemonic };

    ProteinEntry {
        accession: accession.to_string(),
        name: name.to_string(),
        species: species.to_string(),
        sequence: String::new(),
    }
}
