//! Legacy fixed-column PDB parsing, reduced to what residue-level coloring
//! needs: chains, author-numbered residues, resolution, and DBREF offsets.
//!
//! Column layout (1-based, inclusive) of the records that are read:
//!
//! | Record     | Columns | Field                              |
//! |------------|---------|------------------------------------|
//! | HEADER     | 63-66   | idCode                             |
//! | ATOM       | 17      | altLoc                             |
//! |            | 18-20   | resName                            |
//! |            | 22      | chainID                            |
//! |            | 23-26   | resSeq                             |
//! |            | 27      | iCode                              |
//! | DBREF      | 13      | chainID                            |
//! |            | 15-18   | seqBegin (author numbering)        |
//! |            | 27-32   | database                           |
//! |            | 34-41   | dbAccession                        |
//! |            | 56-60   | dbseqBegin (sequence numbering)    |

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    XRay,
    Predicted,
}

impl SourceKind {
    /// Directory name used in the structure cache.
    pub fn cache_dir_name(self) -> &'static str {
        match self {
            SourceKind::XRay => "xray",
            SourceKind::Predicted => "predicted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureResidue {
    /// Author residue number (resSeq).
    pub number: i32,
    pub residue: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub id: char,
    pub residues: Vec<StructureResidue>,
}

/// Cross-reference from a chain to a sequence database entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbRef {
    pub chain: char,
    pub database: String,
    pub accession: String,
    /// author_number - sequence position
    pub offset: i32,
}

/// A residue dropped because it carries an insertion code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedResidue {
    pub chain: char,
    pub number: i32,
    pub insertion_code: char,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureModel {
    pub source_id: String,
    pub source_kind: SourceKind,
    /// Ångströms; absent for predicted models and non-diffraction methods.
    pub resolution: Option<f64>,
    pub chains: Vec<Chain>,
    pub accession_offset: i32,
    pub dbrefs: Vec<DbRef>,
    pub skipped_insertions: Vec<SkippedResidue>,
}

impl StructureModel {
    pub fn chain(&self, id: char) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    /// Offset for a chain: its DBREF to `accession` if present, then any DBREF
    /// on that chain, then the model-wide default.
    pub fn offset_for(&self, chain: char, accession: &str) -> i32 {
        self.dbrefs
            .iter()
            .find(|d| d.chain == chain && d.accession == accession)
            .or_else(|| self.dbrefs.iter().find(|d| d.chain == chain))
            .map(|d| d.offset)
            .unwrap_or(self.accession_offset)
    }

    /// Chain to color when none is requested: the first chain whose DBREF
    /// names `accession`, else `A`, else the first chain.
    pub fn default_chain(&self, accession: &str) -> Option<char> {
        self.dbrefs
            .iter()
            .find(|d| d.accession == accession && self.chain(d.chain).is_some())
            .map(|d| d.chain)
            .or_else(|| self.chain('A').map(|c| c.id))
            .or_else(|| self.chains.first().map(|c| c.id))
    }

    pub fn residue_count(&self) -> usize {
        self.chains.iter().map(|c| c.residues.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdbError {
    #[error("no ATOM or HETATM records")]
    NoAtoms,
    #[error("line {line}: malformed {record} record: {reason}")]
    MalformedRecord {
        line: usize,
        record: String,
        reason: String,
    },
}

/// Caller overrides applied while parsing.
#[derive(Debug, Clone, Default)]
pub struct PdbOptions {
    pub source_id: Option<String>,
    pub source_kind: Option<SourceKind>,
}

pub fn parse_pdb(text: &str) -> Result<StructureModel, PdbError> {
    parse_pdb_with(text, &PdbOptions::default())
}

pub fn parse_pdb_with(text: &str, options: &PdbOptions) -> Result<StructureModel, PdbError> {
    let mut header_id = String::new();
    let mut resolution = None;
    let mut predicted = false;
    let mut saw_atoms = false;
    let mut dbrefs = Vec::new();
    let mut chain_order: Vec<char> = Vec::new();
    let mut chains: HashMap<char, BTreeMap<i32, char>> = HashMap::new();
    let mut skipped = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let record = col(line, 1, 6);
        match record {
            "HEADER" => header_id = col(line, 63, 66).to_string(),
            "EXPDTA" => {
                let method = line.get(6..).unwrap_or("").to_ascii_uppercase();
                if method.contains("THEORETICAL MODEL") || method.contains("PREDICTED") {
                    predicted = true;
                }
            }
            "TITLE" | "REMARK" if line.to_ascii_uppercase().contains("ALPHAFOLD") => {
                predicted = true;
            }
            _ => {}
        }
        if record == "REMARK" && col(line, 7, 10) == "2" {
            if let Some(value) = parse_resolution(line) {
                resolution = Some(value);
            }
            continue;
        }
        match record {
            "DBREF" => dbrefs.push(parse_dbref(line, line_no)?),
            "ATOM" | "HETATM" => {
                saw_atoms = true;
                if record == "HETATM" {
                    continue;
                }
                let malformed = |reason: &str| PdbError::MalformedRecord {
                    line: line_no,
                    record: record.to_string(),
                    reason: reason.to_string(),
                };
                if line.len() < 26 || !line.is_ascii() {
                    return Err(malformed("line shorter than resSeq column"));
                }
                let alt = char_at(line, 17);
                if alt != ' ' && alt != 'A' {
                    continue;
                }
                let number: i32 = col(line, 23, 26)
                    .parse()
                    .map_err(|_| malformed("resSeq is not an integer"))?;
                let chain = char_at(line, 22);
                let icode = char_at(line, 27);
                if icode != ' ' {
                    let s = SkippedResidue {
                        chain,
                        number,
                        insertion_code: icode,
                    };
                    if !skipped.contains(&s) {
                        skipped.push(s);
                    }
                    continue;
                }
                let residues = chains.entry(chain).or_insert_with(|| {
                    chain_order.push(chain);
                    BTreeMap::new()
                });
                residues
                    .entry(number)
                    .or_insert_with(|| three_to_one(col(line, 18, 20)));
            }
            "ENDMDL" => break,
            _ => {}
        }
    }

    if !saw_atoms {
        return Err(PdbError::NoAtoms);
    }

    let chains = chain_order
        .into_iter()
        .map(|id| Chain {
            id,
            residues: chains[&id]
                .iter()
                .map(|(&number, &residue)| StructureResidue { number, residue })
                .collect(),
        })
        .collect();

    let source_kind = options.source_kind.unwrap_or(if predicted {
        SourceKind::Predicted
    } else {
        SourceKind::XRay
    });
    let resolution = match source_kind {
        SourceKind::XRay => resolution,
        SourceKind::Predicted => None,
    };
    let accession_offset = dbrefs
        .iter()
        .find(|d: &&DbRef| d.database == "UNP")
        .or_else(|| dbrefs.first())
        .map(|d| d.offset)
        .unwrap_or(0);

    Ok(StructureModel {
        source_id: options.source_id.clone().unwrap_or(header_id),
        source_kind,
        resolution,
        chains,
        accession_offset,
        dbrefs,
        skipped_insertions: skipped,
    })
}

/// `REMARK   2 RESOLUTION.    1.90 ANGSTROMS.`; `NOT APPLICABLE` yields `None`.
fn parse_resolution(line: &str) -> Option<f64> {
    let upper = line.to_ascii_uppercase();
    let at = upper.find("RESOLUTION.")?;
    let value: f64 = upper[at + "RESOLUTION.".len()..]
        .split_whitespace()
        .next()?
        .parse()
        .ok()?;
    (value > 0.0).then_some(value)
}

fn parse_dbref(line: &str, line_no: usize) -> Result<DbRef, PdbError> {
    let malformed = |reason: &str| PdbError::MalformedRecord {
        line: line_no,
        record: "DBREF".to_string(),
        reason: reason.to_string(),
    };
    let seq_begin: i32 = col(line, 15, 18).parse().map_err(|_| malformed("bad seqBegin"))?;
    let db_begin: i32 = col(line, 56, 60).parse().map_err(|_| malformed("bad dbseqBegin"))?;
    Ok(DbRef {
        chain: char_at(line, 13),
        database: col(line, 27, 32).to_string(),
        accession: col(line, 34, 41).to_string(),
        offset: seq_begin - db_begin,
    })
}

/// Trimmed text of 1-based inclusive columns `from..=to`; empty when absent.
fn col(line: &str, from: usize, to: usize) -> &str {
    let end = to.min(line.len());
    line.get(from - 1..end).map(str::trim).unwrap_or("")
}

fn char_at(line: &str, column: usize) -> char {
    line.as_bytes().get(column - 1).map(|&b| b as char).unwrap_or(' ')
}

/// One-letter code for a residue name; anything outside the standard 20 maps to `X`.
pub fn three_to_one(name: &str) -> char {
    match name {
        "ALA" => 'A',
        "ARG" => 'R',
        "ASN" => 'N',
        "ASP" => 'D',
        "CYS" => 'C',
        "GLN" => 'Q',
        "GLU" => 'E',
        "GLY" => 'G',
        "HIS" => 'H',
        "ILE" => 'I',
        "LEU" => 'L',
        "LYS" => 'K',
        "MET" => 'M',
        "PHE" => 'F',
        "PRO" => 'P',
        "SER" => 'S',
        "THR" => 'T',
        "TRP" => 'W',
        "TYR" => 'Y',
        "VAL" => 'V',
        _ => 'X',
    }
}
