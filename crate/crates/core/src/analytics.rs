//! Counting and grouping over modification records.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec;
use crate::model::{HotspotBin, ModificationRecord, OccupancyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("position {position} is outside the sequence (length {length})")]
    PositionOutOfRange { position: u32, length: usize },
}

/// Per-position modification counts for one protein.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueStats {
    /// `counts[i]` is the number of modifications at position `i + 1`.
    pub counts: Vec<u32>,
    pub total: u64,
    /// Smallest position holding `max_count`.
    pub max_position: u32,
    pub max_count: u32,
}

impl ResidueStats {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count_at(&self, position: u32) -> u32 {
        position
            .checked_sub(1)
            .and_then(|i| self.counts.get(i as usize))
            .copied()
            .unwrap_or(0)
    }
}

fn check_range(records: &[ModificationRecord], len: usize) -> Result<(), AnalyticsError> {
    match records.iter().find(|r| r.position as usize > len) {
        Some(r) => Err(AnalyticsError::PositionOutOfRange {
            position: r.position,
            length: len,
        }),
        None => Ok(()),
    }
}

pub fn residue_counts(records: &[ModificationRecord], len: usize) -> Result<ResidueStats, AnalyticsError> {
    check_range(records, len)?;
    let mut counts = vec![0u32; len];
    for r in records {
        counts[r.position as usize - 1] += 1;
    }
    let total = counts.iter().map(|&c| c as u64).sum();
    // First maximum wins, giving the smallest position on ties.
    let (max_idx, max_count) = counts
        .iter()
        .enumerate()
        .fold((0usize, 0u32), |best, (i, &c)| if c > best.1 { (i, c) } else { best });
    Ok(ResidueStats {
        counts,
        total,
        max_position: max_idx as u32 + 1,
        max_count,
    })
}

pub fn bin_hotspots(stats: &ResidueStats) -> Vec<HotspotBin> {
    stats.counts.iter().map(|&c| HotspotBin::from_count(c)).collect()
}

/// Which record field labels the rows of an occupancy matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKey {
    #[default]
    Classification,
    ModType,
}

impl RowKey {
    pub fn of(self, record: &ModificationRecord) -> &str {
        match self {
            RowKey::Classification => &record.classification,
            RowKey::ModType => &record.mod_type,
        }
    }
}

impl std::str::FromStr for RowKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classification" | "class" => Ok(RowKey::Classification),
            "mod_type" | "type" | "mod-type" => Ok(RowKey::ModType),
            other => Err(format!("unknown row key {other:?}")),
        }
    }
}

/// Tally of `key` values, largest first, ties alphabetical.
pub fn distribution(records: &[ModificationRecord], key: RowKey) -> Vec<(String, u64)> {
    let mut tally: HashMap<&str, u64> = HashMap::new();
    for r in records {
        *tally.entry(key.of(r)).or_default() += 1;
    }
    let mut out: Vec<(String, u64)> = tally.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

pub fn classification_distribution(records: &[ModificationRecord]) -> Vec<(String, u64)> {
    distribution(records, RowKey::Classification)
}

pub fn mod_type_distribution(records: &[ModificationRecord]) -> Vec<(String, u64)> {
    distribution(records, RowKey::ModType)
}

/// Modification counts per residue letter, largest first, ties alphabetical.
pub fn letter_frequency(records: &[ModificationRecord]) -> Vec<(char, u64)> {
    let mut tally: BTreeMap<char, u64> = BTreeMap::new();
    for r in records {
        *tally.entry(r.residue).or_default() += 1;
    }
    let mut out: Vec<_> = tally.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Rows appear in first-appearance order of their labels.
pub fn occupancy_matrix(
    records: &[ModificationRecord],
    key: RowKey,
    len: usize,
) -> Result<OccupancyMatrix, AnalyticsError> {
    check_range(records, len)?;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for r in records {
        let label = key.of(r);
        if !index.contains_key(label) {
            index.insert(label, labels.len());
            labels.push(label.to_string());
        }
    }
    let mut counts = vec![0u32; labels.len() * len];
    for r in records {
        let row = index[key.of(r)];
        counts[row * len + r.position as usize - 1] += 1;
    }
    Ok(OccupancyMatrix::new(labels, len, counts).expect("labels are distinct by construction"))
}

/// Mutated positions, ascending and deduplicated.
pub fn mutation_sites(records: &[ModificationRecord]) -> Vec<(u32, char)> {
    let mut sites: Vec<(u32, char)> = records
        .iter()
        .filter(|r| r.is_mutation)
        .map(|r| (r.position, r.residue))
        .collect();
    sites.sort_unstable();
    sites.dedup();
    sites
}

/// Positions whose full occupancy column is identical and non-zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGroup {
    /// Column vector shared by every position in the group, in matrix row order.
    pub signature: Vec<u32>,
    /// 1-based, ascending.
    pub positions: Vec<u32>,
}

/// Groups of two or more positions sharing a non-zero column. Largest groups
/// first, then by first position.
pub fn find_repeated_patterns(matrix: &OccupancyMatrix) -> Vec<PatternGroup> {
    if matrix.n_rows() == 0 {
        return Vec::new();
    }
    let columns = exec::map_range(matrix.len(), |c| matrix.column(c));
    let mut groups: HashMap<&[u32], Vec<u32>> = HashMap::new();
    for (c, column) in columns.iter().enumerate() {
        if column.iter().any(|&v| v > 0) {
            groups.entry(column.as_slice()).or_default().push(c as u32 + 1);
        }
    }
    let mut out: Vec<PatternGroup> = groups
        .into_iter()
        .filter(|(_, positions)| positions.len() >= 2)
        .map(|(signature, positions)| PatternGroup {
            signature: signature.to_vec(),
            positions,
        })
        .collect();
    out.sort_by(|a, b| {
        b.positions
            .len()
            .cmp(&a.positions.len())
            .then_with(|| a.positions[0].cmp(&b.positions[0]))
    });
    out
}

/// Tally of `key` values among records at one position.
pub fn composition_at(records: &[ModificationRecord], position: u32, key: RowKey) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for r in records.iter().filter(|r| r.position == position) {
        *out.entry(key.of(r).to_string()).or_default() += 1;
    }
    out
}

/// Everything reported per protein by the stats command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProteinSummary {
    pub accession: String,
    pub length: usize,
    pub stats: ResidueStats,
    pub classification_distribution: Vec<(String, u64)>,
    pub mod_type_distribution: Vec<(String, u64)>,
    pub mutation_sites: Vec<(u32, char)>,
    pub letter_frequency: Vec<(char, u64)>,
    pub hotspot_counts: BTreeMap<HotspotBin, u64>,
}

pub fn summarize(
    accession: &str,
    records: &[ModificationRecord],
    len: usize,
) -> Result<ProteinSummary, AnalyticsError> {
    let stats = residue_counts(records, len)?;
    let mut hotspot_counts = BTreeMap::new();
    for bin in bin_hotspots(&stats) {
        *hotspot_counts.entry(bin).or_default() += 1;
    }
    Ok(ProteinSummary {
        accession: accession.to_string(),
        length: len,
        classification_distribution: classification_distribution(records),
        mod_type_distribution: mod_type_distribution(records),
        mutation_sites: mutation_sites(records),
        letter_frequency: letter_frequency(records),
        hotspot_counts,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(position: u32, class: &str, ty: &str, mutation: bool) -> ModificationRecord {
        ModificationRecord {
            accession: "T".into(),
            position,
            residue: 'C',
            mod_type: ty.into(),
            classification: class.into(),
            is_mutation: mutation,
        }
    }

    #[test]
    fn counts_three_records() {
        let records = [
            rec(3, "a", "x", false),
            rec(3, "a", "x", false),
            rec(7, "b", "y", false),
        ];
        let stats = residue_counts(&records, 10).unwrap();
        assert_eq!(stats.counts, vec![0, 0, 2, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(stats.total, 3);
        assert_eq!(stats.max_position, 3);
        assert_eq!(stats.max_count, 2);
    }

    #[test]
    fn empty_counts() {
        let stats = residue_counts(&[], 5).unwrap();
        assert_eq!(stats.counts, vec![0; 5]);
        assert_eq!((stats.total, stats.max_count, stats.max_position), (0, 0, 1));
    }

    #[test]
    fn max_tie_takes_smallest_position() {
        let records = [rec(5, "a", "x", false), rec(2, "a", "x", false)];
        assert_eq!(residue_counts(&records, 5).unwrap().max_position, 2);
    }

    #[test]
    fn out_of_range_position() {
        assert_eq!(
            residue_counts(&[rec(11, "a", "x", false)], 10),
            Err(AnalyticsError::PositionOutOfRange {
                position: 11,
                length: 10
            })
        );
        assert!(occupancy_matrix(&[rec(11, "a", "x", false)], RowKey::ModType, 10).is_err());
    }

    #[test]
    fn classification_tally() {
        assert!(classification_distribution(&[]).is_empty());
        let records = [
            rec(1, "Multiple", "x", false),
            rec(2, "Artefact", "x", false),
            rec(3, "Artefact", "x", false),
        ];
        assert_eq!(
            classification_distribution(&records),
            vec![("Artefact".to_string(), 2), ("Multiple".to_string(), 1)]
        );
    }

    #[test]
    fn single_row_matrix() {
        let records = [rec(4, "a", "x", false), rec(4, "a", "x", false)];
        let m = occupancy_matrix(&records, RowKey::Classification, 5).unwrap();
        assert_eq!(m.row_labels(), ["a"]);
        assert_eq!(m.row(0), [0, 0, 0, 2, 0]);
        assert_eq!(occupancy_matrix(&[], RowKey::Classification, 5).unwrap().n_rows(), 0);
    }

    #[test]
    fn mutation_sites_sorted_dedup() {
        assert!(mutation_sites(&[rec(3, "a", "x", false)]).is_empty());
        let records = [rec(7, "a", "x", true), rec(2, "a", "x", true), rec(7, "b", "y", true)];
        assert_eq!(mutation_sites(&records), vec![(2, 'C'), (7, 'C')]);
    }

    #[test]
    fn repeated_patterns() {
        let zero = OccupancyMatrix::from_rows(vec![("a".into(), vec![0; 6])], 6).unwrap();
        assert!(find_repeated_patterns(&zero).is_empty());

        let m = OccupancyMatrix::from_rows(
            vec![
                ("a".into(), vec![0, 1, 0, 3, 1, 0]),
                ("b".into(), vec![0, 2, 0, 0, 2, 0]),
            ],
            6,
        )
        .unwrap();
        let groups = find_repeated_patterns(&m);
        assert_eq!(
            groups,
            vec![PatternGroup {
                signature: vec![1, 2],
                positions: vec![2, 5]
            }]
        );
    }

    #[test]
    fn pattern_group_order() {
        let m = OccupancyMatrix::from_rows(vec![("a".into(), vec![2, 1, 2, 1, 1, 0, 1])], 7).unwrap();
        let groups = find_repeated_patterns(&m);
        assert_eq!(groups[0].positions, vec![2, 4, 5, 7]);
        assert_eq!(groups[1].positions, vec![1, 3]);

        let tie = OccupancyMatrix::from_rows(vec![("a".into(), vec![2, 1, 2, 1])], 4).unwrap();
        let groups = find_repeated_patterns(&tie);
        assert_eq!(groups[0].positions, vec![1, 3]);
        assert_eq!(groups[1].positions, vec![2, 4]);
    }

    #[test]
    fn letter_frequency_orders_by_count() {
        let mut r = rec(1, "a", "x", false);
        r.residue = 'K';
        let records = [rec(2, "a", "x", false), r, rec(3, "a", "x", false)];
        assert_eq!(letter_frequency(&records), vec![('C', 2), ('K', 1)]);
    }
}
