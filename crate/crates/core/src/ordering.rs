//! Presence/absence bit rows, Hamming distance, and greedy row seriation.

use std::cmp::Reverse;

use thiserror::Error;

use crate::exec;
use crate::model::OccupancyMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("bit rows have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("cannot order a matrix with no rows")]
    EmptyMatrix,
}

/// Packed presence bits of one matrix row: bit `c` is set iff the count at
/// column `c` is non-zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    pub label: String,
    blocks: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn from_counts(label: impl Into<String>, counts: &[u32]) -> Self {
        let mut blocks = vec![0u64; counts.len().div_ceil(64)];
        for (c, _) in counts.iter().enumerate().filter(|(_, &v)| v > 0) {
            blocks[c / 64] |= 1 << (c % 64);
        }
        Self {
            label: label.into(),
            blocks,
            len: counts.len(),
        }
    }

    pub fn from_bools(label: impl Into<String>, bits: &[bool]) -> Self {
        let counts: Vec<u32> = bits.iter().map(|&b| b as u32).collect();
        Self::from_counts(label, &counts)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, c: usize) -> bool {
        c < self.len && (self.blocks[c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn set_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&c| self.get(c)).collect()
    }
}

pub fn binarize(matrix: &OccupancyMatrix) -> Vec<BitRow> {
    matrix
        .row_labels()
        .iter()
        .enumerate()
        .map(|(r, label)| BitRow::from_counts(label.clone(), matrix.row(r)))
        .collect()
}

/// Number of columns where `u` and `v` differ.
pub fn hamming(u: &BitRow, v: &BitRow) -> Result<u32, OrderingError> {
    if u.len != v.len {
        return Err(OrderingError::LengthMismatch(u.len, v.len));
    }
    Ok(hamming_blocks(&u.blocks, &v.blocks))
}

#[inline]
fn hamming_blocks(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Greedy nearest-neighbour chain over binarized rows.
///
/// The seed is the row with the most set bits (ties: smallest label). Each
/// step appends the unplaced row closest to the last placed one, breaking
/// ties by distance to the seed and then by label. Returns row indices in
/// display order.
pub fn seriate_rows(matrix: &OccupancyMatrix) -> Result<Vec<usize>, OrderingError> {
    seriate_bit_rows(&binarize(matrix))
}

pub fn seriate_bit_rows(rows: &[BitRow]) -> Result<Vec<usize>, OrderingError> {
    let Some(first) = rows.first() else {
        return Err(OrderingError::EmptyMatrix);
    };
    if let Some(bad) = rows.iter().find(|r| r.len != first.len) {
        return Err(OrderingError::LengthMismatch(first.len, bad.len));
    }

    let seed = (0..rows.len())
        .min_by_key(|&i| (Reverse(rows[i].count_ones()), &rows[i].label))
        .expect("non-empty");
    let to_seed = exec::map(rows, |r| hamming_blocks(&r.blocks, &rows[seed].blocks));

    let mut order = Vec::with_capacity(rows.len());
    order.push(seed);
    let mut unplaced: Vec<usize> = (0..rows.len()).filter(|&i| i != seed).collect();
    while !unplaced.is_empty() {
        let last = &rows[*order.last().expect("seeded")].blocks;
        let &next = exec::min_by_key(&unplaced, |&i| {
            (
                hamming_blocks(&rows[i].blocks, last),
                to_seed[i],
                rows[i].label.as_str(),
            )
        })
        .expect("non-empty");
        order.push(next);
        unplaced.retain(|&i| i != next);
    }
    Ok(order)
}
