//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use modview::analytics::RowKey;
use modview::ingest::{parse_fasta, parse_modification_table, Dialect};
use modview::layout::{GlyphKind, Scene};
use modview::model::{ModificationRecord, ProteinEntry, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn synthetic() -> (ProteinEntry, Vec<ModificationRecord>) {
    let fasta = std::fs::read_to_string(data_path("synthetic.fasta")).unwrap();
    let table = std::fs::read_to_string(data_path("synthetic.csv")).unwrap();
    let entry = parse_fasta(&fasta).unwrap().remove(0);
    let (records, report) = parse_modification_table(&table, Dialect::Comma).unwrap();
    assert!(report.is_clean());
    (entry, records)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Naive positionwise Hamming distance on unpacked vectors.
pub fn naive_hamming(a: &[bool], b: &[bool]) -> u32 {
    assert_eq!(a.len(), b.len());
    let mut d = 0;
    for i in 0..a.len() {
        if a[i] != b[i] {
            d += 1;
        }
    }
    d
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in all_permutations(n - 1) {
        for slot in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

/// Enumerates every permutation of the rows and keeps those consistent with
/// the greedy chain rules: the first row has the most set bits (smallest
/// label on ties) and each later row is, among the rows not yet placed, the
/// minimum by (distance to previous, distance to first, label). With
/// distinct labels exactly one permutation qualifies.
pub fn brute_force_seriation(labels: &[String], rows: &[Vec<bool>]) -> Vec<usize> {
    let n = rows.len();
    let ones = |i: usize| rows[i].iter().filter(|&&b| b).count();
    let mut valid = Vec::new();
    for perm in all_permutations(n) {
        let first = perm[0];
        let seed_ok = (0..n).all(|j| ones(first) > ones(j) || (ones(first) == ones(j) && labels[first] <= labels[j]));
        if !seed_ok {
            continue;
        }
        let mut ok = true;
        for k in 1..n {
            let prev = perm[k - 1];
            let chosen = perm[k];
            let key = |j: usize| {
                (
                    naive_hamming(&rows[j], &rows[prev]),
                    naive_hamming(&rows[j], &rows[first]),
                    labels[j].clone(),
                )
            };
            if perm[k..].iter().any(|&j| key(j) < key(chosen)) {
                ok = false;
                break;
            }
        }
        if ok {
            valid.push(perm);
        }
    }
    assert_eq!(valid.len(), 1, "greedy rules must single out one permutation");
    valid.remove(0)
}

/// Random records over a protein of length `len` with small label vocabularies.
pub fn random_records(rng: &mut ChaCha8Rng, accession: &str, len: usize, n: usize) -> Vec<ModificationRecord> {
    const CLASSES: [&str; 5] = [
        "Artefact",
        "Chemical derivative",
        "Post-translational",
        "Glycosylation",
        "Multiple",
    ];
    const TYPES: [&str; 8] = [
        "Oxidation",
        "Deamidation",
        "Acetyl",
        "Phospho",
        "Methyl",
        "Carbamidomethyl",
        "Nitrosyl",
        "HexNAc",
    ];
    (0..n)
        .map(|_| ModificationRecord {
            accession: accession.to_string(),
            position: rng.random_range(1..=len as u32),
            residue: 'C',
            mod_type: TYPES[rng.random_range(0..TYPES.len())].to_string(),
            classification: CLASSES[rng.random_range(0..CLASSES.len())].to_string(),
            is_mutation: rng.random_bool(0.1),
        })
        .collect()
}

pub fn random_window(rng: &mut ChaCha8Rng, len: usize) -> Window {
    let a = rng.random_range(1..=len as u32);
    let b = rng.random_range(1..=len as u32);
    Window::new(a.min(b), a.max(b)).unwrap()
}

/// Checks glyph conservation, cross counts, uniqueness of circle centres
/// within a band, payload resolution and canvas bounds. Returns a
/// description of the first violation.
pub fn check_scene(scene: &Scene, records: &[ModificationRecord], key: Option<RowKey>) -> Result<(), String> {
    let window = scene.window;
    let in_window: Vec<usize> = (0..records.len())
        .filter(|&i| window.contains(records[i].position))
        .collect();
    let circles: Vec<_> = scene.glyphs.iter().filter(|g| g.kind == GlyphKind::Circle).collect();
    if circles.len() != in_window.len() {
        return Err(format!(
            "{} circles for {} in-window records",
            circles.len(),
            in_window.len()
        ));
    }
    let mut covered: Vec<usize> = circles
        .iter()
        .map(|g| g.payload.as_ref().unwrap().record.unwrap())
        .collect();
    covered.sort_unstable();
    if covered != in_window {
        return Err("circle payloads do not cover in-window records exactly once".into());
    }
    for g in &circles {
        let p = g.payload.as_ref().unwrap();
        let rec = &records[p.record.unwrap()];
        if p.position != Some(rec.position) {
            return Err(format!(
                "payload position {:?} != record position {}",
                p.position, rec.position
            ));
        }
        if let Some(key) = key {
            if p.row.as_deref() != Some(key.of(rec)) {
                return Err("payload row does not match record".into());
            }
        }
    }
    let mutations = in_window.iter().filter(|&&i| records[i].is_mutation).count();
    let crosses = scene.glyphs.iter().filter(|g| g.kind == GlyphKind::Cross).count();
    if crosses != mutations {
        return Err(format!("{crosses} crosses for {mutations} in-window mutations"));
    }
    let mut seen = HashSet::new();
    for g in &circles {
        let band = g.payload.as_ref().unwrap().row.clone();
        let k = (band, (g.x * 100.0).round() as i64, (g.y * 100.0).round() as i64);
        if !seen.insert(k) {
            return Err(format!("overplotted circle at ({:.2}, {:.2})", g.x, g.y));
        }
    }
    for g in &scene.glyphs {
        let (x0, x1, y0, y1) = match g.kind {
            GlyphKind::Circle | GlyphKind::Cross => (g.x, g.x, g.y, g.y),
            GlyphKind::Label => (g.x, g.x, g.y, g.y),
            _ => (g.x, g.x + g.size, g.y, g.y + g.height),
        };
        let eps = 1e-9;
        if x0 < -eps || x1 > scene.width + eps || y0 < -eps || y1 > scene.height + eps {
            return Err(format!("{:?} glyph outside canvas at ({x0}, {y0})", g.kind));
        }
    }
    let map = scene.coordinate_map;
    if map.start != window.start() || map.end != window.end() {
        return Err("coordinate map does not span the window".into());
    }
    Ok(())
}
