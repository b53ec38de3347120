mod common;

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use common::{brute_force_seriation, check_scene, naive_hamming};
use modview::analytics::{self, RowKey};
use modview::ingest::{
    parse_modification_table, parse_pdb, select_best_model, serialize_modification_table, Dialect, Fetcher, SourceKind,
    StructureModel, Transport, TransportError,
};
use modview::layout::GlyphKind;
use modview::model::{validate_record, HotspotBin, ModificationRecord, OccupancyMatrix, Window, RECORD_FIELDS};
use modview::ordering::{hamming, seriate_bit_rows, seriate_rows, BitRow};
use modview::pipeline::{build_scenes, render_protein, RenderOptions};
use modview::render::{emit_scene_json, emit_svg, parse_scene_json};
use modview::ProteinEntry;
use proptest::prelude::*;

const RESIDUES: &[char] = &[
    'A', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'V', 'W', 'Y', 'X',
];

fn label() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z ,\"-]{0,10}[A-Za-z]"
}

fn record(len: u32) -> impl Strategy<Value = ModificationRecord> {
    (1..=len, prop::sample::select(RESIDUES), label(), label(), any::<bool>()).prop_map(
        |(position, residue, mod_type, classification, is_mutation)| ModificationRecord {
            accession: "P1".into(),
            position,
            residue,
            mod_type,
            classification,
            is_mutation,
        },
    )
}

/// Records drawn from small vocabularies so rows and stacks actually collide.
fn dense_records(max_len: u32) -> impl Strategy<Value = (u32, Vec<ModificationRecord>)> {
    (1..=max_len).prop_flat_map(|len| {
        let rec = (
            1..=len,
            prop::sample::select(vec![
                "Artefact",
                "Chemical derivative",
                "Post-translational",
                "Multiple",
            ]),
            prop::sample::select(vec!["Oxidation", "Acetyl", "Phospho", "Methyl", "Deamidation"]),
            prop::bool::weighted(0.15),
        )
            .prop_map(|(position, c, t, m)| ModificationRecord {
                accession: "P1".into(),
                position,
                residue: 'C',
                mod_type: t.into(),
                classification: c.into(),
                is_mutation: m,
            });
        (Just(len), prop::collection::vec(rec, 0..60))
    })
}

fn entry(len: u32) -> ProteinEntry {
    ProteinEntry {
        accession: "P1".into(),
        name: String::new(),
        species: String::new(),
        sequence: "C".repeat(len as usize),
    }
}

fn window_in(len: u32) -> impl Strategy<Value = Window> {
    (1..=len, 1..=len).prop_map(|(a, b)| Window::new(a.min(b), a.max(b)).unwrap())
}

fn bit_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(any::<bool>(), c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn validate_record_is_total(values in prop::collection::vec(prop::option::of(".{0,6}"), 6)) {
        let raw: HashMap<String, String> = RECORD_FIELDS
            .iter()
            .zip(values)
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        match validate_record(&raw) {
            Ok(r) => {
                prop_assert!(r.position >= 1);
                prop_assert!(RESIDUES.contains(&r.residue));
                prop_assert!(!r.mod_type.is_empty() && !r.classification.is_empty());
            }
            Err(e) => prop_assert!(RECORD_FIELDS.contains(&e.field())),
        }
    }

    #[test]
    fn table_round_trip(records in prop::collection::vec(record(5000), 0..40), tab in any::<bool>()) {
        let dialect = if tab { Dialect::Tab } else { Dialect::Comma };
        let text = serialize_modification_table(&records, dialect);
        let (parsed, report) = parse_modification_table(&text, dialect).unwrap();
        prop_assert!(report.is_clean());
        prop_assert_eq!(parsed, records);
    }

    #[test]
    fn residue_counts_sum_to_records((len, records) in dense_records(40)) {
        let stats = analytics::residue_counts(&records, len as usize).unwrap();
        prop_assert_eq!(stats.total, records.len() as u64);
        prop_assert_eq!(stats.counts.iter().map(|&c| c as u64).sum::<u64>(), stats.total);
        prop_assert_eq!(stats.count_at(stats.max_position), stats.max_count);
        prop_assert!(stats.counts.iter().all(|&c| c <= stats.max_count));
    }

    #[test]
    fn bins_are_monotone(a in 0u32..100, b in 0u32..100) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(HotspotBin::from_count(lo) <= HotspotBin::from_count(hi));
    }

    #[test]
    fn occupancy_columns_sum_to_counts((len, records) in dense_records(40)) {
        let stats = analytics::residue_counts(&records, len as usize).unwrap();
        for key in [RowKey::Classification, RowKey::ModType] {
            let m = analytics::occupancy_matrix(&records, key, len as usize).unwrap();
            let sums: Vec<u64> = stats.counts.iter().map(|&c| c as u64).collect();
            prop_assert_eq!(m.column_sums(), sums);
            let dist = analytics::distribution(&records, key);
            for (label, n) in dist {
                let r = m.row_index(&label).unwrap();
                prop_assert_eq!(m.row_sums()[r], n);
            }
        }
    }

    #[test]
    fn pattern_groups_share_columns((len, records) in dense_records(30)) {
        let m = analytics::occupancy_matrix(&records, RowKey::ModType, len as usize).unwrap();
        let groups = analytics::find_repeated_patterns(&m);
        let mut seen = HashSet::new();
        for g in &groups {
            prop_assert!(g.positions.len() >= 2);
            prop_assert!(g.signature.iter().any(|&v| v > 0));
            for &p in &g.positions {
                prop_assert!(seen.insert(p));
                prop_assert_eq!(&m.column(p as usize - 1), &g.signature);
            }
        }
        for c in 0..m.len() {
            let col = m.column(c);
            if col.iter().all(|&v| v == 0) {
                continue;
            }
            let twins = (0..m.len()).filter(|&d| m.column(d) == col).count();
            prop_assert_eq!(twins >= 2, seen.contains(&(c as u32 + 1)));
        }
    }

    #[test]
    fn hamming_is_a_metric(len in 1usize..300, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let v: Vec<Vec<bool>> = (0..3).map(|_| (0..len).map(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect()).collect();
        let b: Vec<BitRow> = v.iter().map(|x| BitRow::from_bools("r", x)).collect();
        let d = |i: usize, j: usize| hamming(&b[i], &b[j]).unwrap();
        prop_assert_eq!(d(0, 0), 0);
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2));
        prop_assert_eq!(d(0, 1), naive_hamming(&v[0], &v[1]));
    }

    #[test]
    fn seriation_matches_brute_force(rows in bit_matrix(6, 16)) {
        let labels: Vec<String> = (0..rows.len()).map(|i| format!("row{i}")).collect();
        let bits: Vec<BitRow> = labels.iter().zip(&rows).map(|(l, r)| BitRow::from_bools(l.clone(), r)).collect();
        let order = seriate_bit_rows(&bits).unwrap();
        prop_assert_eq!(&order, &brute_force_seriation(&labels, &rows));

        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..rows.len()).collect::<Vec<_>>());

        for w in order.windows(2) {
            let later_twin = order.iter().skip_while(|&&i| i != w[1]).any(|&i| i != w[0] && rows[i] == rows[w[0]]);
            prop_assert!(rows[w[0]] == rows[w[1]] || !later_twin, "duplicate rows split");
        }

        // Relabelling with an order-preserving map leaves the permutation unchanged.
        let relabelled: Vec<BitRow> = labels.iter().zip(&rows).map(|(l, r)| BitRow::from_bools(format!("x-{l}"), r)).collect();
        prop_assert_eq!(seriate_bit_rows(&relabelled).unwrap(), order);
    }

    #[test]
    fn seriation_on_count_matrices((len, records) in dense_records(20)) {
        prop_assume!(!records.is_empty());
        let m = analytics::occupancy_matrix(&records, RowKey::ModType, len as usize).unwrap();
        let rows: Vec<Vec<bool>> = (0..m.n_rows()).map(|r| m.row(r).iter().map(|&c| c > 0).collect()).collect();
        prop_assert_eq!(seriate_rows(&m).unwrap(), brute_force_seriation(m.row_labels(), &rows));
    }

    #[test]
    fn scenes_conserve_glyphs((len, records, window) in dense_records(60).prop_flat_map(|(len, r)| (Just(len), Just(r), window_in(len)))) {
        let opts = RenderOptions { window: Some(window), ..RenderOptions::default() };
        let (views, context, _, _) = build_scenes(&records, len as usize, &opts).unwrap();
        check_scene(&views.distribution, &records, None).map_err(TestCaseError::fail)?;
        check_scene(&views.classification, &records, Some(RowKey::Classification)).map_err(TestCaseError::fail)?;
        check_scene(&views.types, &records, Some(RowKey::ModType)).map_err(TestCaseError::fail)?;
        prop_assert_eq!(context.count(GlyphKind::WindowOverlay), 1);

        for scene in [&views.distribution, &views.classification, &views.types] {
            let svg = emit_svg(scene);
            let doc = roxmltree::Document::parse(&svg).unwrap();
            let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
            let crosses = doc.descendants().filter(|n| n.attribute("class") == Some("cross")).count();
            prop_assert_eq!(circles, scene.count(GlyphKind::Circle));
            prop_assert_eq!(crosses, scene.count(GlyphKind::Cross));
        }
    }

    #[test]
    fn scene_json_round_trips((len, records) in dense_records(30)) {
        let out = render_protein(&entry(len), &records, &RenderOptions::default()).unwrap();
        let text = emit_scene_json(&out.document);
        prop_assert_eq!(parse_scene_json(&text).unwrap(), out.document);
    }

    #[test]
    fn pdb_residues_are_unique(atoms in prop::collection::vec(atom_line(), 1..80)) {
        let text = atoms.join("\n");
        let model = parse_pdb(&text).unwrap();
        let mut seen = HashSet::new();
        for chain in &model.chains {
            for r in &chain.residues {
                prop_assert!(seen.insert((chain.id, r.number)));
            }
            let numbers: Vec<i32> = chain.residues.iter().map(|r| r.number).collect();
            let mut sorted = numbers.clone();
            sorted.sort_unstable();
            prop_assert_eq!(numbers, sorted);
        }
    }

    #[test]
    fn best_model_ignores_input_order(models in candidates().prop_shuffle(), rot in 0usize..8) {
        let best = select_best_model(&models).unwrap().clone();
        let mut rotated = models.clone();
        let k = rot % rotated.len();
        rotated.rotate_left(k);
        rotated.reverse();
        prop_assert_eq!(select_best_model(&rotated).unwrap(), &best);
        if models.iter().any(|m| m.source_kind == SourceKind::XRay) {
            prop_assert_eq!(best.source_kind, SourceKind::XRay);
        }
        if let Some(min) = models.iter().filter_map(|m| m.resolution.filter(|_| m.source_kind == SourceKind::XRay)).min_by(f64::total_cmp) {
            prop_assert_eq!(best.resolution, Some(min));
        }
    }

    #[test]
    fn fetch_is_idempotent(calls in 1usize..5) {
        let dir = tempfile::tempdir().unwrap();
        let transport = CountingTransport::default();
        let fetcher = Fetcher::new(dir.path(), &transport);
        let mut paths = Vec::new();
        for _ in 0..calls {
            paths.push(fetcher.fetch_structure("1ABC", SourceKind::XRay).unwrap());
        }
        prop_assert_eq!(transport.calls.load(Ordering::SeqCst), 1);
        prop_assert!(paths.windows(2).all(|w| w[0] == w[1]));
        prop_assert_eq!(std::fs::read(&paths[0]).unwrap(), BODY.to_vec());
    }
}

const BODY: &[u8] = b"HEADER    TEST\nEND\n";

#[derive(Default)]
struct CountingTransport {
    calls: AtomicUsize,
}

impl Transport for &CountingTransport {
    fn get(&self, _url: &str) -> Result<Vec<u8>, TransportError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(BODY.to_vec())
    }
}

fn atom_line() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!['A', 'B', 'C']),
        -5i32..40,
        prop::sample::select(vec![' ', ' ', 'A', 'B']),
        prop::sample::select(vec![' ', ' ', ' ', 'A']),
        prop::sample::select(vec!["ALA", "CYS", "LYS", "HOH", "XYZ"]),
        prop::sample::select(vec![" CA ", " N  ", " C  "]),
        any::<bool>(),
    )
        .prop_map(|(chain, resseq, alt, icode, res, name, het)| {
            let record = if het { "HETATM" } else { "ATOM  " };
            format!(
                "{record}{:>5} {name}{alt}{res} {chain}{resseq:>4}{icode}   {:>8.3}{:>8.3}{:>8.3}{:>6.2}{:>6.2}           C",
                1, 1.0, 2.0, 3.0, 1.0, 20.0
            )
        })
}

fn candidates() -> impl Strategy<Value = Vec<StructureModel>> {
    prop::collection::vec(candidate(), 1..8).prop_map(|mut v| {
        for (i, m) in v.iter_mut().enumerate() {
            m.source_id = format!("{i}ABC");
        }
        v
    })
}

fn candidate() -> impl Strategy<Value = StructureModel> {
    (any::<bool>(), prop::option::of(1u8..40)).prop_map(|(xray, res)| StructureModel {
        source_id: String::new(),
        source_kind: if xray { SourceKind::XRay } else { SourceKind::Predicted },
        resolution: if xray { res.map(|r| r as f64 / 10.0) } else { None },
        chains: Vec::new(),
        accession_offset: 0,
        dbrefs: Vec::new(),
        skipped_insertions: Vec::new(),
    })
}

#[test]
fn occupancy_matrix_rejects_duplicate_labels() {
    let rows = vec![("a".to_string(), vec![1, 0]), ("a".to_string(), vec![0, 1])];
    assert!(OccupancyMatrix::from_rows(rows, 2).is_err());
}
