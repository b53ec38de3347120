//! Parallel vs sequential timings. `cargo bench -p modview` compares the
//! default rayon pool with a one-thread pool; `--no-default-features`
//! benchmarks the plain sequential build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modview::analytics::{self, RowKey};
use modview::model::{ModificationRecord, ProteinEntry};
use modview::ordering::{seriate_bit_rows, BitRow};
use modview::pipeline::{render_protein, RenderOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(len: usize, n: usize, types: usize) -> (ProteinEntry, Vec<ModificationRecord>) {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let classes = [
        "Artefact",
        "Chemical derivative",
        "Post-translational",
        "Glycosylation",
        "Multiple",
    ];
    let records = (0..n)
        .map(|_| ModificationRecord {
            accession: "BENCH".into(),
            position: rng.random_range(1..=len as u32),
            residue: 'C',
            mod_type: format!("Type{}", rng.random_range(0..types)),
            classification: classes[rng.random_range(0..classes.len())].into(),
            is_mutation: rng.random_bool(0.02),
        })
        .collect();
    let entry = ProteinEntry {
        accession: "BENCH".into(),
        name: String::new(),
        species: String::new(),
        sequence: "C".repeat(len),
    };
    (entry, records)
}

fn random_rows(rows: usize, cols: usize) -> Vec<BitRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..rows)
        .map(|i| {
            let bits: Vec<bool> = (0..cols).map(|_| rng.random_bool(0.1)).collect();
            BitRow::from_bools(format!("row{i:04}"), &bits)
        })
        .collect()
}

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let mut threads = vec![1, rayon::current_num_threads()];
    threads.dedup();
    threads
        .into_iter()
        .map(|n| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            let name = if modview::exec::is_parallel() {
                format!("{n}-threads")
            } else {
                "sequential".into()
            };
            (name, pool)
        })
        .collect()
}

fn bench_render(c: &mut Criterion) {
    let (entry, records) = fixture(2000, 2500, 60);
    let mut group = c.benchmark_group("render_protein_2000x2500");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            pool.install(|| b.iter(|| render_protein(&entry, &records, &RenderOptions::default()).unwrap()))
        });
    }
    group.finish();
}

fn bench_seriation(c: &mut Criterion) {
    let mut group = c.benchmark_group("seriate");
    for &(rows, cols) in &[(60, 2000), (400, 5000)] {
        let bits = random_rows(rows, cols);
        for (name, pool) in pools() {
            group.bench_function(BenchmarkId::new(format!("{rows}x{cols}"), &name), |b| {
                pool.install(|| b.iter(|| seriate_bit_rows(&bits).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_patterns(c: &mut Criterion) {
    let (_, records) = fixture(20000, 50000, 200);
    let matrix = analytics::occupancy_matrix(&records, RowKey::ModType, 20000).unwrap();
    let mut group = c.benchmark_group("repeated_patterns_20000");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            pool.install(|| b.iter(|| analytics::find_repeated_patterns(&matrix)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_render, bench_seriation, bench_patterns);
criterion_main!(benches);
